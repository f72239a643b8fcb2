"""Print exact alpha constants, nef ray counts and a Monte Carlo cross-check."""

import argparse
import time

from manin_dp.cones import DEFAULT_RAY_CAP, UnsupportedDegree, alpha_constant, monte_carlo_volume, nef_curve_cone
from manin_dp.lattice import PicardLattice


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--max-r", type=int, default=7)
    p.add_argument("--samples", type=int, default=0, help="Monte Carlo samples (0 skips)")
    p.add_argument("--ray-cap", type=int, default=DEFAULT_RAY_CAP)
    args = p.parse_args()

    lattices = [PicardLattice.blow_up(r) for r in range(args.max_r + 1)] + [PicardLattice.quadric()]
    print(f"{'surface':<12} {'deg':>3} {'rays':>6} {'alpha':>8} {'volume':>10} {'mc':>12} {'sec':>7}")
    for lat in lattices:
        t0 = time.perf_counter()
        try:
            rays = len(nef_curve_cone(lat, args.ray_cap).generators)
            res = alpha_constant(lat, args.ray_cap)
        except UnsupportedDegree as e:
            print(f"{str(lat):<12} {lat.degree:>3}  unsupported: {e}")
            continue
        mc = f"{monte_carlo_volume(lat, samples=args.samples):.6g}" if args.samples else "-"
        print(f"{str(lat):<12} {lat.degree:>3} {rays:>6} {str(res.alpha):>8} {str(res.polytope_volume):>10} "
              f"{mc:>12} {time.perf_counter() - t0:>7.2f}")


if __name__ == "__main__":
    main()
