"""Tabulate how the counting ratio and the Ehrhart count approach their limits.

For each d the relative deviations are printed together with d times the
deviation, which stays bounded when the error decays like c/d.
"""

import argparse
from fractions import Fraction

from manin_dp.cones import alpha_constant, count_nef_points
from manin_dp.counting import CountingModel, convergence_report
from manin_dp.lattice import ClassVector, PicardLattice


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--r", type=int, default=2)
    p.add_argument("--q", type=Fraction, default=Fraction(2))
    p.add_argument("--dmax", type=int, default=400)
    p.add_argument("--stride", type=int, default=50)
    args = p.parse_args()

    lat = PicardLattice.blow_up(args.r)
    vol = alpha_constant(lat).polytope_volume
    counts = count_nef_points(lat, ClassVector((0,) * lat.rank), args.dmax)
    rep = convergence_report(CountingModel(lat, q=args.q), args.dmax, args.stride)
    print(f"{lat}: volume {vol}, target {rep.target} (q={args.q})")
    print(f"{'d':>5} {'ehrhart dev':>12} {'d*dev':>8} {'ratio dev':>10} {'d*dev':>8}")
    running = 0
    by_d = {}
    for d in range(1, args.dmax + 1):
        running += counts.get(d, 0)
        by_d[d] = running
    for row in rep.rows:
        e = float(abs(Fraction(by_d[row.d], row.d ** lat.rank) - vol) / vol)
        c = float(row.relative_error)
        print(f"{row.d:>5} {e:>12.4%} {e * row.d:>8.3f} {c:>10.4%} {c * row.d:>8.3f}")
    if rep.truncated:
        print(f"truncated before d={rep.truncated_at}")


if __name__ == "__main__":
    main()
