"""Polyhedral cones attached to a Picard lattice.

Cones are stored with primitive integer generators and inward facet
covectors.  Duality is taken against the plain dot product of coordinates;
the intersection pairing enters through :meth:`PicardLattice.polarized`.
Extreme rays come from an exact incremental double description.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

from manin_dp._exact import Vector, det_int, dot, nullspace, primitive, rank, rank_int, row_echelon, solve
from manin_dp.curves import lines
from manin_dp.lattice import (
    ClassVector,
    Model,
    PicardLattice,
    anticanonical_degree,
    pairing,
    self_intersection,
)

DEFAULT_RAY_CAP = 5000


class ConeError(ValueError):
    pass


class DegenerateConeError(ConeError):
    """Cone that is neither pointed nor full-dimensional."""


class UnsupportedDegree(RuntimeError):
    """Cone computation too large for the configured ray cap."""


class NotNefError(ValueError):
    pass


class _PlusInfinity:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "PlusInfinity"

    def __str__(self):
        return "+inf"

    def __eq__(self, other):
        return other is self or other == math.inf

    def __hash__(self):
        return hash(math.inf)

    def __gt__(self, other):
        return other is not self

    def __lt__(self, other):
        return False


PlusInfinity = _PlusInfinity()


@dataclass(frozen=True)
class RationalCone:
    ambient_rank: int
    generators: tuple[Vector, ...]
    facets: tuple[Vector, ...]

    def contains(self, x: Sequence) -> bool:
        return all(dot(f, x) >= 0 for f in self.facets)

    @property
    def dimension(self) -> int:
        return rank(self.generators) if self.generators else 0

    def is_full_dimensional(self) -> bool:
        return self.dimension == self.ambient_rank

    def is_pointed(self) -> bool:
        return (rank(self.facets) if self.facets else 0) == self.ambient_rank

    def to_json(self) -> dict:
        return {
            "ambient_rank": self.ambient_rank,
            "generators": [list(g) for g in self.generators],
            "facets": [list(f) for f in self.facets],
        }


@dataclass(frozen=True)
class AlphaResult:
    alpha: Fraction
    rho: int
    polytope_volume: Fraction

    def __post_init__(self):
        if self.alpha != self.rho * self.polytope_volume or self.alpha <= 0:
            raise ValueError(f"inconsistent alpha result {self}")

    def to_json(self) -> dict:
        return {
            "alpha": {"num": str(self.alpha.numerator), "den": str(self.alpha.denominator)},
            "rho": self.rho,
            "polytope_volume": {
                "num": str(self.polytope_volume.numerator),
                "den": str(self.polytope_volume.denominator),
            },
        }


# -- double description -----------------------------------------------------


def _bitcount(x: int) -> int:
    return bin(x).count("1")


def extreme_rays(ineqs: Sequence[Sequence[int]], n: int, cap: int = DEFAULT_RAY_CAP) -> list[Vector]:
    """Extreme rays of the pointed cone {x : a.x >= 0 for every row a}.

    The constraint matrix must have rank n.  Rays are primitive integer
    vectors in sorted order.  Raises :class:`UnsupportedDegree` if any
    intermediate ray list exceeds ``cap``.
    """
    rows: list[Vector] = []
    seen = set()
    for a in ineqs:
        if any(a):
            p = primitive(a)
            if p not in seen:
                seen.add(p)
                rows.append(p)
    if not rows or rank(rows) < n:
        raise ConeError("constraint system does not define a pointed cone")

    # greedy independent starting rows
    basis_idx: list[int] = []
    for i, row in enumerate(rows):
        if rank([rows[j] for j in basis_idx] + [row]) > len(basis_idx):
            basis_idx.append(i)
            if len(basis_idx) == n:
                break
    B = [rows[i] for i in basis_idx]
    rays: list[Vector] = []
    zeros: list[int] = []
    for k in range(n):
        x = solve(B, [int(j == k) for j in range(n)])
        rays.append(primitive(x))
        zeros.append(sum(1 << basis_idx[j] for j in range(n) if j != k))

    for idx, a in enumerate(rows):
        if idx in basis_idx:
            continue
        vals = [dot(a, x) for x in rays]
        pos = [i for i, v in enumerate(vals) if v > 0]
        neg = [i for i, v in enumerate(vals) if v < 0]
        zer = [i for i, v in enumerate(vals) if v == 0]
        new_rays = [rays[i] for i in pos] + [rays[i] for i in zer]
        new_zeros = [zeros[i] for i in pos] + [zeros[i] | (1 << idx) for i in zer]
        bit = 1 << idx
        for p in pos:
            zp = zeros[p]
            for q in neg:
                common = zp & zeros[q]
                if _bitcount(common) < n - 2:
                    continue
                # adjacent iff no third ray has a zero set containing the common one
                if any(
                    (zeros[t] & common) == common for t in range(len(rays)) if t != p and t != q
                ):
                    continue
                vp, vq = vals[p], vals[q]
                x = tuple(vp * cq - vq * cp for cp, cq in zip(rays[p], rays[q]))
                new_rays.append(primitive(x))
                new_zeros.append(common | bit)
        if len(new_rays) > cap:
            raise UnsupportedDegree(
                f"double description exceeded the ray cap ({cap}); raise the cap to attempt it"
            )
        rays, zeros = new_rays, new_zeros
    return sorted(set(rays))


def _dual_generators(gens: Sequence[Vector], n: int, cap: int) -> list[Vector]:
    G = [tuple(g) for g in gens if any(g)]
    if not G:
        out = []
        for i in range(n):
            e = tuple(int(i == j) for j in range(n))
            out += [e, tuple(-x for x in e)]
        return out
    k = rank(G)
    if k == n:
        return extreme_rays(G, n, cap)
    # split off the lineality space span(G)^perp and work inside span(G)
    red, _ = row_echelon(G)
    W = [primitive(r) for r in red]
    lineal = nullspace(G, n)
    constraints = [tuple(dot(g, w) for w in W) for g in G]
    zs = extreme_rays(constraints, k, cap)
    if not zs or rank(zs) < k:
        raise DegenerateConeError("cone is neither pointed nor full-dimensional")
    out = []
    for z in zs:
        y = [sum(z[i] * W[i][j] for i in range(k)) for j in range(n)]
        out.append(primitive(y))
    for v in lineal:
        out += [tuple(v), tuple(-x for x in v)]
    return sorted(set(out))


def _irredundant(gens: Sequence[Vector], dual_gens: Sequence[Vector], n: int) -> tuple[Vector, ...]:
    uniq = sorted({primitive(g) for g in gens if any(g)})
    if not dual_gens or rank_int(dual_gens) < n:
        return tuple(uniq)
    keep = []
    for g in uniq:
        tight = [y for y in dual_gens if dot(y, g) == 0]
        if tight and rank_int(tight) == n - 1:
            keep.append(g)
    return tuple(keep)


def cone_from_generators(gens: Sequence[Sequence[int]], n: int | None = None, cap: int = DEFAULT_RAY_CAP) -> RationalCone:
    gens = [tuple(int(x) for x in g) for g in gens]
    if n is None:
        n = len(gens[0])
    dual = _dual_generators(gens, n, cap)
    return RationalCone(n, _irredundant(gens, dual, n), tuple(dual))


def dual_cone(c: RationalCone, cap: int = DEFAULT_RAY_CAP) -> RationalCone:
    """Dual cone under the dot product; generators and facets swap roles."""
    n = c.ambient_rank
    gens = _dual_generators(c.generators, n, cap)
    return RationalCone(n, tuple(gens), _irredundant(c.generators, gens, n))


# -- cones of a del Pezzo surface ------------------------------------------


def effective_generators(lat: PicardLattice) -> list[ClassVector]:
    if lat.model is Model.QUADRIC:
        return [ClassVector((1, 0)), ClassVector((0, 1))]
    if lat.r == 0:
        return [lat.H()]
    if lat.r == 1:
        return sorted([lat.E(1), lat.H() - lat.E(1)])
    return lines(lat)


@lru_cache(maxsize=None)
def _nef_cone(lat: PicardLattice, cap: int) -> RationalCone:
    facets = [lat.polarized(e) for e in effective_generators(lat)]
    rays = extreme_rays(facets, lat.rank, cap)
    return RationalCone(lat.rank, tuple(rays), _irredundant(facets, rays, lat.rank))


def nef_curve_cone(lat: PicardLattice, cap: int = DEFAULT_RAY_CAP) -> RationalCone:
    """Curve classes pairing non-negatively with every effective generator."""
    return _nef_cone(lat, cap)


def is_nef(lat: PicardLattice, L: ClassVector) -> bool:
    return all(pairing(lat, L, e) >= 0 for e in effective_generators(lat))


def a_invariant(lat: PicardLattice, L: ClassVector, cap: int = DEFAULT_RAY_CAP):
    """Least t with K + tL effective, or PlusInfinity when L is nef but not big.

    K + tL is effective iff it pairs non-negatively with every nef ray N, so
    the optimum is the largest ratio (-K.N)/(L.N).
    """
    lat.check(L)
    if not is_nef(lat, L):
        raise NotNefError(f"{L!r} is not nef on {lat}")
    if self_intersection(lat, L) == 0:
        return PlusInfinity
    best = None
    for ray in nef_curve_cone(lat, cap).generators:
        N = ClassVector(ray)
        t = Fraction(anticanonical_degree(lat, N), pairing(lat, L, N))
        if best is None or t > best:
            best = t
    return best


def a_invariant_bisection(lat: PicardLattice, L: ClassVector, tol: float = 1e-9, hi: float = 64.0) -> float:
    """Numeric cross-check: bisection on LP membership of K + tL in the effective cone."""
    import numpy as np
    from scipy.optimize import linprog

    gens = np.array([e.coords for e in effective_generators(lat)], dtype=float).T
    K = np.array(lat.canonical.coords, dtype=float)
    Lv = np.array(L.coords, dtype=float)

    def effective(t: float) -> bool:
        res = linprog(
            np.zeros(gens.shape[1]),
            A_eq=gens,
            b_eq=K + t * Lv,
            bounds=[(0, None)] * gens.shape[1],
            method="highs",
        )
        return res.status == 0

    if not effective(hi):
        return math.inf
    lo = 0.0
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if effective(mid):
            hi = mid
        else:
            lo = mid
    return hi


# -- alpha constant ---------------------------------------------------------


class _SliceTriangulation:
    """Pulling triangulation of the degree-one slice of the nef cone."""

    def __init__(self, rays: Sequence[Vector], degrees: Sequence[int], facets: Sequence[Vector], pull_max: bool = False):
        self.rays = list(rays)
        self.degrees = list(degrees)
        self.pull_max = pull_max
        self.masks = []
        for f in facets:
            m = frozenset(i for i, v in enumerate(self.rays) if dot(f, v) == 0)
            if m:
                self.masks.append(m)
        self._dim_cache: dict[frozenset, int] = {}
        self._tri_cache: dict[frozenset, list[tuple[int, ...]]] = {}

    def dim(self, face: frozenset) -> int:
        if face not in self._dim_cache:
            self._dim_cache[face] = rank_int([self.rays[i] for i in face]) - 1
        return self._dim_cache[face]

    def triangulate(self, face: frozenset) -> list[tuple[int, ...]]:
        if face in self._tri_cache:
            return self._tri_cache[face]
        d = self.dim(face)
        if d == 0:
            out = [(next(iter(face)),)]
        else:
            p = max(face) if self.pull_max else min(face)
            subfaces = set()
            for m in self.masks:
                t = face & m
                if p in t or t == face or not t:
                    continue
                if self.dim(t) == d - 1:
                    subfaces.add(t)
            out = [(p,) + s for sub in sorted(subfaces, key=sorted) for s in self.triangulate(sub)]
        self._tri_cache[face] = out
        return out

    def simplex_volume(self, simplex: tuple[int, ...]) -> Fraction:
        denom = math.factorial(len(simplex))
        for i in simplex:
            denom *= self.degrees[i]
        return Fraction(abs(det_int([self.rays[i] for i in simplex])), denom)


def _slice_data(lat: PicardLattice, cap: int):
    cone = nef_curve_cone(lat, cap)
    rays = list(cone.generators)
    degrees = [anticanonical_degree(lat, ClassVector(v)) for v in rays]
    if any(d <= 0 for d in degrees):
        raise ConeError("anticanonical class is not positive on the nef cone")
    return cone, rays, degrees


def pyramid_simplices(lat: PicardLattice, pull_max: bool = False, cap: int = DEFAULT_RAY_CAP) -> list[Fraction]:
    """Volumes of the simplices (origin + slice simplex) of one triangulation."""
    cone, rays, degrees = _slice_data(lat, cap)
    tri = _SliceTriangulation(rays, degrees, cone.facets, pull_max=pull_max)
    simplices = tri.triangulate(frozenset(range(len(rays))))
    return [tri.simplex_volume(s) for s in simplices]


def alpha_constant(lat: PicardLattice, cap: int = DEFAULT_RAY_CAP) -> AlphaResult:
    """rank × volume of {γ ∈ Nef : -K.γ <= 1}, standard basis declared unimodular."""
    if lat.degree < 1:
        raise UnsupportedDegree(f"degree {lat.degree} is not supported")
    vol = sum(pyramid_simplices(lat, cap=cap), Fraction(0))
    return AlphaResult(lat.rank * vol, lat.rank, vol)


def monte_carlo_volume(lat: PicardLattice, samples: int = 10**6, grid: int = 1 << 16, seed: int = 0) -> float:
    """Independent estimate of vol{γ ∈ Nef : -K.γ <= 1}.

    Points of the degree-one slice are sampled from its bounding box on the
    grid (1/grid)Z^(rank-1), the last coordinate being solved from the degree;
    membership is then tested in exact integer arithmetic.  The pyramid over the
    slice has volume (projected slice volume) / (rank × |last -K coefficient|).
    """
    import numpy as np

    cone, rays, degrees = _slice_data(lat, DEFAULT_RAY_CAP)
    n = lat.rank
    kv = lat.polarized(lat.anticanonical)
    c_last = kv[-1]
    facets = np.array(cone.facets, dtype=np.int64)
    if n == 1:
        return float(Fraction(1, abs(c_last)))
    verts = [[Fraction(x, d) for x in v] for v, d in zip(rays, degrees)]
    lo = [math.floor(min(v[i] for v in verts) * grid) for i in range(n - 1)]
    hi = [math.ceil(max(v[i] for v in verts) * grid) for i in range(n - 1)]
    rng = np.random.default_rng(seed)
    pts = np.stack([rng.integers(lo[i], hi[i], size=samples, endpoint=False) for i in range(n - 1)], axis=1)
    pts = pts.astype(np.int64)
    # scaled point grid*c_last*γ, with last coordinate from -K.γ = 1
    prefix = pts * c_last
    rest = grid - pts @ np.array(kv[:-1], dtype=np.int64)
    full = np.concatenate([prefix, rest[:, None]], axis=1)
    sign = 1 if c_last > 0 else -1
    inside = np.all((full @ facets.T) * sign >= 0, axis=1)
    box = 1.0
    for i in range(n - 1):
        box *= (hi[i] - lo[i]) / grid
    area = inside.mean() * box
    return area / (n * abs(c_last))


# -- lattice points ---------------------------------------------------------


def _box_and_constraints(lat: PicardLattice, offset: ClassVector, d: int, cap: int):
    lat.check(offset)
    cone = nef_curve_cone(lat, cap)
    kv = lat.polarized(lat.anticanonical)
    d_off = dot(kv, offset.coords)
    budget = d - d_off
    if budget < 0:
        return None
    n = lat.rank
    pts = [[Fraction(0)] * n]
    for v in cone.generators:
        dv = dot(kv, v)
        pts.append([Fraction(budget * x, dv) for x in v])
    box = [(math.floor(min(p[i] for p in pts)), math.ceil(max(p[i] for p in pts))) for i in range(n)]
    return cone, kv, d_off, budget, box


def _last_interval(facets, kv, prefix: Sequence[int], budget: int, lo: int, hi: int) -> tuple[int, int]:
    """Range of the last coordinate of η with η in the cone and 0 <= -K.η <= budget."""
    rows = [(f[-1], dot(f[:-1], prefix)) for f in facets]
    s = dot(kv[:-1], prefix)
    rows.append((kv[-1], s))
    rows.append((-kv[-1], budget - s))
    for a, b in rows:
        # a*x + b >= 0
        if a > 0:
            lo = max(lo, -(b // a))
        elif a < 0:
            hi = min(hi, b // (-a))
        elif b < 0:
            return 1, 0
    return lo, hi


def nef_points(lat: PicardLattice, offset: ClassVector, d: int, cap: int = DEFAULT_RAY_CAP) -> Iterator[tuple[ClassVector, int]]:
    """Yield (γ, -K.γ) for integral γ in offset + Nef with 1 <= -K.γ <= d."""
    data = _box_and_constraints(lat, offset, d, cap)
    if data is None:
        return
    cone, kv, d_off, budget, box = data
    off = offset.coords
    for prefix in itertools.product(*(range(a, b + 1) for a, b in box[:-1])):
        lo, hi = _last_interval(cone.facets, kv, prefix, budget, box[-1][0], box[-1][1])
        for x in range(lo, hi + 1):
            eta = prefix + (x,)
            deg = d_off + dot(kv, eta)
            if deg >= 1:
                yield ClassVector(a + b for a, b in zip(off, eta)), deg


def count_nef_points(lat: PicardLattice, offset: ClassVector, d: int, cap: int = DEFAULT_RAY_CAP) -> dict[int, int]:
    """{degree: count} of integral classes in offset + Nef, degrees 1..d."""
    if d < 0:
        raise ValueError("d must be >= 0")
    data = _box_and_constraints(lat, offset, d, cap)
    if data is None:
        return {}
    cone, kv, d_off, budget, box = data
    step = kv[-1]
    diff = [0] * (d + 2)
    counts: dict[int, int] = {}
    for prefix in itertools.product(*(range(a, b + 1) for a, b in box[:-1])):
        lo, hi = _last_interval(cone.facets, kv, prefix, budget, box[-1][0], box[-1][1])
        if lo > hi:
            continue
        base = d_off + dot(kv[:-1], prefix)
        if abs(step) == 1:
            a, b = sorted((base + step * lo, base + step * hi))
            a = max(a, 1)
            if a <= b:
                diff[a] += 1
                diff[b + 1] -= 1
        else:
            for x in range(lo, hi + 1):
                deg = base + step * x
                if deg >= 1:
                    counts[deg] = counts.get(deg, 0) + 1
    running = 0
    for i in range(1, d + 1):
        running += diff[i]
        if running:
            counts[i] = counts.get(i, 0) + running
    return dict(sorted(counts.items()))
