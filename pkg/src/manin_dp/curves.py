"""Special curve classes on del Pezzo surfaces.

Lines are the (-1)-classes of anticanonical degree 1, conic classes the
fibration classes (square 0, degree 2), and line systems the classes of
degree 3 and square 1.  Enumeration is a bounded integer search; the Weyl
reflection closure in :func:`weyl_orbit` is kept as an independent
cross-check and is not used by the enumerator.
"""

from __future__ import annotations

import enum
import math
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator

from manin_dp.lattice import (
    ClassVector,
    LatticeError,
    Model,
    PicardLattice,
    anticanonical_degree,
    pairing,
    self_intersection,
)

WEYL_ITERATION_BOUND = 10**6


class ConicKind(str, enum.Enum):
    FIBRATION_MEMBER = "ConicFibrationMember"
    DEGREE2_ANTICANONICAL = "Degree2Anticanonical"
    DEGREE1_PULLBACK = "Degree1PullbackOfDegree2Anticanonical"
    DEGREE1_TWICE_ANTICANONICAL = "Degree1TwiceAnticanonical"


SINGULAR_CONIC_KINDS = frozenset(
    {
        ConicKind.DEGREE2_ANTICANONICAL,
        ConicKind.DEGREE1_PULLBACK,
        ConicKind.DEGREE1_TWICE_ANTICANONICAL,
    }
)


@dataclass(frozen=True)
class ConicCase:
    case: ConicKind
    generic_node_count: int
    # for the degree-1 pullback case: the (-1)-class c + K
    witness: ClassVector | None = None


class ConicClassificationError(ValueError):
    def __init__(self, cls: ClassVector, violations: list[str]):
        self.cls = cls
        self.violations = violations
        super().__init__(f"{cls!r} is not an anticanonical conic: violates " + "; ".join(violations))


class AInvariantClass(str, enum.Enum):
    GREATER = "AInvariantGreater"
    EQUAL = "AInvariantEqual"
    LESS = "AInvariantLess"


class Shape(str, enum.Enum):
    SMOOTH_CUBIC = "SmoothCubic"
    LINE_PLUS_CONIC = "LinePlusConic"
    CHAIN_OF_THREE_LINES = "ChainOfThreeLines"


@dataclass(frozen=True)
class LineSystemDecomposition:
    shape: Shape
    parts: tuple[ClassVector, ...] = field(default_factory=tuple)


class WeylClosureError(RuntimeError):
    pass


# -- enumeration ------------------------------------------------------------


def _isqrt_floor(n: int) -> int:
    return math.isqrt(n) if n >= 0 else -1


def _b_vectors(k: int, total: int, squares: int) -> Iterator[tuple[int, ...]]:
    """Integer vectors of length k with the given sum and sum of squares."""
    if k == 0:
        if total == 0 and squares == 0:
            yield ()
        return
    if squares < 0 or total * total > k * squares:
        return
    if k == 1:
        if total * total == squares:
            yield (total,)
        return
    # remaining k-1 coordinates must satisfy Cauchy-Schwarz after choosing b
    disc = (k - 1) * (k * squares - total * total)
    root = _isqrt_floor(disc)
    lo = (total - root - 1) // k
    hi = (total + root + 1) // k + 1
    for b in range(lo, hi + 1):
        rest_sq = squares - b * b
        rest_total = total - b
        if rest_sq < 0 or rest_total * rest_total > (k - 1) * rest_sq:
            continue
        for tail in _b_vectors(k - 1, rest_total, rest_sq):
            yield (b,) + tail


@lru_cache(maxsize=None)
def _enumerate(lat: PicardLattice, antideg: int, selfint: int) -> tuple[ClassVector, ...]:
    out: list[ClassVector] = []
    if lat.model is Model.QUADRIC:
        # x F1 + y F2 : -K.c = 2(x + y), c^2 = 2xy
        if antideg % 2 or selfint % 2:
            return ()
        s, p = antideg // 2, selfint // 2
        disc = s * s - 4 * p
        if disc < 0:
            return ()
        t = math.isqrt(disc)
        if t * t != disc or (s - t) % 2:
            return ()
        xs = {(s - t) // 2, (s + t) // 2}
        out = [ClassVector((x, s - x)) for x in xs]
        return tuple(sorted(out))

    r = lat.r
    # a = H-coefficient; (3a - D)^2 <= r (a^2 - s)  <=>  (9-r) a^2 - 6 D a + D^2 + r s <= 0
    qa, qb, qc = 9 - r, -6 * antideg, antideg * antideg + r * selfint
    disc = qb * qb - 4 * qa * qc
    if disc < 0:
        return ()
    root = math.isqrt(disc)
    a_lo = (-qb - root) // (2 * qa) - 1
    a_hi = (-qb + root) // (2 * qa) + 1
    for a in range(a_lo, a_hi + 1):
        total = 3 * a - antideg
        squares = a * a - selfint
        if r == 0:
            if total == 0 and squares == 0:
                out.append(ClassVector((a,)))
            continue
        for bs in _b_vectors(r, total, squares):
            out.append(ClassVector((a,) + tuple(-b for b in bs)))
    return tuple(sorted(out))


def enumerate_classes(lat: PicardLattice, antideg: int, selfint: int) -> list[ClassVector]:
    """All integral classes with -K.c = antideg and c.c = selfint, sorted lexicographically."""
    if antideg < 1:
        raise ValueError(f"antideg must be >= 1, got {antideg}")
    return list(_enumerate(lat, antideg, selfint))


def lines(lat: PicardLattice) -> list[ClassVector]:
    return enumerate_classes(lat, 1, -1)


def conic_classes(lat: PicardLattice) -> list[ClassVector]:
    return enumerate_classes(lat, 2, 0)


def line_systems(lat: PicardLattice) -> list[ClassVector]:
    return enumerate_classes(lat, 3, 1)


# -- Weyl reflection oracle -------------------------------------------------


def simple_roots(lat: PicardLattice) -> list[ClassVector]:
    """Simple (-2)-roots E_i - E_{i+1} and H - E1 - E2 - E3 of the blow-up lattice."""
    if lat.model is not Model.BLOW_UP:
        return []
    r = lat.r
    roots = [lat.E(i) - lat.E(i + 1) for i in range(1, r)]
    if r >= 3:
        roots.append(lat.H() - lat.E(1) - lat.E(2) - lat.E(3))
    return roots


def reflect(lat: PicardLattice, x: ClassVector, root: ClassVector) -> ClassVector:
    """Reflection in a (-2)-class: x -> x + (x.root) root."""
    return x + root * pairing(lat, x, root)


def weyl_orbit(
    lat: PicardLattice, seeds: Iterable[ClassVector], bound: int = WEYL_ITERATION_BOUND
) -> list[ClassVector]:
    """Closure of ``seeds`` under the simple reflections, sorted."""
    roots = simple_roots(lat)
    seen = set(seeds)
    queue = deque(seen)
    steps = 0
    while queue:
        x = queue.popleft()
        for root in roots:
            steps += 1
            if steps > bound:
                raise WeylClosureError(f"reflection closure exceeded {bound} steps")
            y = reflect(lat, x, root)
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return sorted(seen)


def line_orbit_seeds(lat: PicardLattice) -> list[ClassVector]:
    """Orbit representatives of lines under the simple reflections.

    For r >= 3 the lines form one orbit through E_r.  At r = 2 the only root
    is E1 - E2, which fixes H - E1 - E2, so that class is a second seed.
    """
    if lat.model is not Model.BLOW_UP or lat.r == 0:
        return []
    seeds = [lat.E(lat.r)]
    if lat.r == 2:
        seeds.append(lat.H() - lat.E(1) - lat.E(2))
    return seeds


def conic_orbit_seeds(lat: PicardLattice) -> list[ClassVector]:
    if lat.model is not Model.BLOW_UP or lat.r == 0:
        return []
    return [lat.H() - lat.E(1)]


# -- classification ---------------------------------------------------------


def conic_violations(degree: int, antideg: int, selfint: int) -> list[str]:
    out = []
    if selfint % 2:
        out.append("c.c must be even (adjunction)")
    if selfint < 0:
        out.append("c.c must be >= 0 (adjunction)")
    if antideg != 2:
        out.append(f"-K.c must equal 2 (got {antideg})")
    if degree * selfint - 4 > 0:
        out.append(f"d*c^2 - 4 <= 0 fails (Hodge index: d={degree}, c^2={selfint})")
    return out


def classify_anticanonical_conic(lat: PicardLattice, c: ClassVector) -> ConicCase:
    deg = anticanonical_degree(lat, c)
    sq = self_intersection(lat, c)
    d = lat.degree
    bad = conic_violations(d, deg, sq)
    if bad:
        raise ConicClassificationError(c, bad)
    if sq == 0:
        return ConicCase(ConicKind.FIBRATION_MEMBER, 0)
    K = lat.canonical
    if d == 2 and sq == 2:
        # equality in Hodge index forces c proportional to -K
        if c != -K:
            raise AssertionError(f"{c!r} has c^2 = 2 on a degree 2 lattice but is not -K")
        return ConicCase(ConicKind.DEGREE2_ANTICANONICAL, 1)
    if d == 1 and sq == 2:
        w = c + K
        if self_intersection(lat, w) != -1 or anticanonical_degree(lat, w) != 1:
            raise AssertionError(f"c + K = {w!r} is not a (-1)-class")
        return ConicCase(ConicKind.DEGREE1_PULLBACK, 1, witness=w)
    if d == 1 and sq == 4:
        if c != K * -2:
            raise AssertionError(f"{c!r} has c^2 = 4 on a degree 1 lattice but is not -2K")
        return ConicCase(ConicKind.DEGREE1_TWICE_ANTICANONICAL, 2)
    raise AssertionError(f"unreachable conic state: d={d}, c^2={sq}")


def _is_line(lat: PicardLattice, c: ClassVector) -> bool:
    return anticanonical_degree(lat, c) == 1 and self_intersection(lat, c) == -1


def _is_conic_fibration_class(lat: PicardLattice, c: ClassVector) -> bool:
    return anticanonical_degree(lat, c) == 2 and self_intersection(lat, c) == 0


def conic_multiple(lat: PicardLattice, c: ClassVector) -> tuple[ClassVector, int] | None:
    """(Q, k) if c = kQ with Q a conic fibration class and k >= 1."""
    if c.is_zero():
        return None
    g = 0
    for x in c:
        g = math.gcd(g, x)
    q = ClassVector(x // g for x in c)
    if anticanonical_degree(lat, q) < 0:
        return None
    if _is_conic_fibration_class(lat, q):
        return q, g
    return None


def classify_vertical_curve_class(lat: PicardLattice, c: ClassVector) -> AInvariantClass:
    lat.check(c)
    d = lat.degree
    K = lat.canonical
    if _is_line(lat, c) or (d == 1 and c == -K):
        return AInvariantClass.GREATER
    if conic_multiple(lat, c) is not None:
        return AInvariantClass.EQUAL
    if d == 2 and c == -K:
        return AInvariantClass.EQUAL
    if d == 1:
        if c == K * -2:
            return AInvariantClass.EQUAL
        if anticanonical_degree(lat, c) == 2 and self_intersection(lat, c) == 2:
            if classify_anticanonical_conic(lat, c).case is ConicKind.DEGREE1_PULLBACK:
                return AInvariantClass.EQUAL
    return AInvariantClass.LESS


# -- systems of lines -------------------------------------------------------


def _is_chain(lat: PicardLattice, a: ClassVector, b: ClassVector, c: ClassVector) -> bool:
    return pairing(lat, a, b) == 1 and pairing(lat, b, c) == 1 and pairing(lat, a, c) == 0


def _match_shapes(lat: PicardLattice, L: ClassVector, parts: tuple[ClassVector, ...]) -> list[Shape]:
    """Shapes a decomposition (parts sorted by degree) is compatible with."""
    degs = [anticanonical_degree(lat, p) for p in parts]
    shapes = []
    if len(parts) == 1 and parts[0] == L:
        shapes.append(Shape.SMOOTH_CUBIC)
    if degs == [1, 2]:
        e, q = parts
        if _is_line(lat, e) and _is_conic_fibration_class(lat, q) and pairing(lat, e, q) == 1:
            shapes.append(Shape.LINE_PLUS_CONIC)
    if degs == [1, 1, 1] and all(_is_line(lat, p) for p in parts):
        a, b, c = parts
        if any(_is_chain(lat, *perm) for perm in ((a, b, c), (b, a, c), (a, c, b))):
            shapes.append(Shape.CHAIN_OF_THREE_LINES)
    return shapes


def _raw_decompositions(lat: PicardLattice, L: ClassVector) -> list[tuple[ClassVector, ...]]:
    """Every way of writing L as a sum of line, anticanonical-conic and cubic classes."""
    line_list = lines(lat)
    line_set = set(line_list)
    out: list[tuple[ClassVector, ...]] = [(L,)]
    for e in line_list:
        q = L - e
        if anticanonical_degree(lat, q) != 2:
            continue
        try:
            classify_anticanonical_conic(lat, q)
        except ConicClassificationError:
            continue
        out.append((e, q))
    for i, e1 in enumerate(line_list):
        for e2 in line_list[i:]:
            e3 = L - e1 - e2
            if e3 in line_set and e2 <= e3:
                out.append((e1, e2, e3))
    return out


def decompose_line_system(lat: PicardLattice, L: ClassVector) -> list[LineSystemDecomposition]:
    if anticanonical_degree(lat, L) != 3 or self_intersection(lat, L) != 1:
        raise LatticeError(f"{L!r} is not a system of lines (need -K.L = 3, L^2 = 1)")
    result = []
    for parts in _raw_decompositions(lat, L):
        shapes = _match_shapes(lat, L, parts)
        if len(shapes) != 1:
            raise AssertionError(f"decomposition {parts!r} of {L!r} matches shapes {shapes}")
        shape = shapes[0]
        if shape is Shape.CHAIN_OF_THREE_LINES:
            parts = _as_chain(lat, parts)
        result.append(LineSystemDecomposition(shape, parts))
    return result


def _as_chain(lat: PicardLattice, parts: tuple[ClassVector, ...]) -> tuple[ClassVector, ...]:
    a, b, c = parts
    for x, y, z in ((a, b, c), (b, a, c), (a, c, b)):
        if _is_chain(lat, x, y, z):
            return (x, y, z) if x <= z else (z, y, x)
    raise AssertionError("not a chain")
