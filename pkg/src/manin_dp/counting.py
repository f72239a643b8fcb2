"""Counting function for sections of a del Pezzo fibration, in the lattice model.

The model assumes one relatively free component per integral class of
offset + Nef (times the Brauer order), with dimension height + 2(1 - g).
Results computed this way are conditional on that component count.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from decimal import ROUND_HALF_EVEN, Context, Decimal
from fractions import Fraction
from typing import Iterable, Sequence

from manin_dp.bundles import NormalBundleDescriptor, Structure, Tri
from manin_dp.cones import _box_and_constraints, alpha_constant, count_nef_points, nef_points, DEFAULT_RAY_CAP
from manin_dp.curves import (
    SINGULAR_CONIC_KINDS,
    AInvariantClass,
    ConicClassificationError,
    ConicKind,
    classify_anticanonical_conic,
    classify_vertical_curve_class,
)
from manin_dp.fibration import expected_dimension
from manin_dp.lattice import ClassVector, Model, PicardLattice, anticanonical_degree, self_intersection

CONDITIONAL_NOTE = "assumes |Br| components per numerical class of offset + Nef (conjectural component count)"
OUTSIDE_HYPOTHESES = "outside the theorem's hypotheses (fiber is P2 or P1xP1)"
DEFAULT_WORK_BUDGET = 5 * 10**6


class ComponentKind(str, enum.Enum):
    RELATIVELY_FREE = "RelativelyFree"
    DOMINANT_NON_FREE = "DominantNonFree"
    NON_DOMINANT = "NonDominant"


class Classification(str, enum.Enum):
    MANIN = "Manin"
    ACCUMULATING = "Accumulating"


class CensusError(ValueError):
    pass


@dataclass(frozen=True)
class ComponentCensusEntry:
    height: int
    dim: int
    kind: ComponentKind = ComponentKind.RELATIVELY_FREE
    swept_class: AInvariantClass | None = None
    swept_is_line: bool = False
    swept_conic_case: ConicKind | None = None
    fiber_picard_rank_one: bool = False

    def __post_init__(self):
        object.__setattr__(self, "kind", ComponentKind(self.kind))
        if self.height < 1:
            raise CensusError("height must be positive")
        if self.dim < 0:
            raise CensusError("dim must be non-negative")

    @classmethod
    def swept(
        cls,
        lat: PicardLattice,
        fiber_class: ClassVector,
        height: int,
        dim: int,
        kind: ComponentKind = ComponentKind.NON_DOMINANT,
        fiber_picard_rank_one: bool = False,
    ) -> "ComponentCensusEntry":
        """Entry for sections sweeping a surface that meets a fiber in ``fiber_class``."""
        deg = anticanonical_degree(lat, fiber_class)
        sq = self_intersection(lat, fiber_class)
        conic = None
        if deg == 2:
            try:
                conic = classify_anticanonical_conic(lat, fiber_class).case
            except ConicClassificationError:
                conic = None
        return cls(
            height,
            dim,
            kind,
            swept_class=classify_vertical_curve_class(lat, fiber_class),
            swept_is_line=(deg == 1 and sq == -1),
            swept_conic_case=conic,
            fiber_picard_rank_one=fiber_picard_rank_one,
        )


def classify_component(e: ComponentCensusEntry) -> Classification:
    if e.kind is ComponentKind.RELATIVELY_FREE:
        return Classification.MANIN
    if e.swept_class is None:
        raise CensusError(f"{e.kind.value} entry needs the class of the swept fiber curve")
    if e.swept_class is AInvariantClass.GREATER and e.swept_is_line:
        return Classification.ACCUMULATING
    if e.fiber_picard_rank_one and e.swept_conic_case in SINGULAR_CONIC_KINDS:
        return Classification.ACCUMULATING
    return Classification.MANIN


def counting_function(census: Iterable[ComponentCensusEntry], q, d: int) -> Fraction:
    q = Fraction(q)
    total = Fraction(0)
    for e in census:
        if e.height <= d and classify_component(e) is Classification.MANIN:
            total += q**e.dim
    return total


@dataclass(frozen=True)
class CountingModel:
    lattice: PicardLattice
    base_genus: int = 1
    offset: ClassVector | None = None
    q: Fraction = Fraction(2)
    brauer_order: int = 1
    profile_count: int = 1
    lattice_index: int = 1

    def __post_init__(self):
        object.__setattr__(self, "q", Fraction(self.q))
        if self.q <= 1:
            raise CensusError("q must be > 1")
        if self.offset is None:
            object.__setattr__(self, "offset", ClassVector((0,) * self.lattice.rank))
        self.lattice.check(self.offset)
        for name in ("brauer_order", "profile_count", "lattice_index"):
            if getattr(self, name) < 1:
                raise CensusError(f"{name} must be positive")
        if self.base_genus < 0:
            raise CensusError("base_genus must be non-negative")

    @property
    def dim_shift(self) -> int:
        return 2 * (1 - self.base_genus)

    @property
    def outside_hypotheses(self) -> bool:
        lat = self.lattice
        return lat.model is Model.QUADRIC or lat.r == 0

    def notes(self) -> list[str]:
        out = [CONDITIONAL_NOTE]
        if self.outside_hypotheses:
            out.append(OUTSIDE_HYPOTHESES)
        return out


def model_census(m: CountingModel, d: int) -> list[ComponentCensusEntry]:
    entries = []
    for _, height in nef_points(m.lattice, m.offset, d):
        dim = height + m.dim_shift
        assert dim == expected_dimension(height, m.base_genus, 3, 0)
        if dim < 0:
            continue
        entry = ComponentCensusEntry(height, dim)
        entries.extend([entry] * m.brauer_order)
    entries.sort(key=lambda e: e.height)
    return entries


def census_counts(census: Sequence[ComponentCensusEntry]) -> dict[int, int]:
    out: dict[int, int] = {}
    for e in census:
        out[e.height] = out.get(e.height, 0) + 1
    return dict(sorted(out.items()))


def asymptotic_constant(m: CountingModel) -> Fraction:
    alpha = alpha_constant(m.lattice).alpha
    q = m.q
    return (
        m.profile_count * m.lattice_index * alpha * m.brauer_order * q / (q - 1) * q**m.dim_shift
    )


# -- convergence ------------------------------------------------------------


def decimal_string(x: Fraction, digits: int = 12) -> str:
    """x to ``digits`` significant digits, round-half-even."""
    ctx = Context(prec=digits, rounding=ROUND_HALF_EVEN)
    value = ctx.divide(Decimal(x.numerator), Decimal(x.denominator))
    return format(value, "f") if abs(value.adjusted()) < 12 else str(value)


@dataclass(frozen=True)
class ConvergenceRow:
    d: int
    N: Fraction
    ratio: Fraction
    target: Fraction

    @property
    def relative_error(self) -> Fraction:
        return abs(self.ratio - self.target) / self.target

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "N": {"num": str(self.N.numerator), "den": str(self.N.denominator)},
            "ratio": {"num": str(self.ratio.numerator), "den": str(self.ratio.denominator)},
            "ratio_decimal": decimal_string(self.ratio),
            "target_decimal": decimal_string(self.target),
        }


@dataclass(frozen=True)
class ConvergenceReport:
    rows: tuple[ConvergenceRow, ...]
    target: Fraction
    truncated_at: int | None = None
    notes: tuple[str, ...] = field(default_factory=tuple)

    @property
    def truncated(self) -> bool:
        return self.truncated_at is not None

    def to_json(self) -> dict:
        return {
            "target": {"num": str(self.target.numerator), "den": str(self.target.denominator)},
            "target_decimal": decimal_string(self.target),
            "truncated": self.truncated,
            "truncated_at": self.truncated_at,
            "notes": list(self.notes),
            "rows": [r.to_json() for r in self.rows],
        }


def enumeration_work(lat: PicardLattice, offset: ClassVector, d: int) -> int:
    """Number of bounding-box prefixes the point counter visits up to degree d."""
    data = _box_and_constraints(lat, offset, d, DEFAULT_RAY_CAP)
    if data is None:
        return 0
    box = data[-1]
    return math.prod(b - a + 1 for a, b in box[:-1])


def cumulative_counting(m: CountingModel, d_max: int) -> list[Fraction]:
    """N(d) for d = 0..d_max, from the per-degree point counts."""
    counts = count_nef_points(m.lattice, m.offset, d_max) if d_max >= 1 else {}
    q = m.q
    out = [Fraction(0)]
    running = Fraction(0)
    for i in range(1, d_max + 1):
        n = counts.get(i, 0)
        if n and i + m.dim_shift >= 0:
            running += m.brauer_order * n * q ** (i + m.dim_shift)
        out.append(running)
    return out


def convergence_report(
    m: CountingModel, d_max: int, stride: int = 1, work_budget: int = DEFAULT_WORK_BUDGET
) -> ConvergenceReport:
    if stride < 1:
        raise CensusError("stride must be >= 1")
    target = asymptotic_constant(m)
    notes = tuple(m.notes())
    if d_max < 1:
        return ConvergenceReport((), target, None, notes)
    reach = d_max
    truncated = None
    if enumeration_work(m.lattice, m.offset, d_max) > work_budget:
        lo, hi = 0, d_max
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if enumeration_work(m.lattice, m.offset, mid) <= work_budget:
                lo = mid
            else:
                hi = mid - 1
        reach, truncated = lo, lo + 1
    Ns = cumulative_counting(m, reach)
    rho = m.lattice.rank
    rows = []
    for d in range(stride, reach + 1, stride):
        N = Ns[d]
        ratio = N / (m.q**d * d ** (rho - 1))
        rows.append(ConvergenceRow(d, N, ratio, target))
    return ConvergenceReport(tuple(rows), target, truncated, notes)


# -- ruled surfaces ---------------------------------------------------------


def ruled_neg_range(b: NormalBundleDescriptor) -> tuple[int, int]:
    """Possible values of neg for the ruled surface of a rank 2 bundle."""
    if b.rank != 2:
        raise CensusError("ruled surfaces come from rank 2 bundles")
    if b.has_decomposition:
        if b.structure is Structure.SEMISTABLE:
            n = b.deg_L2 - b.deg_L1
        else:
            n = b.deg_L1 - b.deg_L2
        return n, n
    return 0, b.genus


def ruled_threshold(genus: int, neg_F: int) -> int:
    return neg_F + 2 * max(4 * genus - 2, 2 * genus - neg_F)


def ruled_component_count(b: NormalBundleDescriptor, profile_count: int, d: int):
    """Number of section components at height d, or Tri.UNKNOWN below the threshold."""
    if profile_count < 1:
        raise CensusError("profile_count must be positive")
    lo, hi = ruled_neg_range(b)
    threshold = max(ruled_threshold(b.genus, n) for n in range(lo, hi + 1))
    if d >= threshold:
        return profile_count
    return Tri.UNKNOWN
