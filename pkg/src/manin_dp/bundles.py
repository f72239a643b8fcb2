"""Numerical cohomology of line bundles and rank-2 bundles on a curve.

Bundles are described by degrees only, so almost every statement is a
one-sided implication.  :data:`Tri.UNKNOWN` is returned whenever the
degrees alone do not decide the question.

Conventions for rank 2 follow the Harder–Narasimhan data: ``deg_L1`` is always
the smaller degree.  For an unstable bundle ``L2`` is the destabilizing
subbundle and ``L1`` the quotient; for a semistable bundle ``L1`` is a maximal
subbundle and ``L2`` the quotient.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass


class Tri(str, enum.Enum):
    YES = "Yes"
    NO = "No"
    UNKNOWN = "Unknown"


class Structure(str, enum.Enum):
    SEMISTABLE = "SemiStable"
    UNSTABLE_INDECOMPOSABLE = "UnstableIndecomposable"
    SPLIT = "Split"


class DescriptorError(ValueError):
    pass


@dataclass(frozen=True)
class IntervalUnknown:
    lower: int
    upper: int


@dataclass(frozen=True)
class H0H1:
    h0: int | IntervalUnknown
    h1: int | IntervalUnknown


@dataclass(frozen=True)
class NormalBundleDescriptor:
    genus: int
    rank: int
    total_degree: int
    structure: Structure | None = None
    deg_L2: int | None = None
    deg_L1: int | None = None
    generic: bool = True
    h0_override: int | None = None
    in_smooth_locus: bool = True

    def __post_init__(self):
        if self.structure is not None:
            object.__setattr__(self, "structure", Structure(self.structure))
        validate(self)

    @classmethod
    def line_bundle(cls, genus: int, degree: int, **kw) -> "NormalBundleDescriptor":
        return cls(genus, 1, degree, **kw)

    @classmethod
    def semistable(cls, genus: int, total: int, deg_L2: int | None = None, deg_L1: int | None = None, **kw):
        return cls(genus, 2, total, Structure.SEMISTABLE, deg_L2, deg_L1, **kw)

    @classmethod
    def unstable(cls, genus: int, deg_L2: int, deg_L1: int, **kw):
        return cls(genus, 2, deg_L1 + deg_L2, Structure.UNSTABLE_INDECOMPOSABLE, deg_L2, deg_L1, **kw)

    @classmethod
    def split(cls, genus: int, deg_L2: int, deg_L1: int, **kw):
        return cls(genus, 2, deg_L1 + deg_L2, Structure.SPLIT, deg_L2, deg_L1, **kw)

    @property
    def has_decomposition(self) -> bool:
        return self.deg_L1 is not None and self.deg_L2 is not None

    @property
    def chi(self) -> int:
        return riemann_roch_chi(self.rank, self.total_degree, self.genus)

    def to_json(self) -> dict:
        return {
            "genus": self.genus,
            "rank": self.rank,
            "total_degree": self.total_degree,
            "structure": self.structure.value if self.structure else None,
            "deg_L2": self.deg_L2,
            "deg_L1": self.deg_L1,
            "generic": self.generic,
            "h0_override": self.h0_override,
            "in_smooth_locus": self.in_smooth_locus,
        }

    @classmethod
    def from_json(cls, data: dict) -> "NormalBundleDescriptor":
        keys = {
            "genus", "rank", "total_degree", "structure", "deg_L2", "deg_L1",
            "generic", "h0_override", "in_smooth_locus",
        }
        unknown = set(data) - keys
        if unknown:
            raise DescriptorError(f"unknown descriptor fields: {sorted(unknown)}")
        data = dict(data)
        if data.get("total_degree") is None and data.get("deg_L1") is not None and data.get("deg_L2") is not None:
            data["total_degree"] = data["deg_L1"] + data["deg_L2"]
        return cls(**data)


def riemann_roch_chi(rank: int, degree: int, genus: int) -> int:
    if rank not in (1, 2):
        raise DescriptorError(f"rank must be 1 or 2, got {rank}")
    return degree + rank * (1 - genus)


def validate(b: NormalBundleDescriptor) -> None:
    g = b.genus
    if g < 0:
        raise DescriptorError("genus must be non-negative")
    if b.rank not in (1, 2):
        raise DescriptorError(f"rank must be 1 or 2, got {b.rank}")
    if b.rank == 1:
        if b.structure is not None or b.deg_L1 is not None or b.deg_L2 is not None:
            raise DescriptorError("a line bundle carries no rank-2 structure")
    else:
        if b.structure is None:
            raise DescriptorError("rank 2 descriptors need a structure")
        if b.structure is not Structure.SEMISTABLE and not b.has_decomposition:
            raise DescriptorError(f"{b.structure.value} needs deg_L1 and deg_L2")
        if (b.deg_L1 is None) != (b.deg_L2 is None):
            raise DescriptorError("give both deg_L1 and deg_L2 or neither")
        if b.has_decomposition:
            if b.deg_L1 + b.deg_L2 != b.total_degree:
                raise DescriptorError("deg_L1 + deg_L2 must equal total_degree")
            gap = b.deg_L2 - b.deg_L1
            if b.structure is Structure.UNSTABLE_INDECOMPOSABLE and not 0 < gap <= 2 * g - 2:
                raise DescriptorError(
                    f"unstable indecomposable bundles need 0 < deg_L2 - deg_L1 <= 2g-2 (gap {gap}, g={g})"
                )
            if b.structure is Structure.SEMISTABLE and not 0 <= gap <= g:
                raise DescriptorError(
                    f"semistable decompositions need 0 <= deg_L2 - deg_L1 <= g (gap {gap}, g={g})"
                )
            if b.structure is Structure.SPLIT and gap < 0:
                raise DescriptorError("split bundles are recorded with deg_L2 >= deg_L1")
    if b.h0_override is not None:
        if b.h0_override < max(0, b.chi):
            raise DescriptorError(f"h0_override {b.h0_override} is below max(0, chi={b.chi})")


# -- cohomology -------------------------------------------------------------


def _line_h1(g: int, e: int, generic: bool) -> Tri:
    if e >= 2 * g - 1 or (generic and e >= g):
        return Tri.YES
    if e < g - 1:
        return Tri.NO
    return Tri.UNKNOWN


def h1_vanishes(b: NormalBundleDescriptor) -> Tri:
    validate(b)
    g = b.genus
    if b.h0_override is not None:
        return Tri.YES if b.h0_override - b.chi == 0 else Tri.NO
    if b.rank == 1:
        return _line_h1(g, b.total_degree, b.generic)
    s = b.structure
    if s is Structure.SPLIT:
        parts = [_line_h1(g, b.deg_L1, b.generic), _line_h1(g, b.deg_L2, b.generic)]
        if all(p is Tri.YES for p in parts):
            return Tri.YES
        if any(p is Tri.NO for p in parts):
            return Tri.NO
        return Tri.UNKNOWN
    if s is Structure.UNSTABLE_INDECOMPOSABLE:
        # H^1(E) surjects onto H^1 of the quotient L1; both pieces vanish once L1 does
        if b.total_degree >= 6 * g - 4 or b.deg_L1 >= 2 * g - 1:
            return Tri.YES
        if b.deg_L1 < g - 1:
            return Tri.NO
        return Tri.UNKNOWN
    # semistable
    if b.total_degree >= 5 * g - 2:
        return Tri.YES
    if b.has_decomposition and b.deg_L1 >= 2 * g - 1:
        return Tri.YES
    if b.chi < 0:
        return Tri.NO
    if b.has_decomposition and b.deg_L2 < g - 1:
        return Tri.NO
    return Tri.UNKNOWN


def _h0_bounds_line(e: int) -> int:
    return max(0, e + 1)


def cohomology(b: NormalBundleDescriptor) -> H0H1:
    """h0 and h1, exact when decided and otherwise an interval."""
    chi = b.chi
    if b.h0_override is not None:
        return H0H1(b.h0_override, b.h0_override - chi)
    if h1_vanishes(b) is Tri.YES:
        return H0H1(chi, 0)
    lower = max(0, chi)
    if b.rank == 1:
        upper = max(lower, _h0_bounds_line(b.total_degree))
    elif b.has_decomposition:
        upper = max(lower, _h0_bounds_line(b.deg_L1) + _h0_bounds_line(b.deg_L2))
    else:
        # semistable of non-negative slope: h0 <= deg + rank
        upper = max(lower, b.total_degree + 2 if b.total_degree >= 0 else 0)
    if lower == upper:
        return H0H1(lower, lower - chi)
    return H0H1(IntervalUnknown(lower, upper), IntervalUnknown(lower - chi, upper - chi))


# -- points and freeness ----------------------------------------------------


def max_general_points(b: NormalBundleDescriptor, relative_dim: int):
    """How many general points deformations of the section are forced through.

    Returns an int, or ``Tri.UNKNOWN`` when the hypotheses are not met.
    """
    if relative_dim not in (1, 2):
        raise DescriptorError("relative_dim must be 1 or 2")
    if relative_dim != b.rank:
        raise DescriptorError(f"a rank {b.rank} normal bundle does not fit relative dimension {relative_dim}")
    if h1_vanishes(b) is not Tri.YES:
        return Tri.UNKNOWN
    g = b.genus
    h0 = b.h0_override if b.h0_override is not None else b.chi
    if b.rank == 1:
        return h0
    if b.structure is Structure.SEMISTABLE:
        if b.total_degree < 6 * g - 2:
            return Tri.UNKNOWN
        return h0 // 2
    if b.total_degree < 4 * g - 4:
        return Tri.UNKNOWN
    # h1(E) = 0 forces h1(L1) = 0 in both the split and the unstable case
    return b.deg_L1 + 1 - g


def is_relatively_free(b: NormalBundleDescriptor) -> Tri:
    validate(b)
    if not b.in_smooth_locus:
        return Tri.UNKNOWN
    g = b.genus
    if b.rank == 1:
        return Tri.YES if b.total_degree >= 2 * g else Tri.UNKNOWN
    if b.structure in (Structure.SPLIT, Structure.UNSTABLE_INDECOMPOSABLE):
        # h0(L1) >= chi(L1)
        return Tri.YES if b.deg_L1 + 1 - g >= g + 1 else Tri.UNKNOWN
    h0_lower = b.h0_override if b.h0_override is not None else b.chi
    return Tri.YES if h0_lower >= 4 * g + 1 else Tri.UNKNOWN


def surface_freeness(genus: int, degree: int, points_through: int) -> Tri:
    if points_through >= genus + 1 or degree >= 2 * genus:
        return Tri.YES
    return Tri.UNKNOWN
