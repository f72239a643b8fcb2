"""Numerical data of a del Pezzo fibration over a curve and its explicit bounds.

Every function here is integer or Fraction arithmetic on the descriptor;
nothing is derived from geometry.  ``neg`` is the least height of a section,
``m_xb`` the bound on vertical components met by sections, and ``maxdef`` a
user-supplied table of excess dimensions at low height.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction


class FibrationError(ValueError):
    pass


class MaxDefHorizonError(FibrationError):
    def __init__(self, degree: int, horizon: int):
        self.degree = degree
        self.horizon = horizon
        super().__init__(f"maxdef needed up to degree {degree} but the table stops at horizon {horizon} and has no default")


class Parity(str, enum.Enum):
    EVEN = "Even"
    ODD = "Odd"


@dataclass(frozen=True)
class MaxDefTable:
    """Excess dimension by height; beyond ``horizon`` the value is ``default``.

    ``default=None`` means the table is only known up to ``horizon``.
    """

    entries: dict[int, int] = field(default_factory=dict)
    horizon: int | None = None
    default: int | None = 0

    def __post_init__(self):
        entries = {int(k): int(v) for k, v in self.entries.items()}
        if any(v < 0 for v in entries.values()):
            raise FibrationError("maxdef values must be non-negative")
        object.__setattr__(self, "entries", entries)
        if self.horizon is None:
            object.__setattr__(self, "horizon", max(entries, default=0))

    @classmethod
    def zero(cls) -> "MaxDefTable":
        return cls({}, 0, 0)

    def at(self, d: int) -> int:
        if d in self.entries:
            return self.entries[d]
        if d > self.horizon:
            if self.default is None:
                raise MaxDefHorizonError(d, self.horizon)
            return self.default
        return 0

    def upto(self, q: int) -> int:
        """maxdef(<= q): the largest recorded value at heights <= q, and at least 0."""
        if q > self.horizon and self.default is None:
            raise MaxDefHorizonError(q, self.horizon)
        best = 0
        for d, v in self.entries.items():
            if d <= q:
                best = max(best, v)
        if q > self.horizon and self.default:
            best = max(best, self.default)
        return best

    def to_json(self) -> dict:
        return {
            "entries": {str(k): v for k, v in sorted(self.entries.items())},
            "horizon": self.horizon,
            "default": self.default,
        }

    @classmethod
    def from_json(cls, data: dict) -> "MaxDefTable":
        entries = {int(k): int(v) for k, v in data.get("entries", {}).items()}
        default = data.get("default", 0)
        return cls(entries, data.get("horizon"), default)


@dataclass(frozen=True)
class FibrationDescriptor:
    fiber_degree: int
    base_genus: int
    neg: int = 0
    m_xb: int = 0
    maxdef: MaxDefTable = field(default_factory=MaxDefTable.zero)
    profile_count: int = 1
    brauer_order: int = 1
    lattice_index: int = 1
    relatively_nef_anticanonical: bool = True

    def __post_init__(self):
        if not 1 <= self.fiber_degree <= 9:
            raise FibrationError(f"fiber_degree must be in 1..9, got {self.fiber_degree}")
        if self.base_genus < 0:
            raise FibrationError("base_genus must be non-negative")
        if self.m_xb < 0:
            raise FibrationError("m_xb must be non-negative")
        for name in ("profile_count", "brauer_order", "lattice_index"):
            if getattr(self, name) < 1:
                raise FibrationError(f"{name} must be positive")

    @property
    def g(self) -> int:
        return self.base_genus

    def to_json(self) -> dict:
        return {
            "fiber_degree": self.fiber_degree,
            "base_genus": self.base_genus,
            "neg": self.neg,
            "m_xb": self.m_xb,
            "maxdef": self.maxdef.to_json(),
            "profile_count": self.profile_count,
            "brauer_order": self.brauer_order,
            "lattice_index": self.lattice_index,
            "relatively_nef_anticanonical": self.relatively_nef_anticanonical,
        }

    @classmethod
    def from_json(cls, data: dict) -> "FibrationDescriptor":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise FibrationError(f"unknown descriptor fields: {sorted(unknown)}")
        kw = dict(data)
        if "maxdef" in kw:
            md = kw["maxdef"]
            kw["maxdef"] = md if isinstance(md, MaxDefTable) else MaxDefTable.from_json(md)
        return cls(**kw)


# -- threshold terms --------------------------------------------------------


def threshold_C_terms(f: FibrationDescriptor) -> dict[str, int]:
    g, n = f.g, f.neg
    return {
        "3g+1": 3 * g + 1,
        "-2neg+6g-2": -2 * n + 6 * g - 2,
        "2g-1+2max{4g-2,3g-1-neg}": 2 * g - 1 + 2 * max(4 * g - 2, 3 * g - 1 - n),
    }


def threshold_C(f: FibrationDescriptor) -> int:
    """Height beyond which sections deform in the expected dimension."""
    return max(threshold_C_terms(f).values())


def threshold_nonfree_terms(f: FibrationDescriptor) -> dict[str, int]:
    g, n, m = f.g, f.neg, f.m_xb
    return {
        "6g-2+m": 6 * g - 2 + m,
        "-2neg+12g-2": -2 * n + 12 * g - 2,
        "8g+2max{4g-2,5g-1-neg}": 8 * g + 2 * max(4 * g - 2, 5 * g - 1 - n),
    }


def threshold_nonfree(f: FibrationDescriptor) -> int:
    """Height beyond which no dominant family of non-free sections occurs."""
    return max(threshold_nonfree_terms(f).values())


def threshold_Q_terms(f: FibrationDescriptor) -> dict[str, int]:
    g, n = f.g, f.neg
    return {
        "10g+3": 10 * g + 3,
        "3maxdef(<=6g)+6g+3+2max{0,-neg}": 3 * f.maxdef.upto(6 * g) + 6 * g + 3 + 2 * max(0, -n),
        "-2neg+12g+5": -2 * n + 12 * g + 5,
        "-2neg+21g-3": -2 * n + 21 * g - 3,
        "3maxdef(<=8g-neg)-neg+6g+1": 3 * f.maxdef.upto(8 * g - n) - n + 6 * g + 1,
    }


def threshold_Q(f: FibrationDescriptor) -> int:
    """Upper bound for the movable bend-and-break height."""
    return max(threshold_Q_terms(f).values())


def surface_mbb_threshold(genus: int, neg_F: int) -> int:
    return max(2, 2 * genus + 1, 4 * genus + 1 - neg_F)


def totalbreaking_s_rational(genus: int, neg_F: int, minus_K_dot_C: int) -> Fraction:
    return Fraction(-minus_K_dot_C + neg_F, 2) + max(4 * genus - 2, 2 * genus - neg_F)


def totalbreaking_s(genus: int, neg_F: int, minus_K_dot_C: int) -> int:
    """Integral twist s; requires -K.C and neg_F of equal parity."""
    if (minus_K_dot_C - neg_F) % 2:
        raise FibrationError(
            f"-K.C = {minus_K_dot_C} and neg_F = {neg_F} have different parity; use the rational variant"
        )
    return int(totalbreaking_s_rational(genus, neg_F, minus_K_dot_C))


def maxdef_height_bound(d: int, n: int, maxdef_d: int) -> Fraction:
    if n < maxdef_d:
        raise FibrationError(f"need n >= maxdef(d) (n={n}, maxdef={maxdef_d})")
    return d + 3 * n - Fraction(3 * maxdef_d, 2)


def points_threshold(genus: int, neg: int, maxdef_6g: int, parity: Parity | str) -> int:
    parity = Parity(parity)
    base = math.ceil(Fraction(3 * maxdef_6g, 2)) + 2 * genus + max(0, -neg)
    return base + 2 if parity is Parity.EVEN else base


def expected_dimension(deg: int, genus: int, ambient_dim: int, fixed_points: int = 0) -> int:
    if ambient_dim not in (2, 3):
        raise FibrationError("ambient_dim must be 2 or 3")
    return deg + (ambient_dim - 1) * (1 - genus - fixed_points)


def nonfree_dim_bound(deg: int, genus: int, m_xb: int) -> int:
    if deg < 6 * genus - 2 + m_xb:
        raise FibrationError(f"need -K.C >= 6g-2+m = {6 * genus - 2 + m_xb}, got {deg}")
    return deg + 2 - genus + m_xb


def nonfree_max_points(genus: int) -> int:
    """Upper bound on general points through a non-free dominant family (0 means none exist)."""
    return genus


def neg_ruled_bound(genus: int) -> int:
    """Upper bound on neg of a ruled surface over a genus-g curve."""
    return genus


NEG_RULED_LOWER = "-g"  # recorded companion bound: -neg >= -g for such ruled surfaces


def threshold_report(f: FibrationDescriptor) -> dict:
    """All explicit bounds with their itemized terms."""
    nonfree = threshold_nonfree(f)
    return {
        "descriptor": f.to_json(),
        "C": {"value": threshold_C(f), "terms": threshold_C_terms(f)},
        "nonfree": {
            "value": nonfree,
            "strict_value": nonfree + 1,
            "terms": threshold_nonfree_terms(f),
        },
        "Q": {
            "value": threshold_Q(f),
            "terms": threshold_Q_terms(f),
            "note": "upper bound for the movable bend-and-break height",
        },
        "surface_mbb": surface_mbb_threshold(f.g, f.neg),
        "conditional_note": None
        if f.relatively_nef_anticanonical
        else "bounds were derived for relatively nef -K; this descriptor does not assert it",
    }
