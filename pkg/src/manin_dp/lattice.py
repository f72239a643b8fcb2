"""Picard lattices of del Pezzo surfaces.

Two models are supported: the blow-up of the plane in ``r`` points, with basis
``H, E1, ..., Er`` and form ``diag(1, -1, ..., -1)``, and the quadric
``P1 x P1`` with basis ``F1, F2`` and form ``[[0, 1], [1, 0]]``.  Curve and
divisor classes share the same coordinates (the surface is two-dimensional).

All arithmetic is on Python ints, so pairings never overflow.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from manin_dp._exact import signature


class Model(str, enum.Enum):
    BLOW_UP = "BlowUpOfPlane"
    QUADRIC = "QuadricSurface"


class LatticeError(ValueError):
    """Malformed lattice data or a class of the wrong length."""


@dataclass(frozen=True)
class ClassVector:
    """An integral class, coordinates against the lattice basis."""

    coords: tuple[int, ...]

    def __init__(self, coords: Iterable[int]):
        coords = tuple(coords)
        for c in coords:
            if isinstance(c, bool) or int(c) != c:
                raise LatticeError(f"class coordinates must be integers, got {coords!r}")
        object.__setattr__(self, "coords", tuple(int(c) for c in coords))

    def __len__(self) -> int:
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __add__(self, other: "ClassVector") -> "ClassVector":
        _check_same_length(self, other)
        return ClassVector(a + b for a, b in zip(self.coords, other.coords))

    def __sub__(self, other: "ClassVector") -> "ClassVector":
        _check_same_length(self, other)
        return ClassVector(a - b for a, b in zip(self.coords, other.coords))

    def __neg__(self) -> "ClassVector":
        return ClassVector(-a for a in self.coords)

    def __mul__(self, k: int) -> "ClassVector":
        return ClassVector(k * a for a in self.coords)

    __rmul__ = __mul__

    def __lt__(self, other: "ClassVector") -> bool:
        return self.coords < other.coords

    def __le__(self, other: "ClassVector") -> bool:
        return self.coords <= other.coords

    def is_zero(self) -> bool:
        return not any(self.coords)

    def to_json(self) -> dict:
        return {"coords": list(self.coords)}

    @classmethod
    def from_json(cls, data: dict) -> "ClassVector":
        return cls(data["coords"])

    def __repr__(self) -> str:
        return f"ClassVector({list(self.coords)})"


def _check_same_length(a: ClassVector, b: ClassVector) -> None:
    if len(a) != len(b):
        raise LatticeError(f"class lengths differ: {len(a)} vs {len(b)}")


@dataclass(frozen=True)
class PicardLattice:
    model: Model
    r: int = 0

    def __post_init__(self):
        object.__setattr__(self, "model", Model(self.model))
        if self.model is Model.BLOW_UP:
            if not 0 <= self.r <= 8:
                raise LatticeError(f"blow-up of the plane needs 0 <= r <= 8, got r={self.r}")
        elif self.r != 0:
            raise LatticeError("the quadric surface takes no blow-up count")

    @classmethod
    def blow_up(cls, r: int) -> "PicardLattice":
        return cls(Model.BLOW_UP, r)

    @classmethod
    def quadric(cls) -> "PicardLattice":
        return cls(Model.QUADRIC, 0)

    @classmethod
    def of_degree(cls, degree: int) -> "PicardLattice":
        """The blow-up model of the given anticanonical degree (1..9)."""
        if not 1 <= degree <= 9:
            raise LatticeError(f"del Pezzo degree must be in 1..9, got {degree}")
        return cls.blow_up(9 - degree)

    @property
    def rank(self) -> int:
        return self.r + 1 if self.model is Model.BLOW_UP else 2

    @property
    def degree(self) -> int:
        return 9 - self.r if self.model is Model.BLOW_UP else 8

    @cached_property
    def gram(self) -> tuple[tuple[int, ...], ...]:
        if self.model is Model.QUADRIC:
            return ((0, 1), (1, 0))
        n = self.rank
        return tuple(
            tuple((1 if i == 0 else -1) if i == j else 0 for j in range(n)) for i in range(n)
        )

    @cached_property
    def canonical(self) -> ClassVector:
        if self.model is Model.QUADRIC:
            return ClassVector((-2, -2))
        return ClassVector((-3,) + (1,) * self.r)

    @cached_property
    def anticanonical(self) -> ClassVector:
        return -self.canonical

    def basis(self, i: int) -> ClassVector:
        return ClassVector(int(i == j) for j in range(self.rank))

    def H(self) -> ClassVector:
        if self.model is not Model.BLOW_UP:
            raise LatticeError("H is only defined on the blow-up model")
        return self.basis(0)

    def E(self, i: int) -> ClassVector:
        """Exceptional class E_i, 1-indexed."""
        if self.model is not Model.BLOW_UP or not 1 <= i <= self.r:
            raise LatticeError(f"no exceptional class E{i} on {self}")
        return self.basis(i)

    def cls(self, coords: Sequence[int]) -> ClassVector:
        c = ClassVector(coords)
        self.check(c)
        return c

    def check(self, c: ClassVector) -> None:
        if len(c) != self.rank:
            raise LatticeError(f"class {c!r} has length {len(c)}, lattice rank is {self.rank}")

    def polarized(self, c: ClassVector) -> tuple[int, ...]:
        """gram . c, the covector pairing against c under the dot product."""
        self.check(c)
        if self.model is Model.QUADRIC:
            return (c[1], c[0])
        return (c[0],) + tuple(-x for x in c.coords[1:])

    def signature(self) -> tuple[int, int, int]:
        return signature(self.gram)

    def to_json(self) -> dict:
        return {"model": self.model.value, "r": self.r}

    @classmethod
    def from_json(cls, data: dict) -> "PicardLattice":
        return cls(Model(data["model"]), int(data.get("r", 0)))

    def __str__(self) -> str:
        if self.model is Model.QUADRIC:
            return "P1xP1"
        return f"Bl_{self.r}(P2)"


def pairing(lat: PicardLattice, a: ClassVector, b: ClassVector) -> int:
    """Intersection number a . b."""
    lat.check(a)
    lat.check(b)
    if lat.model is Model.QUADRIC:
        return a[0] * b[1] + a[1] * b[0]
    return a[0] * b[0] - sum(x * y for x, y in zip(a.coords[1:], b.coords[1:]))


def anticanonical_degree(lat: PicardLattice, c: ClassVector) -> int:
    return pairing(lat, lat.anticanonical, c)


def self_intersection(lat: PicardLattice, c: ClassVector) -> int:
    return pairing(lat, c, c)


def dumps_canonical(obj) -> str:
    """Canonical JSON text: sorted keys, no whitespace variance."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))
