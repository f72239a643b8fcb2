"""Monoid of free curve families on a fiber and its action on component labels.

An element is identified with its nef integral class, except that a multiple
kR (k >= 2) of a conic-fibration class R is tagged as the formal element kR.
Gluing adds classes; a formal kR glued with anything meeting R positively
becomes an honest class again because the sum is no longer a multiple of R.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from manin_dp.cones import is_nef, nef_points
from manin_dp.curves import conic_multiple
from manin_dp.lattice import ClassVector, LatticeError, PicardLattice, anticanonical_degree


class RelationError(ValueError):
    pass


@dataclass(frozen=True)
class MonoidElement:
    lat: PicardLattice
    base_class: ClassVector
    formal_conic: tuple[ClassVector, int] | None = None

    @classmethod
    def of_class(cls, lat: PicardLattice, c: ClassVector) -> "MonoidElement":
        lat.check(c)
        if not is_nef(lat, c):
            raise LatticeError(f"{c!r} is not nef; monoid elements are nef classes")
        formal = None
        mult = conic_multiple(lat, c)
        if mult is not None and mult[1] >= 2:
            formal = mult
        return cls(lat, c, formal)

    @classmethod
    def zero(cls, lat: PicardLattice) -> "MonoidElement":
        return cls(lat, ClassVector((0,) * lat.rank), None)

    def is_zero(self) -> bool:
        return self.base_class.is_zero()

    @property
    def degree(self) -> int:
        return anticanonical_degree(self.lat, self.base_class)

    def __repr__(self) -> str:
        if self.is_zero():
            return "Zero"
        if self.formal_conic:
            r, k = self.formal_conic
            return f"{k}*{list(r.coords)}"
        return f"[{', '.join(map(str, self.base_class.coords))}]"


def glue(a: MonoidElement, b: MonoidElement) -> MonoidElement:
    if a.lat != b.lat:
        raise LatticeError("cannot glue elements of different lattices")
    c = a.base_class + b.base_class
    # nef classes form a cone, so the sum stays nef
    assert is_nef(a.lat, c), f"glue produced non-nef class {c!r}"
    return MonoidElement.of_class(a.lat, c)


def glue_all(lat: PicardLattice, elements: Iterable[MonoidElement]) -> MonoidElement:
    out = MonoidElement.zero(lat)
    for e in elements:
        out = glue(out, e)
    return out


@dataclass(frozen=True)
class ComponentLabel:
    generator_index: int
    element: MonoidElement

    def __repr__(self) -> str:
        return f"M{self.generator_index}+{self.element!r}"


def act(label: ComponentLabel, r: MonoidElement) -> ComponentLabel:
    return ComponentLabel(label.generator_index, glue(label.element, r))


@dataclass
class RelationSet:
    relations: list[tuple[ComponentLabel, ComponentLabel]]


@dataclass(frozen=True)
class FiberRow:
    cls: ClassVector
    degree: int
    labels: int
    fiber_size: int

    def to_json(self) -> dict:
        return {
            "class": list(self.cls.coords),
            "degree": self.degree,
            "labels_before": self.labels,
            "fiber_size": self.fiber_size,
        }


@dataclass(frozen=True)
class SaturationReport:
    alpha: ClassVector
    horizon: int
    rows: tuple[FiberRow, ...]

    @property
    def success(self) -> bool:
        return all(row.fiber_size == 1 for row in self.rows)

    def to_json(self) -> dict:
        return {
            "alpha": list(self.alpha.coords),
            "horizon": self.horizon,
            "success": self.success,
            "rows": [r.to_json() for r in self.rows],
        }


class _UnionFind:
    def __init__(self):
        self.parent: dict = {}

    def add(self, x):
        self.parent.setdefault(x, x)

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # deterministic representative
            if repr(rb) < repr(ra):
                ra, rb = rb, ra
            self.parent[rb] = ra


def label_class(label: ComponentLabel, base_classes: Sequence[ClassVector]) -> ClassVector:
    return base_classes[label.generator_index - 1] + label.element.base_class


def saturate_and_check(
    s: int,
    rels: RelationSet,
    lat: PicardLattice,
    degree_horizon: int,
    base_classes: Sequence[ClassVector],
) -> SaturationReport:
    """Quotient the labels by the congruence generated by ``rels`` and report fiber sizes.

    ``base_classes[i-1]`` is the class of the base component M_i.  Fibers are
    reported over every integral class of α + Nef up to the horizon, where α is
    the common class of the relations (or the sum of the base classes if no
    relation is given).
    """
    if len(base_classes) != s:
        raise RelationError(f"need {s} base classes, got {len(base_classes)}")
    for b in base_classes:
        lat.check(b)
    for l1, l2 in rels.relations:
        for lab in (l1, l2):
            if not 1 <= lab.generator_index <= s:
                raise RelationError(f"label {lab!r} refers to an unregistered generator")
        c1, c2 = label_class(l1, base_classes), label_class(l2, base_classes)
        if c1 != c2:
            raise RelationError(f"relation {l1!r} = {l2!r} joins different classes {c1!r}, {c2!r}")
    rel_classes = {label_class(l1, base_classes) for l1, _ in rels.relations}
    if rel_classes:
        alpha = min(rel_classes, key=lambda c: (anticanonical_degree(lat, c), c.coords))
    else:
        alpha = base_classes[0]
        for b in base_classes[1:]:
            alpha = alpha + b

    zero = ClassVector((0,) * lat.rank)
    uf = _UnionFind()
    by_class: dict[ClassVector, list[ComponentLabel]] = {}
    for i, b in enumerate(base_classes, start=1):
        budget = degree_horizon - anticanonical_degree(lat, b)
        if budget < 0:
            continue
        elems = [zero] + [c for c, _ in nef_points(lat, zero, budget)]
        for c in elems:
            lab = ComponentLabel(i, MonoidElement.of_class(lat, c))
            uf.add(lab)
            by_class.setdefault(b + c, []).append(lab)

    shifts = [zero] + [c for c, _ in nef_points(lat, zero, degree_horizon)]
    for l1, l2 in rels.relations:
        base_deg = anticanonical_degree(lat, label_class(l1, base_classes))
        for c in shifts:
            if base_deg + anticanonical_degree(lat, c) > degree_horizon:
                continue
            r = MonoidElement.of_class(lat, c)
            a, b = act(l1, r), act(l2, r)
            uf.add(a)
            uf.add(b)
            uf.union(a, b)

    rows = []
    targets = [(alpha, anticanonical_degree(lat, alpha))] if anticanonical_degree(lat, alpha) <= 0 else []
    targets += list(nef_points(lat, alpha, degree_horizon))
    for beta, deg in sorted(targets, key=lambda t: (t[1], t[0].coords)):
        labels = by_class.get(beta, [])
        roots = {uf.find(lab) for lab in labels}
        rows.append(FiberRow(beta, deg, len(labels), len(roots)))
    return SaturationReport(alpha, degree_horizon, tuple(rows))


def claim_relations(lat: PicardLattice, base_classes: Sequence[ClassVector], alpha: ClassVector) -> RelationSet:
    """Relations R_i * M_i = R_1 * M_1 joining every generator to a common class α."""
    labels = []
    for i, b in enumerate(base_classes, start=1):
        labels.append(ComponentLabel(i, MonoidElement.of_class(lat, alpha - b)))
    return RelationSet([(labels[0], lab) for lab in labels[1:]])
