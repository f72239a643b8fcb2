import pytest
from hypothesis import given, settings, strategies as st

from manin_dp.cones import nef_points
from manin_dp.lattice import ClassVector, LatticeError, PicardLattice
from manin_dp.monoid import (
    ComponentLabel,
    MonoidElement as ME,
    RelationError,
    RelationSet,
    act,
    claim_relations,
    glue,
    glue_all,
    saturate_and_check,
)

LATTICES = [PicardLattice.blow_up(r) for r in range(0, 4)] + [PicardLattice.quadric()]
_NEF = {lat: [c for c, _ in nef_points(lat, ClassVector((0,) * lat.rank), 8)] for lat in LATTICES}


def elements(lat):
    return st.one_of(st.just(ME.zero(lat)), st.sampled_from(_NEF[lat]).map(lambda c: ME.of_class(lat, c)))


triples = st.sampled_from(LATTICES).flatmap(lambda lat: st.tuples(elements(lat), elements(lat), elements(lat)))


@settings(max_examples=500, deadline=None)
@given(triples)
def test_monoid_laws(t):
    a, b, c = t
    lat = a.lat
    zero = ME.zero(lat)
    assert glue(a, b) == glue(b, a)
    assert glue(glue(a, b), c) == glue(a, glue(b, c))
    assert glue(zero, a) == a == glue(a, zero)
    # the class map is a homomorphism
    assert glue(a, b).base_class == a.base_class + b.base_class


def test_formal_conic_multiples():
    lat = PicardLattice.blow_up(2)
    R = lat.H() - lat.E(1)
    r = ME.of_class(lat, R)
    assert r.formal_conic is None
    two = glue(r, r)
    assert two.formal_conic == (R, 2)
    assert glue(two, r).formal_conic == (R, 3)
    assert repr(glue(two, r)) == "3*[1, -1, 0]"


def test_conics_of_distinct_fibrations_collapse():
    q = PicardLattice.quadric()
    f1, f2 = ME.of_class(q, ClassVector((1, 0))), ME.of_class(q, ClassVector((0, 1)))
    s = glue(f1, f2)
    assert s.base_class == ClassVector((1, 1)) and s.formal_conic is None
    kf = glue(f1, f1)
    assert kf.formal_conic == (ClassVector((1, 0)), 2)
    assert glue(kf, f2).formal_conic is None


def test_non_nef_rejected():
    lat = PicardLattice.blow_up(1)
    with pytest.raises(LatticeError):
        ME.of_class(lat, lat.E(1))
    with pytest.raises(LatticeError):
        glue(ME.zero(lat), ME.zero(PicardLattice.blow_up(2)))


def test_act_examples():
    lat = PicardLattice.blow_up(2)
    zero = ME.zero(lat)
    r1 = ME.of_class(lat, lat.H())
    r2 = ME.of_class(lat, lat.H() - lat.E(2))
    label = ComponentLabel(2, zero)
    assert act(label, zero) == label
    assert act(act(label, r1), r2) == act(act(label, r2), r1) == act(label, glue(r1, r2))
    conic = ME.of_class(lat, lat.H() - lat.E(1))
    assert act(label, conic) == ComponentLabel(2, conic)
    assert glue_all(lat, [r1, r2, conic]).base_class == lat.H() * 3 - lat.E(1) - lat.E(2)


def test_single_generator():
    lat = PicardLattice.blow_up(1)
    rep = saturate_and_check(1, RelationSet([]), lat, 8, [lat.H()])
    assert rep.success and rep.rows


def test_quadric_two_generators_one_relation():
    q = PicardLattice.quadric()
    base = [ClassVector((1, 0)), ClassVector((0, 1))]
    rel = RelationSet([(ComponentLabel(1, ME.of_class(q, ClassVector((0, 1)))),
                        ComponentLabel(2, ME.of_class(q, ClassVector((1, 0)))))])
    rep = saturate_and_check(2, rel, q, 6, base)
    assert rep.alpha == ClassVector((1, 1))
    assert {r.cls for r in rep.rows} == {ClassVector((1, 1)), ClassVector((2, 1)), ClassVector((1, 2))}
    assert all(r.labels == 2 for r in rep.rows)
    assert rep.success


def test_quadric_without_relations_fails():
    q = PicardLattice.quadric()
    base = [ClassVector((1, 0)), ClassVector((0, 1))]
    rep = saturate_and_check(2, RelationSet([]), q, 6, base)
    assert not rep.success
    assert all(r.fiber_size == 2 for r in rep.rows)


def test_relation_must_join_equal_classes():
    q = PicardLattice.quadric()
    base = [ClassVector((1, 0)), ClassVector((0, 1))]
    bad = RelationSet([(ComponentLabel(1, ME.zero(q)), ComponentLabel(2, ME.zero(q)))])
    with pytest.raises(RelationError):
        saturate_and_check(2, bad, q, 6, base)
    unregistered = RelationSet([(ComponentLabel(3, ME.zero(q)), ComponentLabel(1, ME.zero(q)))])
    with pytest.raises(RelationError):
        saturate_and_check(2, unregistered, q, 6, base)


@pytest.mark.parametrize("r", [1, 2, 3])
def test_claim_relations_saturate(r):
    lat = PicardLattice.blow_up(r)
    base = [lat.H() - lat.E(1), lat.H(), lat.H() * 2 - lat.E(1)]
    alpha = lat.H() * 2 - lat.E(1)
    rep = saturate_and_check(3, claim_relations(lat, base, alpha), lat, 10, base)
    assert rep.alpha == alpha
    assert rep.success
    # before quotienting, the fiber over alpha + R has one label per generator
    assert all(row.labels == 3 for row in rep.rows)
    bare = saturate_and_check(3, RelationSet([]), lat, 10, base)
    assert not bare.success


def test_report_json():
    q = PicardLattice.quadric()
    rep = saturate_and_check(1, RelationSet([]), q, 4, [ClassVector((1, 0))])
    js = rep.to_json()
    assert js["success"] is True
    assert all(set(row) >= {"class", "fiber_size"} for row in js["rows"])
