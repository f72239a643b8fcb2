import json

import pytest
from hypothesis import given, strategies as st

from manin_dp.lattice import (
    ClassVector,
    LatticeError,
    Model,
    PicardLattice,
    anticanonical_degree,
    dumps_canonical,
    pairing,
    self_intersection,
)

ALL_LATTICES = [PicardLattice.blow_up(r) for r in range(9)] + [PicardLattice.quadric()]


@pytest.mark.parametrize("lat", ALL_LATTICES, ids=str)
def test_canonical_square_is_degree(lat):
    K = lat.canonical
    assert self_intersection(lat, K) == lat.degree
    assert anticanonical_degree(lat, -K) == lat.degree


@pytest.mark.parametrize("lat", ALL_LATTICES, ids=str)
def test_signature_is_hyperbolic(lat):
    assert lat.signature() == (1, lat.rank - 1, 0)


def test_blow_up_basics():
    lat = PicardLattice.blow_up(3)
    assert lat.rank == 4
    assert lat.degree == 6
    assert lat.canonical == ClassVector((-3, 1, 1, 1))
    assert pairing(lat, lat.E(1), lat.E(1)) == -1
    assert pairing(lat, lat.H(), lat.H()) == 1
    assert anticanonical_degree(lat, lat.E(2)) == 1


def test_quadric_basics():
    lat = PicardLattice.quadric()
    f1, f2 = lat.basis(0), lat.basis(1)
    assert pairing(lat, f1, f2) == 1
    assert self_intersection(lat, f1) == 0
    assert lat.canonical == ClassVector((-2, -2))
    assert lat.degree == 8


def test_of_degree():
    assert PicardLattice.of_degree(3) == PicardLattice.blow_up(6)
    assert PicardLattice.of_degree(9).rank == 1
    with pytest.raises(LatticeError):
        PicardLattice.of_degree(0)


def test_bad_lattices():
    with pytest.raises(LatticeError):
        PicardLattice.blow_up(9)
    with pytest.raises(LatticeError):
        PicardLattice(Model.QUADRIC, 2)
    with pytest.raises(LatticeError):
        PicardLattice.blow_up(2).E(3)
    with pytest.raises(LatticeError):
        PicardLattice.quadric().H()


def test_length_mismatch():
    lat = PicardLattice.blow_up(2)
    with pytest.raises(LatticeError):
        pairing(lat, ClassVector((1, 0)), ClassVector((1, 0, 0)))
    with pytest.raises(LatticeError):
        ClassVector((1, 0)) + ClassVector((1, 0, 0))


def test_non_integer_coordinates_rejected():
    with pytest.raises(LatticeError):
        ClassVector((1, 0.5))
    with pytest.raises(LatticeError):
        ClassVector((True, 0))


def test_json_roundtrip():
    lat = PicardLattice.blow_up(5)
    assert PicardLattice.from_json(json.loads(json.dumps(lat.to_json()))) == lat
    c = ClassVector((3, -1, -1, 0, 0, -2))
    assert ClassVector.from_json(c.to_json()) == c
    assert dumps_canonical({"b": 1, "a": [1, 2]}) == '{"a":[1,2],"b":1}'


coords = st.lists(st.integers(-20, 20), min_size=4, max_size=4).map(ClassVector)


@given(coords, coords, coords, st.integers(-5, 5))
def test_pairing_bilinear_symmetric(a, b, c, k):
    lat = PicardLattice.blow_up(3)
    assert pairing(lat, a, b) == pairing(lat, b, a)
    assert pairing(lat, a + b, c) == pairing(lat, a, c) + pairing(lat, b, c)
    assert pairing(lat, a * k, b) == k * pairing(lat, a, b)


@given(coords, coords)
def test_polarized_matches_pairing(a, b):
    lat = PicardLattice.blow_up(3)
    assert sum(x * y for x, y in zip(lat.polarized(a), b)) == pairing(lat, a, b)
