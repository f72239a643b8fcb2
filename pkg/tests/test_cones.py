import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import linprog

from manin_dp.cones import (
    DegenerateConeError,
    NotNefError,
    PlusInfinity,
    RationalCone,
    UnsupportedDegree,
    a_invariant,
    a_invariant_bisection,
    alpha_constant,
    cone_from_generators,
    count_nef_points,
    dual_cone,
    effective_generators,
    extreme_rays,
    monte_carlo_volume,
    nef_curve_cone,
    nef_points,
    pyramid_simplices,
)
from manin_dp._exact import rank
from manin_dp.curves import enumerate_classes
from manin_dp.lattice import ClassVector, PicardLattice, anticanonical_degree, pairing

# exact values frozen from the triangulation; r <= 4 cross-checked by Monte Carlo below
ALPHA = {0: Fraction(1, 3), 1: Fraction(1, 6), 2: Fraction(1, 24), 3: Fraction(1, 72),
         4: Fraction(1, 144), 5: Fraction(1, 180), 6: Fraction(1, 120), 7: Fraction(1, 30)}


def test_first_orthant_self_dual():
    c = cone_from_generators([(1, 0), (0, 1)])
    d = dual_cone(c)
    assert set(d.generators) == {(1, 0), (0, 1)}


def test_dual_of_r1_effective_cone():
    lat = PicardLattice.blow_up(1)
    gens = [lat.polarized(e) for e in effective_generators(lat)]
    d = dual_cone(cone_from_generators(gens))
    assert len(d.generators) == 2
    assert set(d.generators) == {(1, 0), (1, -1)}


def test_lineality_dual():
    # a ray in the plane: dual is a half-plane with a line
    c = cone_from_generators([(1, 0)])
    d = dual_cone(c)
    assert (1, 0) in d.generators
    assert (0, 1) in d.generators and (0, -1) in d.generators


def test_degenerate_rejected():
    # a line in R^3: neither pointed nor full-dimensional
    with pytest.raises(DegenerateConeError):
        cone_from_generators([(1, 0, 0), (-1, 0, 0)])


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 4).flatmap(
    lambda n: st.lists(st.tuples(*[st.integers(-3, 3)] * n), min_size=n, max_size=n + 4)))
def test_double_dual(gens):
    n = len(gens[0])
    nz = [g for g in gens if any(g)]
    if not nz:
        return
    try:
        c = cone_from_generators(nz, n)
        dd = dual_cone(dual_cone(c))
    except DegenerateConeError:
        return
    if not c.is_pointed():
        return
    assert set(dd.generators) == set(c.generators)
    for g in c.generators:
        for f in c.facets:
            assert sum(a * b for a, b in zip(g, f)) >= 0


def test_extreme_rays_cube_cone():
    # cone over a square: x3 >= |x1|, x3 >= |x2|
    ineqs = [(1, 0, 1), (-1, 0, 1), (0, 1, 1), (0, -1, 1)]
    rays = extreme_rays(ineqs, 3)
    assert set(rays) == {(1, 1, 1), (1, -1, 1), (-1, 1, 1), (-1, -1, 1)}


def test_ray_cap():
    with pytest.raises(UnsupportedDegree):
        nef_curve_cone(PicardLattice.blow_up(6), cap=20)


def _lp_member(vec, gens):
    A = [[g[i] for g in gens] for i in range(len(vec))]
    res = linprog([0] * len(gens), A_eq=A, b_eq=list(vec), bounds=[(0, None)] * len(gens), method="highs")
    return res.status == 0


@pytest.mark.parametrize("r", [1, 2, 3])
def test_effective_generators_cover_low_degree_effective(r):
    # irreducible curves of low degree are lines, conics and cubics; all must lie in the cone
    lat = PicardLattice.blow_up(r)
    gens = [e.coords for e in effective_generators(lat)]
    for antideg in (1, 2, 3):
        for sq in range(-1, 2 * antideg):
            for c in enumerate_classes(lat, antideg, sq):
                if sq >= 0 and any(pairing(lat, c, e) < 0 for e in effective_generators(lat)):
                    continue
                assert _lp_member(c.coords, gens), c


def test_nef_examples():
    p2 = PicardLattice.blow_up(0)
    assert nef_curve_cone(p2).generators == ((1,),)
    q = PicardLattice.quadric()
    assert set(nef_curve_cone(q).generators) == {(1, 0), (0, 1)}
    assert len(nef_curve_cone(PicardLattice.blow_up(2)).generators) == 3


@pytest.mark.parametrize("lat", [PicardLattice.blow_up(r) for r in range(0, 7)] + [PicardLattice.quadric()], ids=str)
def test_nef_ray_properties(lat):
    gens = effective_generators(lat)
    cone = nef_curve_cone(lat)
    for ray in cone.generators:
        R = ClassVector(ray)
        vals = [pairing(lat, R, e) for e in gens]
        assert all(v >= 0 for v in vals)
        tight = [lat.polarized(e) for e, v in zip(gens, vals) if v == 0]
        assert (rank(tight) if tight else 0) >= lat.rank - 1
    assert cone.contains(lat.anticanonical.coords)


@pytest.mark.parametrize("lat", [PicardLattice.blow_up(r) for r in range(0, 7)] + [PicardLattice.quadric()], ids=str)
def test_a_invariant_anticanonical(lat):
    assert a_invariant(lat, lat.anticanonical) == 1


def test_a_invariant_examples():
    p2 = PicardLattice.blow_up(0)
    assert a_invariant(p2, p2.H()) == 3
    r1 = PicardLattice.blow_up(1)
    assert a_invariant(r1, r1.H() - r1.E(1)) is PlusInfinity
    with pytest.raises(NotNefError):
        a_invariant(r1, r1.E(1))


@pytest.mark.parametrize("r", [1, 2, 3, 4])
def test_a_invariant_bisection_oracle(r):
    lat = PicardLattice.blow_up(r)
    H = lat.H()
    candidates = [H, H * 2 - lat.E(1), H * 3 - lat.E(1) * 2, lat.anticanonical, lat.anticanonical + H]
    for L in candidates:
        if any(pairing(lat, L, e) < 0 for e in effective_generators(lat)):
            continue
        exact = a_invariant(lat, L)
        approx = a_invariant_bisection(lat, L)
        if exact is PlusInfinity:
            continue
        assert abs(float(exact) - approx) < 1e-6


@pytest.mark.parametrize("r", range(0, 8))
def test_alpha_values(r):
    res = alpha_constant(PicardLattice.blow_up(r))
    assert res.alpha == ALPHA[r]
    assert res.alpha == res.rho * res.polytope_volume


def test_alpha_quadric():
    assert alpha_constant(PicardLattice.quadric()).alpha == Fraction(1, 4)


def test_alpha_r8_unsupported_by_default():
    with pytest.raises(UnsupportedDegree):
        alpha_constant(PicardLattice.blow_up(8))


@pytest.mark.parametrize("r", range(0, 7))
def test_triangulation_additivity(r):
    lat = PicardLattice.blow_up(r)
    a = pyramid_simplices(lat)
    b = pyramid_simplices(lat, pull_max=True)
    assert all(v > 0 for v in a + b)
    assert sum(a) == sum(b) == alpha_constant(lat).polytope_volume


@pytest.mark.parametrize("lat", [PicardLattice.blow_up(r) for r in (1, 2, 3, 4)] + [PicardLattice.quadric()], ids=str)
def test_monte_carlo_volume(lat):
    exact = float(alpha_constant(lat).polytope_volume)
    est = monte_carlo_volume(lat, samples=200_000, seed=1)
    assert abs(est - exact) / exact < 0.02


def test_count_examples():
    p2 = PicardLattice.blow_up(0)
    assert count_nef_points(p2, ClassVector((0,)), 3) == {3: 1}
    q = PicardLattice.quadric()
    assert count_nef_points(q, ClassVector((0, 0)), 4) == {2: 2, 4: 3}
    assert count_nef_points(q, ClassVector((3, 3)), 5) == {}


def _brute_counts(lat, offset, d, box):
    gens = effective_generators(lat)
    out = {}
    for c in itertools.product(range(-box, box + 1), repeat=lat.rank):
        g = ClassVector(c)
        deg = anticanonical_degree(lat, g)
        if 1 <= deg <= d and all(pairing(lat, g - offset, e) >= 0 for e in gens):
            out[deg] = out.get(deg, 0) + 1
    return dict(sorted(out.items()))


@pytest.mark.parametrize("lat,offset,d,box", [
    (PicardLattice.blow_up(1), (0, 0), 8, 10),
    (PicardLattice.blow_up(2), (1, 0, -1), 9, 10),
    (PicardLattice.blow_up(3), (0, 0, 0, 0), 6, 6),
    (PicardLattice.quadric(), (1, -1), 10, 12),
    (PicardLattice.blow_up(0), (-1,), 9, 6),
], ids=["r1", "r2-offset", "r3", "quadric-offset", "p2-negative-offset"])
def test_count_matches_brute_force(lat, offset, d, box):
    off = ClassVector(offset)
    assert count_nef_points(lat, off, d) == _brute_counts(lat, off, d, box)


def test_points_generator_matches_counts():
    lat = PicardLattice.blow_up(3)
    off = ClassVector((1, 0, 0, -1))
    got = {}
    for g, deg in nef_points(lat, off, 9):
        assert anticanonical_degree(lat, g) == deg
        got[deg] = got.get(deg, 0) + 1
    assert dict(sorted(got.items())) == count_nef_points(lat, off, 9)


def test_ehrhart_growth_r1():
    lat = PicardLattice.blow_up(1)
    vol = alpha_constant(lat).polytope_volume
    d = 400
    total = sum(count_nef_points(lat, ClassVector((0, 0)), d).values())
    assert abs(total / d**2 - vol) / vol < 0.05


def test_rational_cone_json():
    c = RationalCone(2, ((1, 0),), ((1, 0), (0, 1)))
    assert c.to_json()["generators"] == [[1, 0]]
    assert math.isinf(float("inf")) and PlusInfinity == math.inf
