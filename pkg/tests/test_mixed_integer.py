import json
import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, strategies as st

from mivolume import _exact as ex
from mivolume.errors import FiberBudgetExceeded, ZeroTotalVolume
from mivolume.harness.families import InstanceFamily, generate_instance
from mivolume.harness.oracle import mc_mu
from mivolume.mixed_integer import (CellMeasure, MixedIntegerBody, ball_radius_at, chebyshev_ball,
                                    enumerate_fibers, fiber_volume, mu, projection, rectangular_cut,
                                    total_volume)
from mivolume.polytope import Halfspace, Polytope, affine_slice, volume


def prism(n, d, lo, hi):
    return MixedIntegerBody(Polytope.box([lo] * n + [0] * d, [hi] * n + [1] * d), n)


def worst12():
    verts = [(z, 0, 0) for z in (0, 1)] + [(z, 1, 0) for z in (0, 1)] + [(z, 0, 1) for z in (0, 1)]
    return MixedIntegerBody(Polytope.from_vertices(verts), 1)


# --- fibers ------------------------------------------------------------------------


def test_fibers_of_product():
    fs = enumerate_fibers(prism(1, 1, 0, 3))
    assert [f.z for f in fs] == [(0,), (1,), (2,), (3,)]
    assert fs.total == 4


def test_fibers_between_integers_empty():
    M = MixedIntegerBody(Polytope.box([F(2, 5), 0], [F(3, 5), 1]), 1)
    assert len(enumerate_fibers(M)) == 0
    assert total_volume(M) == 0


def test_fibers_of_worst_case_body():
    verts = [(a, b, x, y) for a in (0, 1) for b in (0, 1) for x, y in ((0, 0), (1, 0), (0, 1))]
    M = MixedIntegerBody(Polytope.from_vertices(verts), 2)
    assert {f.z for f in M.fiber_set} == {(0, 0), (0, 1), (1, 0), (1, 1)}
    assert total_volume(M) == 4 * F(1, 2)


def test_lower_dimensional_fibers_weigh_zero():
    M = MixedIntegerBody(Polytope.from_vertices([(0, 0), (2, 0), (2, 2)]), 1)
    fs = M.fiber_set.by_z()
    assert set(fs) == {(0,), (1,), (2,)}
    assert fs[(0,)].vol_d == 0 and not fs[(0,)].full_dimensional
    assert total_volume(M) == 3


def test_total_volume_examples():
    assert total_volume(prism(1, 1, 0, 1)) == 2
    for k in (1, 5, 9):
        M = prism(1, 1, 0, k)
        assert total_volume(M) == k + 1
        assert total_volume(M) / volume(M.body) == F(k + 1, k)


def test_fiber_budget():
    from mivolume.mixed_integer import enumerate_fibers as enum

    with pytest.raises(FiberBudgetExceeded):
        enum(prism(2, 1, 0, 100), cap=1000)


def test_fiber_volume_matches_slice():
    M = generate_instance(InstanceFamily("random_hull", {"n": 2, "d": 1, "k": 4, "seed": 3}))
    for f in M.fiber_set:
        assert fiber_volume(M, f.z) == f.vol_d
        S = affine_slice(M.body, f.z)
        assert f.vol_d == (volume(S) if S.affine_dim == M.d else 0)


def test_fiber_csv():
    text = prism(1, 1, 0, 1).fiber_set.to_csv()
    assert text == "z,vol_d\n0,1\n1,1\n"


def test_json_round_trip():
    M = worst12()
    again = MixedIntegerBody.from_json(json.dumps(M.to_json()))
    assert again.n == 1 and again.d == 2 and total_volume(again) == total_volume(M)


# --- the measure mu ------------------------------------------------------------------


def test_mu_examples():
    M = prism(1, 1, 0, 1)
    assert mu(M, Halfspace((1, 0), -10)) == 1
    assert mu(M, Halfspace((-1, 0), 0)) == F(1, 2)
    W = worst12()
    R = 100
    c = (F(1, 3), F(1, 3))
    H = Halfspace.through((-R, 0, 1), (0,) + c)
    assert mu(W, H) == F(1, 2) * F(2, 3) ** 2


def test_mu_requires_mass():
    M = MixedIntegerBody(Polytope.box([F(2, 5), 0], [F(3, 5), 1]), 1)
    with pytest.raises(ZeroTotalVolume):
        mu(M, Halfspace((1, 0), 0))


@given(st.integers(0, 1000), st.lists(st.integers(-5, 5), min_size=3, max_size=3),
       st.integers(-40, 40))
def test_mu_complement_sums_to_one(seed, u, off):
    if not any(u):
        u = [0, 0, 1]
    M = generate_instance(InstanceFamily("random_hull", {"n": 1, "d": 2, "k": 4, "seed": seed}))
    # irrational-free generic offset: boundary slices have measure zero unless u is integer-only
    h = Halfspace(u, F(off, 7) + F(1, 1009))
    assert mu(M, h) + mu(M, h.complement()) == 1


@pytest.mark.parametrize("seed", range(4))
def test_mu_matches_monte_carlo(seed):
    M = generate_instance(InstanceFamily("random_hull", {"n": 1, "d": 2, "k": 5, "seed": seed}))
    rng = np.random.default_rng(seed)
    for _ in range(3):
        u = ex.vec(int(a) for a in rng.integers(-4, 5, size=3))
        if not any(u):
            continue
        x = tuple(F(int(a), 8) for a in rng.integers(0, 9, size=3))
        H = Halfspace.through(u, x)
        est, se = mc_mu(M, H, samples_per_fiber=4000, seed=seed)
        assert abs(float(mu(M, H)) - est) <= 3 * se + 1e-9


@pytest.mark.parametrize("seed", range(4))
def test_cell_measure_agrees_with_exact(seed):
    M = generate_instance(InstanceFamily("random_hull", {"n": 2, "d": 1, "k": 3, "seed": seed}))
    cm = CellMeasure.from_fibers(M.fiber_set, M.n, M.d)
    rng = np.random.default_rng(seed)
    for _ in range(5):
        u = ex.vec(int(a) for a in rng.integers(-4, 5, size=3))
        if not any(u):
            continue
        x = tuple(F(int(a), 4) for a in rng.integers(0, 9, size=3))
        H = Halfspace.through(u, x)
        assert cm.exact_fraction(H) == mu(M, H)


# --- rectangular cuts and balls ------------------------------------------------------


def test_rectangular_cut_examples():
    M = prism(1, 1, 0, 3)
    B = rectangular_cut(M, (1,))
    assert volume(B) == 1
    assert B.contains((F(1, 2), 0)) and B.contains((F(3, 2), 1))
    assert rectangular_cut(M, (7,)).is_empty


def test_projection():
    W = worst12()
    assert projection(W).vertices == ((0,), (1,)) or set(projection(W).vertices) == {(0,), (1,)}


def test_chebyshev_examples():
    c, r = chebyshev_ball(Polytope.box([0, 0], [2, 2]))
    assert c == (1, 1) and r == 1
    _, r = chebyshev_ball(Polytope.standard_simplex(2))
    exact = 1 / (2 + math.sqrt(2))
    assert r <= exact and float(r) == pytest.approx(exact, rel=1e-6)


@pytest.mark.parametrize("k", [4, 16])
def test_chebyshev_ball_like_polygon(k):
    M = generate_instance(InstanceFamily("ball_prism", {"n": 2, "d": 1, "k": k, "seed": 1}))
    _, r = chebyshev_ball(projection(M))
    assert k <= r <= F(21, 20) * k


@given(st.integers(0, 1000))
def test_certified_radius_is_feasible(seed):
    from mivolume.harness.families import random_polytope

    D = random_polytope(2, seed)
    c, r = chebyshev_ball(D)
    assert D.contains(c) and r > 0
    # every facet is at least r away from the centre
    for h in D.halfspaces:
        assert h.value(c) ** 2 >= r * r * ex.dot(h.normal, h.normal)
    assert ball_radius_at(D, c) == r
