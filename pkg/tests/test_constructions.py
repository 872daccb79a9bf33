import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, strategies as st

from mivolume import _exact as ex
from mivolume.constructions import (ApexInBasePlane, build_cone, centroid_height_fraction, centroid_shift,
                                    check_all_faces, check_centroid_cut, check_centroid_shift,
                                    check_cone_sandwich, check_single_face_bound, check_slice_box,
                                    check_slice_total, cone_infty, cone_spec, cone_volume_formula,
                                    inner_outer_cones_n1, shift_centroid_general, shift_centroid_n1,
                                    shrunken_slices_nested, subcone, subcone_volume_ratio, thales_check,
                                    worst_case, worst_case_instance)
from mivolume.errors import (BallTooSmall, HypothesisNotMet, InputNotInBody, InvalidHeight,
                             UnboundedResult)
from mivolume.harness.families import InstanceFamily, generate_instance, random_polytope
from mivolume.mixed_integer import MixedIntegerBody, chebyshev_ball, mu, projection
from mivolume.polytope import (Halfspace, Polytope, centroid, full_volume, intersect_halfspace, same_set,
                               volume)


def rational_rotation(p, rng):
    """Exactly orthogonal rational matrix from the Cayley transform of a skew matrix."""
    A = [[F(0)] * p for _ in range(p)]
    for i in range(p):
        for j in range(i + 1, p):
            a = F(int(rng.integers(-3, 4)), 2)
            A[i][j], A[j][i] = a, -a
    eye = [[F(int(i == j)) for j in range(p)] for i in range(p)]
    inv = ex.inverse([[eye[i][j] + A[i][j] for j in range(p)] for i in range(p)])
    minus = [[eye[i][j] - A[i][j] for j in range(p)] for i in range(p)]
    return [[sum(minus[i][k] * inv[k][j] for k in range(p)) for j in range(p)] for i in range(p)]


def random_cone(seed):
    """Base in ``{y_p = 0}``, apex at a rational height, then a rational rotation."""
    rng = np.random.default_rng(seed)
    p = 2 + seed % 4
    base = random_polytope(p - 1, seed)
    h = F(int(rng.integers(1, 9)), int(rng.integers(1, 4)))
    apex = tuple(F(int(a), 4) for a in rng.integers(-4, 5, size=p - 1)) + (h,)
    Q = rational_rotation(p, rng)
    rot = lambda v: tuple(ex.dot(r, v) for r in Q)  # noqa: E731
    base_pts = [rot(v + (F(0),)) for v in base.vertices]
    return rot(apex), Polytope.from_vertices(base_pts), h, p


# --- cones ------------------------------------------------------------------------------


def test_cone_examples():
    square = Polytope.from_vertices([(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 0)])
    assert volume(build_cone((0, 0, 3), square)) == 1
    seg = Polytope.from_vertices([(0, 0), (1, 0)])
    assert volume(build_cone((0, 1), seg)) == F(1, 2)


def test_apex_in_base_plane():
    with pytest.raises(ApexInBasePlane):
        build_cone((5, 0), Polytope.from_vertices([(0, 0), (1, 0)]))


@pytest.mark.parametrize("seed", range(50))
def test_cone_identities(seed):
    apex, base, h, p = random_cone(seed)
    K = cone_spec(apex, base)
    assert K.height == h
    cone = build_cone(apex, base)
    assert volume(cone) == cone_volume_formula(K) == h * volume(base) / p
    r = F(1 + seed % 5, 6)
    assert subcone_volume_ratio(K, r * h) == r**p
    assert volume(subcone(K, r)) == r**p * volume(cone)
    assert centroid_height_fraction(K) == F(p, p + 1)


def test_subcone_examples():
    square = Polytope.from_vertices([(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 0)])
    K = cone_spec((0, 0, 2), square)
    assert subcone_volume_ratio(K, 1) == F(1, 8)
    assert subcone_volume_ratio(K, 2) == 1
    tri = cone_spec((1, 3), Polytope.from_vertices([(0, 0), (2, 0)]))
    assert subcone_volume_ratio(tri, F(2, 3) * 3) == F(4, 9)
    with pytest.raises(InvalidHeight):
        subcone_volume_ratio(K, 3)
    with pytest.raises(InvalidHeight):
        subcone_volume_ratio(K, 0)


def test_cone_infty_examples():
    A = Polytope.from_vertices([(1, 0), (1, 1)])
    T = cone_infty((0, 0), A, (2, 3))
    assert same_set(T, Polytope.from_vertices([(2, 0), (2, 2), (3, 0), (3, 3)]))
    assert volume(T) == F(5, 2)
    assert same_set(cone_infty((0, 0), A, (1, 1)), A)
    with pytest.raises(UnboundedResult):
        cone_infty((1, 5), A, (2, 3))


@pytest.mark.parametrize("k", [8, 12])
def test_outer_cones_contain_body_slabs(k):
    M = generate_instance(InstanceFamily("cone_product", {"n": 1, "d": 1, "k": k}))
    a = inner_outer_cones_n1(M)
    for i, K in enumerate(a.outer):
        if K.is_empty:
            continue
        lo, hi = (i, i + 1) if 2 * i > k else (i - 1, i)
        if lo < 0 or hi > k:
            continue
        slab = intersect_halfspace(intersect_halfspace(M.body, Halfspace((1, 0), lo)),
                                   Halfspace((-1, 0), -hi))
        # "projecting S_i to the opposite side" covers C on that slab
        assert all(K.contains(v) for v in slab.vertices)


def test_inner_cones_of_product():
    k = 10
    M = generate_instance(InstanceFamily("product_box", {"n": 1, "d": 1, "k": k}))
    a = inner_outer_cones_n1(M)
    for K in a.inner:
        if not K.is_empty:
            assert full_volume(K) <= 1
    assert a.inner_ok and a.outer_ok
    assert a.vol_c == k


def test_point_fibers_handled():
    # fibers at both ends are single points
    M = MixedIntegerBody(Polytope.from_vertices([(0, 0), (4, 0), (2, 1), (2, -1)]), 1)
    rows = check_cone_sandwich(M)
    assert rows[0].satisfied and rows[1].satisfied


@pytest.mark.parametrize("seed", range(10))
def test_cone_sandwich_random(seed):
    M = generate_instance(InstanceFamily("random_hull", {"n": 1, "d": 1 + seed % 2, "k": 8 + seed, "seed": seed}))
    inner, outer, ratio = check_cone_sandwich(M)
    assert inner.satisfied and outer.satisfied
    assert ratio.relation == "ratio"


# --- single-face bound --------------------------------------------------------------------


def test_single_face_example():
    M = generate_instance(InstanceFamily("product_box", {"n": 1, "d": 1, "k": 10}))
    r = check_single_face_bound(M, 7)
    assert r.measured == F(1, 10)
    assert r.bound == F(8, 7) ** 2 - 1
    assert r.satisfied


def test_single_face_triangle_and_far_end():
    M = MixedIntegerBody(Polytope.from_vertices([(0, 0), (10, 0), (10, 10)]), 1)
    assert check_single_face_bound(M, 5).satisfied
    far = check_single_face_bound(M, 9)
    assert far.satisfied and far.bound == min(check_single_face_bound(M, i).bound for i in range(10))
    assert check_all_faces(M).satisfied


def test_single_face_needs_three_fibers():
    M = generate_instance(InstanceFamily("product_box", {"n": 1, "d": 1, "k": 1}))
    with pytest.raises(HypothesisNotMet):
        check_single_face_bound(M, 0)


# --- centroid cut (n = 1) -----------------------------------------------------------------


def test_centroid_cut_already_integral():
    cut = shift_centroid_n1(Polytope.box([0, 0], [4, 1]))
    assert cut.removed == 0


def test_centroid_cut_box():
    cut = shift_centroid_n1(Polytope.box([0, 0], [3, 1]))
    assert centroid(cut.body)[0] == 1
    assert cut.w == 2 and cut.removed == F(1, 3) and cut.exact
    # independent check: the kept part is [0, 2] x [0, 1]
    assert same_set(cut.body, Polytope.box([0, 0], [2, 1]))


@pytest.mark.parametrize("seed", range(10))
def test_centroid_cut_random(seed):
    M = generate_instance(InstanceFamily("random_hull", {"n": 1, "d": 1 + seed % 2, "k": 6, "seed": seed}))
    cut = shift_centroid_n1(M.body)
    c = centroid(cut.body)[0]
    if cut.exact:
        assert c.denominator == 1
    else:
        assert abs(c - round(c)) < F(1, 10**40)
    assert check_centroid_cut(M).satisfied


@pytest.mark.parametrize("seed", range(5))
def test_grunbaum_cut_at_centroid(seed):
    P = random_polytope(3, seed)
    c = centroid(P)
    for u in ((1, 0, 0), (0, 1, -1), (2, 1, 3)):
        part = volume(intersect_halfspace(P, Halfspace.through(u, c))) / volume(P)
        assert 1 / math.e <= part <= 1 - 1 / math.e


# --- thales and the general shift -----------------------------------------------------------


def disk(k=1):
    pts = []
    for j in range(-8, 9):
        t = F(j, 4)
        pts.append(((1 - t * t) / (1 + t * t) * k, 2 * t / (1 + t * t) * k))
    return Polytope.from_vertices(pts + [(-k, 0)])


def test_thales_examples():
    D = disk()
    for z in D.vertices[:4]:
        for w in D.vertices[-4:]:
            assert thales_check(D, z, w, F(1, 2))
    v = D.vertices[0]
    assert thales_check(D, v, v, F(1, 3))
    # (1 + eps) v lies on the boundary of (1 + eps) D
    big = Polytope.from_vertices([ex.smul(F(4, 3), u) for u in D.vertices])
    assert any(h.value(ex.smul(F(4, 3), v)) == 0 for h in big.halfspaces)
    with pytest.raises(InputNotInBody):
        thales_check(D, (5, 5), v, 1)


def test_thales_random_1000():
    rng = np.random.default_rng(0)
    for i in range(1000):
        P = random_polytope(2 + i % 2, i % 40)
        c = centroid(P)
        P = Polytope.from_vertices([ex.sub(v, c) for v in P.vertices])
        V = P.vertices
        a, b = rng.integers(0, len(V), size=2)
        lam = F(int(rng.integers(0, 9)), 8)
        w = tuple(lam * x + (1 - lam) * y for x, y in zip(V[a], V[b]))
        assert thales_check(P, V[a], w, F(int(rng.integers(1, 40)), 8))


def test_shift_zero_when_integral():
    M = generate_instance(InstanceFamily("product_box", {"n": 2, "d": 1, "k": 8}))
    ball = chebyshev_ball(projection(M))
    shift, body = shift_centroid_general(M.body, ball, 2)
    assert not any(shift) and body is M.body


def test_shift_ball_like_k16():
    M = generate_instance(InstanceFamily("ball_prism", {"n": 2, "d": 1, "k": 16, "seed": 2}))
    ball = chebyshev_ball(projection(M))
    res = centroid_shift(M.body, ball, 2)
    assert all(a.denominator == 1 for a in centroid(res.body)[:2])
    assert res.contained
    assert res.excess <= res.bound
    assert float(res.bound) == pytest.approx((1 + math.sqrt(2) / (2 * float(ball[1]))) ** 3 - 1, rel=1e-9)
    assert float(res.bound) <= (1 + math.sqrt(2) / 32) ** 3 - 1 + 1e-12
    assert check_centroid_shift(M, ball).satisfied


def test_shift_needs_big_ball():
    M = generate_instance(InstanceFamily("ball_prism", {"n": 2, "d": 1, "k": 2, "seed": 0}))
    with pytest.raises(BallTooSmall):
        centroid_shift(M.body, ((0, 0), F(2)), 2)


# --- slice bounds ---------------------------------------------------------------------------


def test_slice_box_product():
    k = 5
    M = MixedIntegerBody(Polytope.box([-k, -k, 0], [k, k, 1]), 2)
    r = check_slice_box(M, (0, 0), verified_r=k)
    assert r.measured == 1 and r.satisfied


def test_slice_box_hypothesis():
    M = MixedIntegerBody(Polytope.box([-1, -1, 0], [1, 1, 1]), 2)
    with pytest.raises(HypothesisNotMet):
        check_slice_box(M, (0, 0), verified_r=F(1, 2))


def test_slice_total_simplex_k25():
    M = MixedIntegerBody(Polytope.from_vertices([(-25, 0), (25, 0), (25, 50)]), 1)
    r = check_slice_total(M, 25)
    assert r.satisfied and r.bound == 0 and r.upper == 2


def test_slice_total_product():
    M = MixedIntegerBody(Polytope.box([-700, 0], [700, 1]), 1)
    r = check_slice_total(M, 700)
    assert r.measured == F(1401, 1400) and r.satisfied


def test_slice_total_hypothesis():
    M = MixedIntegerBody(Polytope.box([-5, 0], [5, 1]), 1)
    with pytest.raises(HypothesisNotMet):
        check_slice_total(M, 5)


@given(st.integers(0, 200), st.integers(1, 9))
def test_shrunken_slices_nested(seed, e):
    M = generate_instance(InstanceFamily("random_hull", {"n": 1, "d": 1, "k": 5, "seed": seed}))
    assert shrunken_slices_nested(M, F(e, 10), centroid(M.body))


# --- worst case -----------------------------------------------------------------------------


@pytest.mark.parametrize("n,d,expected", [(1, 1, F(1, 4)), (2, 2, F(1, 9)), (1, 2, F(2, 9)), (2, 1, F(1, 8))])
def test_worst_case_values(n, d, expected):
    M, H, exp = worst_case_instance(n, d, 100)
    assert exp == expected
    assert mu(M, H) == expected


@pytest.mark.parametrize("n,d", [(1, 1), (1, 3), (2, 2)])
def test_worst_case_r0_is_continuous_cut(n, d):
    M, H, _ = worst_case_instance(n, d, 0)
    assert mu(M, H) == F(d, d + 1) ** d


@pytest.mark.parametrize("n,d", [(1, 1), (1, 2), (2, 1), (2, 2)])
def test_worst_case_threshold(n, d):
    wc = worst_case(n, d)
    assert mu(worst_case(n, d, wc.threshold).body, worst_case(n, d, wc.threshold).halfspace) == wc.expected
    below = worst_case(n, d, wc.threshold / 2)
    assert mu(below.body, below.halfspace) > wc.expected


def test_worst_case_family_structure():
    M = generate_instance(InstanceFamily("worst_case", {"n": 1, "d": 1}))
    assert {f.z for f in M.fiber_set} == {(0,), (1,)}
    assert all(f.vol_d == 1 for f in M.fiber_set)
