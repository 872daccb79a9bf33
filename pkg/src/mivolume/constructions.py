"""Proof gadgets as executable constructors, plus per-lemma bound checkers.

Every checker returns :class:`LemmaCheckResult` with exact rational measured
values.  Bounds that involve square or fourth roots are decided with certified
rational enclosures of the root, so a reported ``satisfied=True`` is sound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import sympy

from . import _exact as ex
from .errors import (ApexInBasePlane, BallTooSmall, DegenerateInput, EmptyPolytope,
                     HypothesisNotMet, InputNotInBody, InvalidHeight,
                     NoIntegralCentroidReachable, UnboundedResult)
from .mixed_integer import (MixedIntegerBody, ball_radius_at, fiber_volume,
                            rectangular_cut, total_volume)
from .polytope import (Halfspace, Polytope, affine_slice, bounding_box, centroid,
                       convex_hull, full_volume, intersect, intersect_halfspace,
                       scale, translate, volume)


@dataclass(frozen=True)
class LemmaCheckResult:
    measured: Fraction
    bound: Fraction
    satisfied: bool
    instance_id: str = ""
    relation: str = "<="  # measured <relation> bound
    upper: Fraction | None = None  # second bound for two-sided checks
    note: str = ""

    def row(self) -> dict:
        return {
            "instance_id": self.instance_id,
            "measured": float(self.measured),
            "bound": float(self.bound) if self.upper is None else f"{float(self.bound)}..{float(self.upper)}",
            "satisfied": self.satisfied,
        }


# ---------------------------------------------------------------------------
# cones
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConeSpec:
    apex: tuple
    base: Polytope
    normal: tuple  # apex minus its orthogonal projection onto aff(base)

    @property
    def height_sq(self) -> Fraction:
        return ex.dot(self.normal, self.normal)

    @property
    def height(self):
        lo, hi = ex.sqrt_bounds(self.height_sq)
        return lo if lo == hi else math.sqrt(self.height_sq)

    @property
    def q(self) -> int:
        return self.base.affine_dim

    def level(self, y: Sequence) -> Fraction:
        """Affine height coordinate: 0 on aff(base), 1 at the apex."""
        b0 = self.base.vertices[0]
        return ex.dot(self.normal, ex.sub(y, b0)) / self.height_sq


def _orthogonal_offset(base: Polytope, y: tuple) -> tuple:
    """Component of ``y - b0`` orthogonal to the directions of aff(base)."""
    verts = base.vertices
    b0 = verts[0]
    basis: list[tuple] = []
    for v in verts[1:]:
        w = ex.sub(v, b0)
        for e in basis:
            w = ex.sub(w, ex.smul(ex.dot(w, e) / ex.dot(e, e), e))
        if any(w):
            basis.append(w)
    r = ex.sub(y, b0)
    for e in basis:
        r = ex.sub(r, ex.smul(ex.dot(r, e) / ex.dot(e, e), e))
    return r


def cone_spec(apex: Sequence, base: Polytope) -> ConeSpec:
    apex = ex.vec(apex)
    if base.is_empty:
        raise EmptyPolytope("empty base")
    normal = _orthogonal_offset(base, apex)
    if not any(normal):
        raise ApexInBasePlane("apex lies in the affine hull of the base")
    return ConeSpec(apex, base, normal)


def build_cone(apex: Sequence, base: Polytope) -> Polytope:
    """``conv({apex} ∪ base)``; the apex must lie off aff(base)."""
    cone_spec(apex, base)
    return convex_hull(list(base.vertices) + [ex.vec(apex)])


def cone_volume_formula(K: ConeSpec):
    """``h vol_q(base) / (q + 1)``, exact whenever ``h`` is rational."""
    return K.height * volume(K.base) / (K.q + 1)


def subcone(K: ConeSpec, ratio: Fraction) -> Polytope:
    """Cone with the same apex cut at ``ratio`` of the height."""
    base = scale(K.base, ratio, about=K.apex)
    return convex_hull(list(base.vertices) + [K.apex])


def subcone_volume_ratio(K: ConeSpec, h_prime) -> Fraction:
    """``(h'/h)^(q+1)``, verified against the explicitly built subcone."""
    h_prime = ex.to_fraction(h_prime)
    lo, hi = ex.sqrt_bounds(K.height_sq)
    if lo != hi:
        raise InvalidHeight("cone height is irrational; pass a cone with rational height")
    h = lo
    if not 0 < h_prime <= h:
        raise InvalidHeight(f"need 0 < h' <= h = {h}, got {h_prime}")
    r = h_prime / h
    expected = r ** (K.q + 1)
    full = volume(convex_hull(list(K.base.vertices) + [K.apex]))
    part = volume(subcone(K, r))
    if part != expected * full:
        raise AssertionError("subcone volume identity failed")
    return expected


def centroid_height_fraction(K: ConeSpec) -> Fraction:
    """Distance from the apex to the centroid level, as a fraction of ``h``."""
    c = centroid(convex_hull(list(K.base.vertices) + [K.apex]))
    return 1 - K.level(c)


def cone_infty(x: Sequence, A: Polytope, slab: tuple) -> Polytope:
    """``{x + t (y - x): t >= 0, y in A}`` clipped to ``slab`` on the first coordinate.

    ``A`` must lie in a hyperplane ``{y_1 = a}``.
    """
    x = ex.vec(x)
    if A.is_empty:
        raise EmptyPolytope("empty A")
    levels = {v[0] for v in A.vertices}
    if len(levels) != 1:
        raise DegenerateInput("A must lie in a hyperplane {y_1 = const}")
    a = levels.pop()
    if a == x[0]:
        raise UnboundedResult("apex shares the first coordinate of A")
    s0, s1 = (ex.to_fraction(s) for s in slab)
    if s0 > s1:
        raise DegenerateInput("empty slab")
    ts = sorted({max(Fraction(0), (s - x[0]) / (a - x[0])) for s in (s0, s1)})
    if all((s - x[0]) / (a - x[0]) < 0 for s in (s0, s1)):
        return Polytope.empty(len(x))
    pts = []
    for t in ts:
        for y in A.vertices:
            pts.append(tuple(xi + t * (yi - xi) for xi, yi in zip(x, y)))
    return convex_hull(pts)


def _slab(P: Polytope, lo, hi) -> Polytope:
    e = tuple(Fraction(int(i == 0)) for i in range(P.dim))
    Q = intersect_halfspace(P, Halfspace(e, ex.to_fraction(lo)))
    return intersect_halfspace(Q, Halfspace(ex.smul(-1, e), -ex.to_fraction(hi)))


# ---------------------------------------------------------------------------
# the case n = 1
# ---------------------------------------------------------------------------


def normalize_n1(M: MixedIntegerBody) -> tuple[MixedIntegerBody, int]:
    """Integral translation so that the fibers sit at ``0..k``; returns the offset."""
    if M.n != 1:
        raise DegenerateInput("n = 1 required")
    zs = [f.z[0] for f in M.fiber_set]
    if not zs:
        raise EmptyPolytope("S is empty")
    z0 = min(zs)
    if z0 == 0:
        return M, 0
    shift = (Fraction(-z0),) + (Fraction(0),) * M.d
    return MixedIntegerBody(translate(M.body, shift), 1), z0


def _lift(z, P: Polytope) -> Polytope:
    return Polytope.from_vertices([(Fraction(z),) + v for v in P.vertices])


def _fiber_span(M: MixedIntegerBody) -> int:
    zs = [f.z[0] for f in M.fiber_set]
    return max(zs) - min(zs)


def slab_volumes(M: MixedIntegerBody) -> list[Fraction]:
    """``vol(C_i)`` for ``C_i = C ∩ [i, i+1]``, i = 0..k-1 (after normalization)."""
    N, _ = normalize_n1(M)
    k = _fiber_span(N)
    return [full_volume(_slab(N.body, i, i + 1)) for i in range(k)]


def check_single_face_bound(M: MixedIntegerBody, i: int, instance_id: str = "") -> LemmaCheckResult:
    """``vol(C_i)/vol(C) <= (1 + 1/j)^(d+1) - 1``.

    ``j = i`` when ``i >= k/2`` (cone from the left end); otherwise the mirrored
    construction from the right end gives ``j = k - i - 1``.
    """
    N, _ = normalize_n1(M)
    k = _fiber_span(N)
    if k < 2:
        raise HypothesisNotMet("need at least three fibers (k >= 2)")
    if not 0 <= i < k:
        raise ValueError(f"slab index {i} outside 0..{k - 1}")
    j = i if 2 * i >= k else k - i - 1
    measured = full_volume(_slab(N.body, i, i + 1)) / full_volume(N.body)
    bound = (1 + Fraction(1, j)) ** (N.d + 1) - 1
    return LemmaCheckResult(measured, bound, measured <= bound, instance_id, "<=", note=f"i={i} j={j}")


def check_all_faces(M: MixedIntegerBody, instance_id: str = "") -> LemmaCheckResult:
    """Single-face bound on every slab; reports the tightest one."""
    N, _ = normalize_n1(M)
    k = _fiber_span(N)
    results = [check_single_face_bound(N, i, instance_id) for i in range(k)]
    worst = max(results, key=lambda r: r.measured / r.bound)
    return LemmaCheckResult(worst.measured, worst.bound, all(r.satisfied for r in results),
                            instance_id, "<=", note=worst.note)


@dataclass
class ConeApproximation:
    inner: list[Polytope]
    outer: list[Polytope]
    inner_sum: Fraction
    outer_sum: Fraction
    vol_c: Fraction
    vol_s: Fraction
    max_slab: Fraction
    k: int

    @property
    def inner_ok(self) -> bool:
        return self.inner_sum <= self.vol_c + self.max_slab

    @property
    def outer_ok(self) -> bool:
        return self.outer_sum >= self.vol_c - self.max_slab


def inner_outer_cones_n1(M: MixedIntegerBody) -> ConeApproximation:
    """Inner cones from the near end point and outer infinite cones toward the far side."""
    N, _ = normalize_n1(M)
    k = _fiber_span(N)
    if k < 1:
        raise HypothesisNotMet("need at least two fibers")
    fibers = N.fiber_set.by_z()
    S = {i: _lift(i, fibers[(i,)].slice) for i in range(k + 1)}
    x0 = (Fraction(0),) + centroid(fibers[(0,)].slice)
    xk = (Fraction(k),) + centroid(fibers[(k,)].slice)
    inner, outer = [], []
    for i in range(k + 1):
        if 2 * i > k:
            inner.append(cone_infty(x0, S[i], (i - 1, i)))
            outer.append(cone_infty(x0, S[i], (i, i + 1)))
        else:
            inner.append(cone_infty(xk, S[i], (i, i + 1)))
            outer.append(cone_infty(xk, S[i], (i - 1, i)))
    inner_sum = sum((full_volume(P) for P in inner), Fraction(0))
    outer_sum = sum((full_volume(P) for P in outer), Fraction(0))
    slabs = slab_volumes(N)
    return ConeApproximation(inner, outer, inner_sum, outer_sum, full_volume(N.body),
                             total_volume(N), max(slabs), k)


def check_cone_sandwich(M: MixedIntegerBody, instance_id: str = "") -> list[LemmaCheckResult]:
    """The two sums of the inner/outer approximation against ``vol(C) ± max vol(C_i)``.

    A third row reports ``|vol_d(S) - vol(C)| / vol(C)`` divided by ``d/k``;
    no constant is claimed for it, so it carries no pass/fail meaning.
    """
    a = inner_outer_cones_n1(M)
    d = M.d
    dev = abs(a.vol_s - a.vol_c) / a.vol_c / Fraction(d, a.k)
    return [
        LemmaCheckResult(a.inner_sum, a.vol_c + a.max_slab, a.inner_ok, instance_id, "<=", note="inner"),
        LemmaCheckResult(a.outer_sum, a.vol_c - a.max_slab, a.outer_ok, instance_id, ">=", note="outer"),
        LemmaCheckResult(dev, Fraction(0), True, instance_id, "ratio", note="deviation over d/k"),
    ]


# -- centroid cut ------------------------------------------------------------


def _section_polynomial(P: Polytope, a: Fraction, b: Fraction, d: int) -> list[Fraction]:
    """Coefficients of ``s -> vol_d(P ∩ {y_1 = s})`` on ``[a, b]`` (degree <= d)."""
    xs = [a + (b - a) * Fraction(j + 1, d + 2) for j in range(d + 1)]
    ys = [full_volume(affine_slice(P, (s,))) for s in xs]
    poly = sympy.interpolate(list(zip(xs, ys)), sympy.Symbol("s"))
    coeffs = sympy.Poly(poly, sympy.Symbol("s")).all_coeffs()[::-1]
    return [Fraction(int(c.p), int(c.q)) for c in coeffs]


def _integrate(coeffs: Sequence[Fraction], a: Fraction, b: Fraction, power: int) -> Fraction:
    """``∫_a^b s^power p(s) ds``."""
    return sum((c * (b ** (i + power + 1) - a ** (i + power + 1)) / (i + power + 1)
                for i, c in enumerate(coeffs)), Fraction(0))


@dataclass(frozen=True)
class CentroidCut:
    body: Polytope
    w: Fraction
    side: str  # "right": keep y_1 <= w; "left": keep y_1 >= w
    target: int
    removed: Fraction  # removed volume as a fraction of vol(C)
    bound: Fraction  # delta / (z(C_far) - z(C)), the proof's sufficient removal
    exact: bool  # True if the cut centroid is exactly integral


def _cut_profile(P: Polytope, d: int):
    """Piecewise section polynomials between consecutive vertex levels."""
    levels = sorted({v[0] for v in P.vertices})
    pieces = []
    for a, b in zip(levels, levels[1:]):
        pieces.append((a, b, _section_polynomial(P, a, b, d)))
    return pieces


def _solve_cut(pieces, target: Fraction):
    """Smallest ``w`` with ``∫_{-inf}^w (s - target) A(s) ds = 0`` after the first level."""
    s = sympy.Symbol("s")
    vol = Fraction(0)
    mom = Fraction(0)
    prev_phi = None
    for a, b, coeffs in pieces:
        v_ab = _integrate(coeffs, a, b, 0)
        m_ab = _integrate(coeffs, a, b, 1)
        nv, nm = vol + v_ab, mom + m_ab
        phi_b = nm / nv if nv else None
        if prev_phi is not None and phi_b is not None and phi_b < prev_phi:
            raise AssertionError("cut centroid is not monotone in w")
        if phi_b is not None and phi_b >= target:
            # F(w) = mom + ∫_a^w t A - target (vol + ∫_a^w A) on [a, b]
            A = sum(sympy.Rational(c.numerator, c.denominator) * s**i for i, c in enumerate(coeffs))
            t = sympy.Symbol("t")
            F = (sympy.Rational(mom.numerator, mom.denominator)
                 - sympy.Rational(target) * sympy.Rational(vol.numerator, vol.denominator)
                 + sympy.integrate((t - sympy.Rational(target)) * A.subs(s, t), (t, sympy.Rational(a.numerator, a.denominator), s)))
            poly = sympy.Poly(sympy.expand(F), s)
            lo, hi = sympy.Rational(a.numerator, a.denominator), sympy.Rational(b.numerator, b.denominator)
            roots = [r for r in poly.real_roots() if lo <= r <= hi and (vol > 0 or r > lo)]
            if not roots:
                raise NoIntegralCentroidReachable("moment equation has no root on the active piece")
            r = min(roots)
            if r.is_Rational:
                return Fraction(int(r.p), int(r.q)), True
            approx = sympy.Rational(sympy.N(r, 60))
            return Fraction(int(approx.p), int(approx.q)), False
        vol, mom, prev_phi = nv, nm, phi_b
    raise NoIntegralCentroidReachable("target not reached")


def _mirror(P: Polytope) -> Polytope:
    return Polytope.from_vertices([(-v[0],) + v[1:] for v in P.vertices])


def _side_cut(P: Polytope, d: int, target: int, side: str) -> CentroidCut:
    Q = P if side == "right" else _mirror(P)
    tgt = target if side == "right" else -target
    vol = full_volume(Q)
    c = centroid(Q)[0]
    lo = min(v[0] for v in Q.vertices)
    if not lo < tgt < c:
        raise NoIntegralCentroidReachable(f"target {target} outside the reachable range")
    w, exact = _solve_cut(_cut_profile(Q, d), Fraction(tgt))
    kept = _slab(Q, lo, w)
    removed = 1 - full_volume(kept) / vol
    far = _slab(Q, c, max(v[0] for v in Q.vertices))
    z_far = centroid(far)[0] - c
    bound = (c - tgt) / z_far
    if side == "left":
        kept, w = _mirror(kept), -w
    return CentroidCut(kept, w, side, target, removed, bound, exact)


def shift_centroid_n1(C: Polytope) -> CentroidCut:
    """Cut ``C`` by ``{y_1 <= w}`` (or mirrored) so its centroid has an integral first coordinate.

    Both the floor target (cut on the right) and the ceiling target (cut on
    the left) are tried; the smaller removal wins, ties go to the right cut.
    """
    lo, hi = bounding_box(C)
    if hi[0] - lo[0] < 2:
        raise HypothesisNotMet("projection length must be at least 2")
    d = C.dim - 1
    c = centroid(C)[0]
    if c.denominator == 1:
        return CentroidCut(C, hi[0], "right", int(c), Fraction(0), Fraction(0), True)
    options = []
    for side, target in (("right", math.floor(c)), ("left", math.ceil(c))):
        try:
            options.append(_side_cut(C, d, target, side))
        except NoIntegralCentroidReachable:
            continue
    if not options:
        raise NoIntegralCentroidReachable("no integral centroid reachable by a one-sided cut")
    return min(options, key=lambda o: o.removed)


def check_centroid_cut(M: MixedIntegerBody, instance_id: str = "") -> LemmaCheckResult:
    cut = shift_centroid_n1(M.body)
    c = centroid(cut.body)[0]
    ok = cut.removed <= cut.bound and (c.denominator == 1 or not cut.exact)
    return LemmaCheckResult(cut.removed, cut.bound, ok, instance_id, "<=",
                            note=f"w={float(cut.w)} exact={cut.exact}")


# ---------------------------------------------------------------------------
# the general case
# ---------------------------------------------------------------------------


def thales_check(D: Polytope, z: Sequence, w: Sequence, eps) -> bool:
    """``z + eps w`` lies in ``(1 + eps) D`` (scaled about the origin)."""
    z, w, eps = ex.vec(z), ex.vec(w), ex.to_fraction(eps)
    if not D.contains(z) or not D.contains(w):
        raise InputNotInBody("z and w must lie in D")
    if eps <= 0:
        raise ValueError("eps must be positive")
    return scale(D, 1 + eps).contains(ex.add(z, ex.smul(eps, w)))


def _top_lift(C: Polytope, z: Sequence) -> tuple:
    """Point of ``C`` over ``z`` maximizing the last coordinates lexicographically."""
    s = affine_slice(C, z)
    if s.is_empty:
        raise EmptyPolytope(f"no point of C over {tuple(z)}")
    best = max(s.vertices, key=lambda v: v[::-1])
    return tuple(ex.vec(z)) + best


@dataclass(frozen=True)
class CentroidShift:
    shift: tuple
    body: Polytope
    t: Fraction  # shift = t (x'' - p0)
    origin: tuple  # p0, the point of C over the ball center
    lift: tuple  # x''
    excess: Fraction  # vol((C + shift) \ C) / vol(C)
    bound: Fraction  # (1 + sqrt(n)/(2k))^(n+d) - 1 with a lower enclosure of sqrt(n)
    contained: bool  # C + shift ⊆ p0 + (1 + t)(C - p0)


def shift_centroid_general(C: Polytope, ball: tuple, n: int) -> tuple[tuple, Polytope]:
    """Translate ``C`` so its centroid has integral first ``n`` coordinates."""
    res = centroid_shift(C, ball, n)
    return res.shift, res.body


def centroid_shift(C: Polytope, ball: tuple, n: int) -> CentroidShift:
    """The shift construction with its certificate.

    ``ball = (center, k)`` is a verified ball in the projection.  The proof's
    factor ``sqrt(n)/(2k)`` is replaced by the rational ``t = ||delta||/k``
    rounded up, which also keeps ``z''`` inside the ball.
    """
    center, k = ball
    center, k = ex.vec(center), ex.to_fraction(k)
    if k <= n:
        raise BallTooSmall(f"need ball radius k > n = {n}, got {k}")
    p = C.dim
    g = centroid(C)
    z = g[:n]
    z_int = tuple(Fraction(math.floor(a + Fraction(1, 2))) for a in z)
    delta = ex.sub(z_int, z)
    vol = full_volume(C)
    n_lo = ex.sqrt_lower(n)
    bound = (1 + n_lo / (2 * k)) ** (p) - 1
    if not any(delta):
        zero = (Fraction(0),) * p
        return CentroidShift(zero, C, Fraction(0), (), (), Fraction(0), bound, True)
    t = ex.sqrt_upper(ex.dot(delta, delta)) / k
    z2 = ex.add(center, ex.smul(1 / t, delta))
    p0 = _top_lift(C, center)
    x2 = _top_lift(C, z2)
    shift = ex.smul(t, ex.sub(x2, p0))
    moved = translate(C, shift)
    excess = (vol - full_volume(intersect(moved, C))) / vol
    enlarged = scale(C, 1 + t, about=p0)
    contained = all(enlarged.contains(v) for v in moved.vertices)
    return CentroidShift(shift, moved, t, p0, x2, excess, bound, contained)


def check_centroid_shift(M: MixedIntegerBody, ball: tuple, instance_id: str = "") -> LemmaCheckResult:
    res = centroid_shift(M.body, ball, M.n)
    integral = all(a.denominator == 1 for a in centroid(res.body)[: M.n])
    ok = res.excess <= res.bound and res.contained and integral
    return LemmaCheckResult(res.excess, res.bound, ok, instance_id, "<=",
                            note=f"t={float(res.t):.6g}")


def _power_interval(lo: Fraction, hi: Fraction, e: int) -> tuple[Fraction, Fraction]:
    return lo**e, hi**e


def check_slice_box(M: MixedIntegerBody, z: Sequence[int], verified_r=None,
                    instance_id: str = "") -> LemmaCheckResult:
    """``vol(S_z)(1 - a)^d <= vol(B_z) <= vol(S_z)(1 + a)^d`` with ``a = sqrt(n)/(2r)``.

    The check passes only if it holds for every value of ``sqrt(n)`` in a
    certified enclosure, so both sides use the unfavourable endpoint.
    """
    n, d = M.n, M.d
    z = tuple(int(a) for a in z)
    proj = Polytope.from_vertices([v[:n] for v in M.body.vertices])
    r = ex.to_fraction(verified_r) if verified_r is not None else ball_radius_at(proj, z)
    if 4 * r * r <= n:
        raise HypothesisNotMet(f"ball radius {r} is not above sqrt(n)/2")
    s = fiber_volume(M, z)
    if s == 0:
        raise HypothesisNotMet("slice is not full-dimensional")
    box = full_volume(rectangular_cut(M, z))
    measured = box / s
    n_lo, n_hi = ex.sqrt_bounds(n)
    lower = (1 - n_lo / (2 * r)) ** d  # largest admissible lower bound
    upper = (1 + n_lo / (2 * r)) ** d  # smallest admissible upper bound
    ok = lower <= measured <= upper
    return LemmaCheckResult(measured, lower, ok, instance_id, "in", upper=upper, note=f"r={float(r):.6g}")


def check_slice_total(M: MixedIntegerBody, verified_k, instance_id: str = "") -> LemmaCheckResult:
    """``|vol_d(S)/vol(C) - 1| <= 5 d n^(3/4) / sqrt(k)``, needing that quantity ``<= 1``."""
    n, d = M.n, M.d
    k = ex.to_fraction(verified_k)
    a4 = Fraction(625 * d**4 * n**3) / (k * k)  # (5 d n^(3/4) / sqrt(k))^4
    if a4 > 1:
        raise HypothesisNotMet(f"5 d n^(3/4)/sqrt(k) > 1 for k = {k}")
    a_lo, a_hi = ex.root_bounds(a4, 4)
    measured = total_volume(M) / full_volume(M.body)
    lower, upper = 1 - a_lo, 1 + a_lo
    ok = lower <= measured <= upper
    return LemmaCheckResult(measured, lower, ok, instance_id, "in", upper=upper)


def shrunken_slices_nested(M: MixedIntegerBody, eps, about: Sequence) -> bool:
    """Slices of ``(1 - eps)`` C (scaled about a point of C) sit inside those of C."""
    eps = ex.to_fraction(eps)
    small = MixedIntegerBody(scale(M.body, 1 - eps, about=about), M.n)
    big = M.fiber_set.by_z()
    for f in small.fiber_set:
        if f.vol_d == 0:
            continue
        if f.z not in big:
            return False
        if not all(big[f.z].slice.contains(v) for v in f.slice.vertices):
            return False
    return True


# ---------------------------------------------------------------------------
# the worst-case instance
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WorstCase:
    body: MixedIntegerBody
    halfspace: Halfspace
    expected: Fraction
    point: tuple
    threshold: Fraction  # smallest R for which the cut is exactly tight


def worst_case_instance(n: int, d: int, R=100) -> tuple[MixedIntegerBody, Halfspace, Fraction]:
    wc = worst_case(n, d, R)
    return wc.body, wc.halfspace, wc.expected


def worst_case(n: int, d: int, R=100) -> WorstCase:
    """``[0,1]^n x K`` with ``K`` the standard d-simplex, viewed as a cone with apex ``e_d``.

    The tight cut at the centerpoint ``(0, c)`` is
    ``R u_n.(w - 0) + (x_d - 1/(d+1)) >= 0`` with ``u_n = -(1,...,1)``.
    Every other fiber is excluded once ``R >= d/(d+1)``.
    """
    if n < 1 or d < 1:
        raise ValueError("n and d must be positive")
    R = ex.to_fraction(R)
    K = Polytope.standard_simplex(d)
    verts = []
    for v in K.vertices:
        for corner in range(2**n):
            z = tuple(Fraction((corner >> j) & 1) for j in range(n))
            verts.append(z + v)
    body = MixedIntegerBody(Polytope.from_vertices(verts), n)
    c = (Fraction(1, d + 1),) * d
    point = (Fraction(0),) * n + c
    u = (-R,) * n + (Fraction(0),) * (d - 1) + (Fraction(1),)
    if not any(u):
        raise ValueError("R = 0 with d = 0")
    H = Halfspace.through(u, point)
    expected = Fraction(d, d + 1) ** d / 2**n
    return WorstCase(body, H, expected, point, Fraction(d, d + 1))
