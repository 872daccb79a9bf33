"""Deterministic instance generators.

Every generator is a pure function of its parameters; randomness comes from
``numpy.random.default_rng(seed)`` (PCG64), which is portable across platforms.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .. import _exact as ex
from ..constructions import worst_case
from ..errors import BadParams
from ..lattice import UnimodularMap, lift_and_apply
from ..mixed_integer import MixedIntegerBody
from ..polytope import MAX_DIM, Halfspace, Polytope, convex_hull, intersect_halfspace


@dataclass(frozen=True)
class InstanceFamily:
    name: str
    params: dict = field(default_factory=dict)

    def get(self, key, default=None):
        return self.params.get(key, default)

    @property
    def seed(self) -> int:
        return int(self.params.get("seed", 0))

    def instance_id(self) -> str:
        keys = ("n", "d", "k", "shape", "seed")
        parts = [f"{k}={self.params[k]}" for k in keys if k in self.params]
        return f"{self.name}[{','.join(parts)}]"


def parse_params(text: str | None) -> dict:
    """``"k=8,n=1,d=2"`` -> ``{"k": 8, "n": 1, "d": 2}``; non-integers stay strings."""
    out = {}
    if not text:
        return out
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        if "=" not in item:
            raise BadParams(f"expected key=value, got {item!r}")
        key, value = (s.strip() for s in item.split("=", 1))
        try:
            out[key] = int(value)
        except ValueError:
            try:
                out[key] = Fraction(value)
            except ValueError:
                out[key] = value
    return out


def _grid(rng: np.random.Generator, lo, hi, den: int, size) -> list[Fraction]:
    """Uniform rationals with denominator ``den`` in ``[lo, hi]``."""
    a = rng.integers(int(lo * den), int(hi * den) + 1, size=size)
    return [Fraction(int(v), den) for v in np.ravel(a)]


def _simplex_vertices(d: int, scale=1) -> list[tuple]:
    out = [(Fraction(0),) * d]
    for i in range(d):
        out.append(tuple(Fraction(scale) if j == i else Fraction(0) for j in range(d)))
    return out


def _dims(fam: InstanceFamily, n_default=1, d_default=1) -> tuple[int, int]:
    n = int(fam.get("n", n_default))
    d = int(fam.get("d", d_default))
    if n < 1 or d < 1:
        raise BadParams("n and d must be positive")
    if n + d > MAX_DIM:
        raise BadParams(f"n + d must be at most {MAX_DIM}")
    return n, d


def _k(fam: InstanceFamily, default=None) -> Fraction:
    k = fam.get("k", default)
    if k is None:
        raise BadParams("missing parameter 'k'")
    k = ex.to_fraction(k)
    if k <= 0:
        raise BadParams("k must be positive")
    return k


def gen_worst_case(fam: InstanceFamily) -> MixedIntegerBody:
    n, d = _dims(fam)
    return worst_case(n, d).body


def gen_product_box(fam: InstanceFamily) -> MixedIntegerBody:
    n, d = _dims(fam)
    k = _k(fam)
    return MixedIntegerBody(Polytope.box([0] * (n + d), [k] * n + [1] * d), n)


def gen_cone_product(fam: InstanceFamily) -> MixedIntegerBody:
    """Cone in ``(z_1, x)`` from the base ``{0} x Δ_d`` to the apex ``(k, centroid)``, times ``[0,k]^(n-1)``."""
    n, d = _dims(fam)
    k = _k(fam)
    base = _simplex_vertices(d)
    c = tuple(Fraction(1, d + 1) for _ in range(d))
    verts = []
    for corner in itertools.product((Fraction(0), k), repeat=n - 1):
        for v in base:
            verts.append((Fraction(0),) + corner + v)
        verts.append((k,) + corner + c)
    return MixedIntegerBody(Polytope.from_vertices(verts), n)


def gen_random_hull(fam: InstanceFamily) -> MixedIntegerBody:
    """Random hull over ``[0,k]^n x [0,1]^d`` that keeps the corners of the integer box."""
    n, d = _dims(fam)
    k = _k(fam, 6)
    rng = np.random.default_rng(fam.seed)
    m = int(fam.get("points", 3 * (n + d + 1)))
    verts = []
    for corner in itertools.product((Fraction(0), k), repeat=n):
        verts.append(corner + tuple(_grid(rng, 0, 1, 8, d)))
    for _ in range(m):
        z = tuple(_grid(rng, 0, k, 8, n))
        verts.append(z + tuple(_grid(rng, 0, 1, 8, d)))
    return MixedIntegerBody(Polytope.from_vertices(verts), n)


def random_unimodular(n: int, rng: np.random.Generator, steps: int = 3) -> UnimodularMap:
    """Product of random elementary shears with entries in ``[-2, 2]``."""
    rows = [[int(i == j) for j in range(n)] for i in range(n)]
    if n == 1:
        return UnimodularMap.from_matrix(rows)
    for _ in range(steps):
        i, j = rng.choice(n, size=2, replace=False)
        c = int(rng.integers(-2, 3)) or 1
        rows[int(i)] = [a + c * b for a, b in zip(rows[int(i)], rows[int(j)])]
    return UnimodularMap.from_matrix(rows)


def gen_sheared(fam: InstanceFamily) -> MixedIntegerBody:
    """Product box mapped by a random unimodular shear on the integer part."""
    n, d = _dims(fam, n_default=2)
    box = gen_product_box(InstanceFamily("product_box", {**fam.params, "n": n, "d": d}))
    rng = np.random.default_rng(fam.seed)
    return lift_and_apply(box, random_unimodular(n, rng))


def shear_of(fam: InstanceFamily) -> UnimodularMap:
    n, _ = _dims(fam, n_default=2)
    return random_unimodular(n, np.random.default_rng(fam.seed))


def _ball_polygon(n: int, k: Fraction, center: tuple) -> list[tuple]:
    """Vertices of a rational polytope containing the radius-``k`` ball about ``center``."""
    if n == 1:
        return [(center[0] - k,), (center[0] + k,)]
    if n == 2:
        # rational points on the unit circle, consecutive angles at most 0.33 apart;
        # scaling by 21/20 > 1/cos(0.165) keeps every edge outside the radius-k circle
        pts = {(Fraction(-1), Fraction(0))}
        for j in range(73):
            t = Fraction(j, 6) - 6
            pts.add(((1 - t * t) / (1 + t * t), 2 * t / (1 + t * t)))
        grow = Fraction(21, 20)
        return [(center[0] + grow * k * a, center[1] + grow * k * b) for a, b in sorted(pts)]
    # box ∩ scaled cross-polytope
    s = ex.sqrt_upper(n)
    out = []
    for signs in itertools.product((-1, 1), repeat=n):
        out.append(tuple(c + sg * k for c, sg in zip(center, signs)))
    P = convex_hull(out)
    for signs in itertools.product((-1, 1), repeat=n):
        normal = tuple(Fraction(-sg) for sg in signs)
        P = intersect_halfspace(P, Halfspace(normal, ex.dot(normal, center) - s * k))
    return list(P.vertices)


def gen_ball_prism(fam: InstanceFamily) -> MixedIntegerBody:
    """Projection containing a radius-``k`` ball about a non-integral center.

    Over ``z`` the fiber is ``f(z) * [0,1]^d`` (or ``f(z) Δ_d`` with
    ``shape=simplex``), with ``f`` affine, equal to 1 at the center and between
    1/2 and 3/2 on the ball.
    """
    n, d = _dims(fam)
    k = _k(fam)
    rng = np.random.default_rng(fam.seed)
    center = tuple(_grid(rng, 0, 1, 16, n))
    slope = tuple(_grid(rng, -1, 1, 8, n))
    norm1 = sum(abs(a) for a in slope) or Fraction(1)
    shape = fam.get("shape", "box")
    if shape == "simplex":
        cell = _simplex_vertices(d)
    elif shape == "box":
        cell = [tuple(Fraction(b) for b in bits) for bits in itertools.product((0, 1), repeat=d)]
    else:
        raise BadParams(f"unknown shape {shape!r}")
    verts = []
    proj = _ball_polygon(n, k, center)
    reach = max(max(abs(a - c) for a, c in zip(p, center)) for p in proj)
    for p in proj:
        f = 1 + ex.dot(slope, ex.sub(p, center)) / (2 * norm1 * reach)
        for v in cell:
            verts.append(tuple(p) + tuple(f * a for a in v))
    return MixedIntegerBody(Polytope.from_vertices(verts), n)


def gen_wedge(fam: InstanceFamily) -> MixedIntegerBody:
    """``[-k,k]^n`` with fibers ``((1 + z_1/k)/2) Δ_d``: a point at ``z_1 = -k``."""
    n, d = _dims(fam)
    k = _k(fam)
    verts = []
    for corner in itertools.product((-k, k), repeat=n):
        if corner[0] == -k:
            verts.append(corner + (Fraction(0),) * d)
        else:
            verts.extend(corner + v for v in _simplex_vertices(d))
    return MixedIntegerBody(Polytope.from_vertices(verts), n)


FAMILIES = {
    "worst_case": gen_worst_case,
    "product_box": gen_product_box,
    "cone_product": gen_cone_product,
    "random_hull": gen_random_hull,
    "sheared": gen_sheared,
    "ball_prism": gen_ball_prism,
    "wedge": gen_wedge,
}


def generate_instance(family: InstanceFamily) -> MixedIntegerBody:
    gen = FAMILIES.get(family.name)
    if gen is None:
        raise BadParams(f"unknown family {family.name!r}; choose from {sorted(FAMILIES)}")
    return gen(family)


def random_polytope(dim: int, seed: int, points: int | None = None, den: int = 16) -> Polytope:
    """Hull of random grid points in ``[-1,1]^dim`` (full-dimensional almost surely)."""
    rng = np.random.default_rng(seed)
    m = points if points is not None else 2 * dim + 2
    while True:
        pts = [tuple(_grid(rng, -1, 1, den, dim)) for _ in range(m)]
        P = Polytope.from_vertices(pts)
        if P.is_full_dimensional:
            return P
