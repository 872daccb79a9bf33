"""Mixed-integer structure on top of polytopes.

``S = C ∩ (Z^n x R^d)`` is handled fiber by fiber: each integer point ``z``
of the projection carries the slice ``S_z(C)``, whose d-dimensional volume
enters the mixed-integer measure.  Slices of dimension below ``d`` are kept
(they are points of ``S``) but weigh zero.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np
from scipy.optimize import linprog

from . import _exact as ex
from .errors import (DimensionMismatch, EmptyPolytope, FiberBudgetExceeded,
                     ZeroTotalVolume)
from .polytope import (Halfspace, Polytope, affine_slice, full_volume,
                       project, _unit)

DEFAULT_FIBER_CAP = 10**6


@dataclass(frozen=True)
class MixedIntegerBody:
    """A polytope ``body`` in R^(n+d) whose first ``n`` coordinates are integral."""

    body: Polytope
    n: int

    def __post_init__(self):
        if self.n < 1 or self.body.dim - self.n < 1:
            raise DimensionMismatch(f"need n >= 1 and d >= 1, got n={self.n}, dim={self.body.dim}")

    @property
    def d(self) -> int:
        return self.body.dim - self.n

    @property
    def dim(self) -> int:
        return self.body.dim

    @cached_property
    def fiber_set(self) -> "FiberSet":
        return enumerate_fibers(self)

    @cached_property
    def cells(self) -> "CellMeasure":
        return CellMeasure.from_fibers(self.fiber_set, self.n, self.d)

    def to_json(self) -> dict:
        return {"n": self.n, "d": self.d, "body": self.body.to_json()}

    @classmethod
    def from_json(cls, obj) -> "MixedIntegerBody":
        if isinstance(obj, str):
            obj = json.loads(obj)
        body = Polytope.from_json(obj["body"])
        n = int(obj["n"])
        if "d" in obj and int(obj["d"]) != body.dim - n:
            raise DimensionMismatch("n + d does not match the body dimension")
        return cls(body, n)


@dataclass(frozen=True)
class Fiber:
    z: tuple
    slice: Polytope
    vol_d: Fraction

    @property
    def full_dimensional(self) -> bool:
        return self.vol_d > 0


@dataclass(frozen=True)
class FiberSet:
    fibers: tuple
    total: Fraction

    def __len__(self) -> int:
        return len(self.fibers)

    def __iter__(self):
        return iter(self.fibers)

    def by_z(self) -> dict:
        return {f.z: f for f in self.fibers}

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["z", "vol_d"])
        for f in self.fibers:
            w.writerow([";".join(str(c) for c in f.z), ex.fraction_to_json(f.vol_d)])
        return buf.getvalue()


def _integer_range(lo: Fraction, hi: Fraction) -> range:
    return range(math.ceil(lo), math.floor(hi) + 1)


def integer_candidates(M: MixedIntegerBody) -> list[range]:
    verts = M.body.vertices
    if not verts:
        return [range(0) for _ in range(M.n)]
    return [_integer_range(min(v[i] for v in verts), max(v[i] for v in verts)) for i in range(M.n)]


def enumerate_fibers(M: MixedIntegerBody, cap: int = DEFAULT_FIBER_CAP) -> FiberSet:
    """All integer points ``z`` with a nonempty slice, in lexicographic order."""
    ranges = integer_candidates(M)
    count = math.prod(len(r) for r in ranges)
    if count > cap:
        raise FiberBudgetExceeded(f"{count} integer candidates exceed the cap of {cap}")
    fibers = []
    total = Fraction(0)
    for z in itertools.product(*ranges):
        s = affine_slice(M.body, z)
        if s.is_empty:
            continue
        v = full_volume(s)
        fibers.append(Fiber(tuple(z), s, v))
        total += v
    return FiberSet(tuple(fibers), total)


def fiber_volume(M: MixedIntegerBody, z: Sequence[int]) -> Fraction:
    """``vol_d(S_z(C))``, zero for lower-dimensional or empty slices."""
    return full_volume(affine_slice(M.body, z))


def total_volume(M: MixedIntegerBody) -> Fraction:
    return M.fiber_set.total


def mu(M: MixedIntegerBody, H: Halfspace) -> Fraction:
    """Mixed-integer measure of ``H ∩ S``."""
    if H.dim != M.dim:
        raise DimensionMismatch("halfspace dimension differs from the body")
    cells = M.cells
    if cells.total == 0:
        raise ZeroTotalVolume("S has no full-dimensional fiber")
    return cells.exact_mass(H) / cells.total


def box_polytope(z: Sequence, n: int, d: int) -> list[Halfspace]:
    """Halfspaces of ``Box_z x R^d`` (unit infinity-ball on the integer part)."""
    out = []
    p = n + d
    half = Fraction(1, 2)
    for i in range(n):
        e = _unit(p, i)
        zi = ex.to_fraction(z[i])
        out.append(Halfspace(e, zi - half))
        out.append(Halfspace(tuple(-a for a in e), -(zi + half)))
    return out


def rectangular_cut(M: MixedIntegerBody, z: Sequence[int]) -> Polytope:
    """``C ∩ (Box_z x R^d)``."""
    from .polytope import _vertices_from_halfspaces

    hs = tuple(M.body.halfspaces) + tuple(box_polytope(z, M.n, M.d))
    return Polytope(M.dim, halfspaces=hs, vertices=_vertices_from_halfspaces(hs, M.dim))


def projection(M: MixedIntegerBody) -> Polytope:
    return project(M.body, M.n)


# ---------------------------------------------------------------------------
# inscribed balls
# ---------------------------------------------------------------------------


def ball_radius_at(D: Polytope, center: Sequence) -> Fraction:
    """Certified lower bound on the largest ball radius about ``center`` in ``D``.

    Zero when ``center`` is outside ``D`` or ``D`` is not full-dimensional.
    """
    c = ex.vec(center)
    if D.is_empty or not D.is_full_dimensional or not D.contains(c):
        return Fraction(0)
    best = None
    for h in D.halfspaces:
        slack = h.value(c)
        norm_hi = ex.sqrt_upper(ex.dot(h.normal, h.normal))
        r = slack / norm_hi
        best = r if best is None else min(best, r)
    return best


def chebyshev_ball(D: Polytope) -> tuple[tuple, Fraction]:
    """Center and certified radius of a largest inscribed Euclidean ball.

    The LP runs in floating point; the center is then rounded to a rational
    point and the radius recomputed exactly as a guaranteed lower bound.
    """
    if D.is_empty:
        raise EmptyPolytope("Chebyshev ball of the empty set")
    from .polytope import centroid

    if not D.is_full_dimensional:
        return centroid(D), Fraction(0)
    hs = D.halfspaces
    p = D.dim
    a = np.array([[float(x) for x in h.normal] for h in hs])
    b = np.array([float(h.offset) for h in hs])
    norms = np.linalg.norm(a, axis=1)
    scale = norms.copy()
    # a x - r |a| >= b  <=>  -a x + r |a| <= -b, rows normalised
    a_ub = np.hstack([-a / scale[:, None], np.ones((len(hs), 1))])
    b_ub = -b / scale
    cost = np.zeros(p + 1)
    cost[-1] = -1.0
    res = linprog(cost, A_ub=a_ub, b_ub=b_ub, bounds=[(None, None)] * p + [(0, None)], method="highs")
    candidates = []
    if res.status == 0:
        x = res.x[:p]
        for den in (10**4, 10**6, 10**9):
            candidates.append(tuple(Fraction(float(v)).limit_denominator(den) for v in x))
    candidates.append(centroid(D))
    best_c, best_r = None, Fraction(-1)
    for c in candidates:
        r = ball_radius_at(D, c)
        if r > best_r:
            best_c, best_r = c, r
    return best_c, best_r


# ---------------------------------------------------------------------------
# simplicial measure
# ---------------------------------------------------------------------------


def _simplex_fraction_exact(h: Sequence[Fraction], verts: Sequence[tuple]) -> Fraction:
    """Fraction of a simplex's volume where an affine function ``h >= 0``."""
    pos = [i for i, v in enumerate(h) if v > 0]
    neg = [i for i, v in enumerate(h) if v < 0]
    if not neg:
        return Fraction(1)
    if not pos:
        return Fraction(0)
    if len(pos) == 1:
        hp = h[pos[0]]
        out = Fraction(1)
        for j, hj in enumerate(h):
            if j != pos[0]:
                out *= hp / (hp - hj)
        return out
    if len(neg) == 1:
        hn = h[neg[0]]
        out = Fraction(1)
        for j, hj in enumerate(h):
            if j != neg[0]:
                out *= hn / (hn - hj)
        return 1 - out
    # several vertices on both sides: clip and measure the piece
    pts = [verts[i] for i, v in enumerate(h) if v >= 0]
    for i in pos:
        for j in neg:
            t = h[i] / (h[i] - h[j])
            pts.append(tuple(a + t * (b - a) for a, b in zip(verts[i], verts[j])))
    piece = Polytope.from_vertices(pts)
    whole = Polytope.from_vertices(verts)
    return full_volume(piece) / full_volume(whole)


def simplex_fractions(h: np.ndarray) -> np.ndarray:
    """Vectorised float version of :func:`_simplex_fraction_exact` over the last axis."""
    pos = h > 0
    neg = h < 0
    npos = pos.sum(-1)
    nneg = neg.sum(-1)
    out = np.zeros(h.shape[:-1])
    out[nneg == 0] = 1.0
    one_pos = (npos == 1) & (nneg > 0)
    if one_pos.any():
        hh = h[one_pos]
        hp = hh.max(-1, keepdims=True)
        with np.errstate(divide="ignore", invalid="ignore"):
            t = np.where(hh == hp, 1.0, hp / (hp - hh))
        out[one_pos] = t.prod(-1)
    one_neg = (nneg == 1) & (npos > 1)
    if one_neg.any():
        hh = h[one_neg]
        hn = hh.min(-1, keepdims=True)
        with np.errstate(divide="ignore", invalid="ignore"):
            t = np.where(hh == hn, 1.0, hn / (hn - hh))
        out[one_neg] = 1.0 - t.prod(-1)
    rest = (npos > 1) & (nneg > 1)
    if rest.any():
        hh = h[rest].astype(float).copy()
        m = hh.shape[-1]
        span = np.abs(hh).max(-1, keepdims=True)
        hh = hh + span * 1e-9 * np.arange(m)
        acc = np.zeros(hh.shape[0])
        for i in range(m):
            diff = hh[:, [i]] - hh
            diff[:, i] = 1.0
            term = np.where(hh[:, i] > 0, hh[:, i] ** (m - 1) / diff.prod(-1), 0.0)
            acc += term
        out[rest] = np.clip(acc, 0.0, 1.0)
    return out


class CellMeasure:
    """A measure given as a weighted union of d-simplices placed at integer offsets.

    Each cell is a d-simplex lying in the flat ``{z} x R^d``; ``n = 0`` covers
    an ordinary full-dimensional polytope.
    """

    def __init__(self, n: int, d: int, cells: Sequence[tuple[tuple, tuple, Fraction]]):
        self.n = n
        self.d = d
        self.cells = tuple(cells)
        self.total = sum((c[2] for c in self.cells), Fraction(0))
        m = len(self.cells)
        self.points = np.zeros((m, d + 1, n + d))
        self.weights = np.zeros(m)
        for k, (z, verts, vol) in enumerate(self.cells):
            for j, v in enumerate(verts):
                self.points[k, j, :n] = [float(a) for a in z]
                self.points[k, j, n:] = [float(a) for a in v]
            self.weights[k] = float(vol)
        self.total_float = float(self.total)

    @classmethod
    def from_fibers(cls, fibers: FiberSet, n: int, d: int) -> "CellMeasure":
        cells = []
        for f in fibers:
            if f.vol_d == 0:
                continue
            tri = f.slice.triangulation
            for cell, vol in zip(tri.cells, tri.local_volumes):
                cells.append((f.z, cell.vertices, vol))
        return cls(n, d, cells)

    @classmethod
    def from_polytope(cls, P: Polytope) -> "CellMeasure":
        if not P.is_full_dimensional:
            return cls(0, P.dim, [])
        tri = P.triangulation
        return cls(0, P.dim, [((), cell.vertices, vol) for cell, vol in zip(tri.cells, tri.local_volumes)])

    def exact_mass(self, H: Halfspace) -> Fraction:
        n = self.n
        u_z, u_x = H.normal[:n], H.normal[n:]
        total = Fraction(0)
        cache: dict = {}
        for z, verts, vol in self.cells:
            shift = cache.get(z)
            if shift is None:
                shift = ex.dot(u_z, z) - H.offset
                cache[z] = shift
            h = [ex.dot(u_x, v) + shift for v in verts]
            total += vol * _simplex_fraction_exact(h, verts)
        return total

    def exact_fraction(self, H: Halfspace) -> Fraction:
        if self.total == 0:
            raise ZeroTotalVolume("measure has zero total mass")
        return self.exact_mass(H) / self.total

    def float_fractions(self, x: np.ndarray, directions: np.ndarray, budget: int = 1 << 22) -> np.ndarray:
        """Mass fraction of ``H(u, x)`` for every row ``u`` of ``directions``."""
        if self.total_float == 0:
            raise ZeroTotalVolume("measure has zero total mass")
        directions = np.atleast_2d(np.asarray(directions, dtype=float))
        rel = self.points - np.asarray(x, dtype=float)
        per = max(1, rel.shape[0] * rel.shape[1])
        chunk = max(1, budget // per)
        out = np.empty(directions.shape[0])
        for s in range(0, directions.shape[0], chunk):
            u = directions[s:s + chunk]
            h = np.einsum("mjk,bk->bmj", rel, u)
            frac = simplex_fractions(h)
            out[s:s + chunk] = frac @ self.weights / self.total_float
        return out
