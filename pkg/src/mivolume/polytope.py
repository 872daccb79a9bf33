"""Exact-arithmetic kernel for rational polytopes.

A :class:`Polytope` carries an H-representation (closed halfspaces
``normal . y >= offset``), a V-representation, or both; the missing one is
derived on demand with a double-description pass in integer arithmetic.
Volumes and centroids come from a lexicographic placing triangulation.

Empty and single-point polytopes are ordinary values.  The 0-dimensional
volume of a point is 1 (counting measure), the volume of the empty set is 0.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from . import _exact as ex
from .errors import DegenerateInput, DimensionMismatch, EmptyPolytope, UnboundedPolytope

MAX_DIM = 8


@dataclass(frozen=True)
class Halfspace:
    """Closed halfspace ``{y : normal . y >= offset}``."""

    normal: tuple
    offset: Fraction

    def __post_init__(self):
        object.__setattr__(self, "normal", ex.vec(self.normal))
        object.__setattr__(self, "offset", ex.to_fraction(self.offset))
        if all(a == 0 for a in self.normal):
            raise ValueError("halfspace normal must be nonzero")

    @classmethod
    def through(cls, u: Sequence, x: Sequence) -> "Halfspace":
        """The halfspace ``H(u, x) = {y : u . (y - x) >= 0}``."""
        u = ex.vec(u)
        return cls(u, ex.dot(u, ex.vec(x)))

    @property
    def dim(self) -> int:
        return len(self.normal)

    def value(self, y: Sequence) -> Fraction:
        """Signed slack ``normal . y - offset``; nonnegative inside."""
        return ex.dot(self.normal, y) - self.offset

    def contains(self, y: Sequence) -> bool:
        return self.value(y) >= 0

    def complement(self) -> "Halfspace":
        """Closed complement (shares the boundary hyperplane)."""
        return Halfspace(tuple(-a for a in self.normal), -self.offset)

    def to_json(self) -> dict:
        return {"normal": [ex.fraction_to_json(a) for a in self.normal],
                "offset": ex.fraction_to_json(self.offset)}

    @classmethod
    def from_json(cls, obj: dict) -> "Halfspace":
        return cls(obj["normal"], obj["offset"])


@dataclass(frozen=True)
class Simplex:
    vertices: tuple

    @property
    def centroid(self) -> tuple:
        k = len(self.vertices)
        return tuple(sum(c) / k for c in zip(*self.vertices))


@dataclass(frozen=True)
class Triangulation:
    """Placing triangulation of a polytope inside its affine hull.

    ``local_volumes`` are measured in the coordinate chart used to build the
    triangulation; multiplying by ``sqrt(jacobian_sq)`` gives intrinsic volume.
    For full-dimensional polytopes ``jacobian_sq == 1``.
    """

    cells: tuple
    local_volumes: tuple
    jacobian_sq: Fraction

    def __len__(self) -> int:
        return len(self.cells)


# ---------------------------------------------------------------------------
# double description
# ---------------------------------------------------------------------------


def _independent_rows(rows: Sequence[Sequence[int]], dim: int) -> list[int]:
    """Indices of a greedy maximal linearly independent subset of ``rows``."""
    chosen: list[int] = []
    echelon: list[tuple[int, list[Fraction]]] = []
    for idx, row in enumerate(rows):
        r = [Fraction(x) for x in row]
        for piv, erow in echelon:
            if r[piv] != 0:
                f = r[piv]
                r = [a - f * b for a, b in zip(r, erow)]
        piv = next((c for c, a in enumerate(r) if a != 0), None)
        if piv is None:
            continue
        inv = 1 / r[piv]
        r = [a * inv for a in r]
        echelon.append((piv, r))
        chosen.append(idx)
        if len(chosen) == dim:
            break
    return chosen


def _extreme_rays(rows: Sequence[Sequence[int]], dim: int):
    """Extreme rays of the pointed cone ``{x : row . x >= 0}``.

    Returns ``None`` when the rows do not have full column rank (the cone has
    a nontrivial lineality space).  Rays are primitive integer tuples.
    """
    rows = [tuple(r) for r in rows]
    chosen = _independent_rows(rows, dim)
    if len(chosen) < dim:
        return None
    m0 = [[Fraction(x) for x in rows[i]] for i in chosen]
    inv = ex.inverse(m0)
    rays: list[tuple[int, ...]] = []
    zeros: list[int] = []
    all_chosen = 0
    for i in chosen:
        all_chosen |= 1 << i
    for j in range(dim):
        col = [inv[r][j] for r in range(dim)]
        rays.append(ex.integer_row(col))
        zeros.append(all_chosen & ~(1 << chosen[j]))
    chosen_set = set(chosen)
    for idx, row in enumerate(rows):
        if idx in chosen_set:
            continue
        bit = 1 << idx
        vals = [sum(a * b for a, b in zip(row, r)) for r in rays]
        pos = [k for k, v in enumerate(vals) if v > 0]
        neg = [k for k, v in enumerate(vals) if v < 0]
        if not neg:
            zeros = [z | bit if v == 0 else z for z, v in zip(zeros, vals)]
            continue
        new_rays: list[tuple[int, ...]] = []
        new_zeros: list[int] = []
        for p in pos:
            zp = zeros[p]
            for q in neg:
                common = zp & zeros[q]
                if common.bit_count() < dim - 2:
                    continue
                adjacent = True
                for k, zk in enumerate(zeros):
                    if k != p and k != q and (zk & common) == common:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                sp, sq = vals[p], vals[q]
                combo = [sp * b - sq * a for a, b in zip(rays[p], rays[q])]
                new_rays.append(ex.primitive(combo))
                new_zeros.append(common | bit)
        keep_rays = []
        keep_zeros = []
        for k, v in enumerate(vals):
            if v > 0:
                keep_rays.append(rays[k])
                keep_zeros.append(zeros[k])
            elif v == 0:
                keep_rays.append(rays[k])
                keep_zeros.append(zeros[k] | bit)
        rays = keep_rays + new_rays
        zeros = keep_zeros + new_zeros
    return rays


def _vertices_from_halfspaces(halfspaces: Sequence[Halfspace], dim: int) -> tuple:
    """Vertex set of a bounded H-polytope; ``()`` when empty."""
    if not halfspaces:
        if dim == 0:
            return ((),)
        raise UnboundedPolytope("no constraints")
    rows = [ex.integer_row(list(h.normal) + [-h.offset]) for h in halfspaces]
    rows.append(tuple([0] * dim + [1]))
    rays = _extreme_rays(rows, dim + 1)
    if rays is None:
        # Lineality: pin it down to decide between empty and unbounded.
        lin = ex.nullspace([list(h.normal) for h in halfspaces], dim)
        extra = []
        for c in lin:
            extra.append(Halfspace(c, 0))
            extra.append(Halfspace(tuple(-a for a in c), 0))
        if _vertices_from_halfspaces(list(halfspaces) + extra, dim):
            raise UnboundedPolytope("polyhedron has a lineality direction")
        return ()
    finite = [r for r in rays if r[-1] > 0]
    if not finite:
        return ()
    if any(r[-1] == 0 for r in rays):
        raise UnboundedPolytope("polyhedron has a recession direction")
    verts = {tuple(Fraction(x, r[-1]) for x in r[:-1]) for r in finite}
    return tuple(sorted(verts))


@dataclass(frozen=True)
class _Chart:
    """Coordinate chart on the affine hull of a point set."""

    base: tuple
    pivots: tuple
    basis: tuple  # rref rows spanning the direction space
    affine_dim: int

    def local(self, y: Sequence) -> tuple:
        return tuple(y[p] for p in self.pivots)

    def lift(self, loc: Sequence) -> tuple:
        out = list(self.base)
        for i, row in enumerate(self.basis):
            t = loc[i] - self.base[self.pivots[i]]
            if t:
                out = [o + t * r for o, r in zip(out, row)]
        return tuple(out)

    @property
    def jacobian_sq(self) -> Fraction:
        q = self.affine_dim
        if q == 0:
            return Fraction(1)
        gram = [[ex.dot(self.basis[i], self.basis[j]) for j in range(q)] for i in range(q)]
        return ex.det(gram)

    def equations(self) -> list[tuple[tuple, Fraction]]:
        """Pairs ``(c, r)`` with ``c . y == r`` cutting out the affine hull."""
        p = len(self.base)
        if self.affine_dim == 0:
            normals = [tuple(Fraction(int(i == j)) for j in range(p)) for i in range(p)]
        else:
            normals = ex.nullspace([list(r) for r in self.basis], p)
        return [(c, ex.dot(c, self.base)) for c in normals]


def _chart(points: Sequence[tuple]) -> _Chart:
    base = points[0]
    diffs = [ex.sub(p, base) for p in points[1:]]
    diffs = [d for d in diffs if any(d)]
    if not diffs:
        return _Chart(base, (), (), 0)
    red, pivots = ex.rref(diffs)
    return _Chart(base, tuple(pivots), tuple(tuple(r) for r in red), len(pivots))


def _hull_halfspaces_fulldim(points: Sequence[tuple], dim: int) -> list[Halfspace]:
    if dim == 1:
        lo = min(p[0] for p in points)
        hi = max(p[0] for p in points)
        return [Halfspace((1,), lo), Halfspace((-1,), -hi)]
    rows = [ex.integer_row(list(p) + [Fraction(-1)]) for p in points]
    rays = _extreme_rays(rows, dim + 1)
    if rays is None:
        raise DegenerateInput("points are not full-dimensional")
    out = []
    for r in rays:
        if all(a == 0 for a in r[:-1]):
            continue
        out.append(Halfspace(tuple(Fraction(a) for a in r[:-1]), Fraction(r[-1])))
    return sorted(out, key=lambda h: (h.normal, h.offset))


def _halfspaces_from_vertices(points: Sequence[tuple], dim: int) -> tuple:
    chart = _chart(points)
    out: list[Halfspace] = []
    for c, r in chart.equations():
        out.append(Halfspace(c, r))
        out.append(Halfspace(tuple(-a for a in c), -r))
    q = chart.affine_dim
    if q > 0:
        local = sorted({chart.local(p) for p in points})
        for h in _hull_halfspaces_fulldim(local, q):
            normal = [Fraction(0)] * dim
            for i, piv in enumerate(chart.pivots):
                normal[piv] = h.normal[i]
            out.append(Halfspace(tuple(normal), h.offset))
    return tuple(out)


def _unit(dim: int, i: int) -> tuple:
    return tuple(Fraction(int(j == i)) for j in range(dim))


# ---------------------------------------------------------------------------
# triangulation
# ---------------------------------------------------------------------------


def _orientation(pts: Sequence[Sequence[int]], face: Sequence[int], x: int) -> int:
    p0 = pts[face[0]]
    m = [[a - b for a, b in zip(pts[i], p0)] for i in face[1:]]
    m.append([a - b for a, b in zip(pts[x], p0)])
    d = ex.det_int(m)
    return (d > 0) - (d < 0)


def _placing_triangulation(local: Sequence[tuple], q: int) -> list[tuple[int, ...]]:
    """Placing triangulation of full-dimensional integer points in R^q."""
    order = sorted(range(len(local)), key=lambda i: local[i])
    pts = local
    # initial simplex: greedy affinely independent prefix in placing order
    start = [order[0]]
    echelon_rows: list[list[Fraction]] = []
    for i in order[1:]:
        cand = [Fraction(a - b) for a, b in zip(pts[i], pts[start[0]])]
        if ex.rank(echelon_rows + [cand]) > len(echelon_rows):
            echelon_rows.append(cand)
            start.append(i)
            if len(start) == q + 1:
                break
    cells = [tuple(sorted(start))]
    boundary: dict[tuple, int] = {}
    first = cells[0]
    for k in range(q + 1):
        face = first[:k] + first[k + 1:]
        boundary[face] = first[k]
    placed = set(start)
    for i in order:
        if i in placed:
            continue
        placed.add(i)
        visible = []
        for face, opp in boundary.items():
            s_new = _orientation(pts, face, i)
            if s_new != 0 and s_new == -_orientation(pts, face, opp):
                visible.append(face)
        for face in visible:
            del boundary[face]
            cells.append(tuple(sorted(face + (i,))))
        for face in visible:
            for k in range(len(face)):
                sub = face[:k] + face[k + 1:]
                newface = tuple(sorted(sub + (i,)))
                if newface in boundary:
                    del boundary[newface]
                else:
                    boundary[newface] = face[k]
    return cells


# ---------------------------------------------------------------------------
# Polytope
# ---------------------------------------------------------------------------


class Polytope:
    """Bounded rational polytope in R^dim (possibly empty or lower-dimensional).

    Treat instances as immutable.  Derived data (the other representation,
    the triangulation) is computed lazily and cached idempotently.
    """

    def __init__(self, dim: int, halfspaces: Iterable | None = None,
                 vertices: Iterable | None = None):
        if dim < 0 or dim > MAX_DIM:
            raise DimensionMismatch(f"ambient dimension {dim} outside 0..{MAX_DIM}")
        if halfspaces is None and vertices is None:
            raise ValueError("need at least one representation")
        self.dim = dim
        self._hrep = None
        self._vrep = None
        if halfspaces is not None:
            hs = tuple(h if isinstance(h, Halfspace) else Halfspace(*h) for h in halfspaces)
            if any(h.dim != dim for h in hs):
                raise DimensionMismatch("halfspace dimension differs from ambient dimension")
            self._hrep = hs
        if vertices is not None:
            vs = tuple(sorted({ex.vec(v) for v in vertices}))
            if any(len(v) != dim for v in vs):
                raise DimensionMismatch("vertex dimension differs from ambient dimension")
            self._vrep = vs

    # constructors ---------------------------------------------------------

    @classmethod
    def from_vertices(cls, points: Iterable) -> "Polytope":
        pts = [ex.vec(p) for p in points]
        if not pts:
            raise ValueError("use Polytope.empty(dim) for the empty polytope")
        return cls(len(pts[0]), vertices=pts)

    @classmethod
    def from_halfspaces(cls, dim: int, halfspaces: Iterable) -> "Polytope":
        return cls(dim, halfspaces=halfspaces)

    @classmethod
    def empty(cls, dim: int) -> "Polytope":
        return cls(dim, vertices=())

    @classmethod
    def box(cls, lower: Sequence, upper: Sequence) -> "Polytope":
        lower, upper = ex.vec(lower), ex.vec(upper)
        p = len(lower)
        hs = []
        for i in range(p):
            hs.append(Halfspace(_unit(p, i), lower[i]))
            hs.append(Halfspace(tuple(-a for a in _unit(p, i)), -upper[i]))
        verts = list(itertools.product(*zip(lower, upper)))
        return cls(p, halfspaces=hs, vertices=verts)

    @classmethod
    def cube(cls, dim: int, side=1) -> "Polytope":
        return cls.box([0] * dim, [side] * dim)

    @classmethod
    def standard_simplex(cls, dim: int, scale=1) -> "Polytope":
        s = ex.to_fraction(scale)
        verts = [tuple(Fraction(0) for _ in range(dim))]
        verts += [tuple(s * a for a in _unit(dim, i)) for i in range(dim)]
        return cls.from_vertices(verts)

    # representations ------------------------------------------------------

    @cached_property
    def vertices(self) -> tuple:
        if self._vrep is not None:
            return self._vrep
        return _vertices_from_halfspaces(self._hrep, self.dim)

    @cached_property
    def halfspaces(self) -> tuple:
        if self._hrep is not None:
            return self._hrep
        if not self._vrep:
            e0 = _unit(self.dim, 0) if self.dim else ()
            return (Halfspace(e0, 1), Halfspace(tuple(-a for a in e0), 0))
        return _halfspaces_from_vertices(self._vrep, self.dim)

    @property
    def has_hrep(self) -> bool:
        return self._hrep is not None

    @property
    def has_vrep(self) -> bool:
        return self._vrep is not None

    @property
    def is_empty(self) -> bool:
        return not self.vertices

    @cached_property
    def chart(self) -> _Chart:
        if self.is_empty:
            raise EmptyPolytope("empty polytope has no affine hull")
        return _chart(list(self.vertices))

    @property
    def affine_dim(self) -> int:
        if self.is_empty:
            return -1
        return self.chart.affine_dim

    @property
    def is_full_dimensional(self) -> bool:
        return self.affine_dim == self.dim

    @cached_property
    def triangulation(self) -> Triangulation:
        if self.is_empty:
            return Triangulation((), (), Fraction(1))
        chart = self.chart
        q = chart.affine_dim
        verts = self.vertices
        if q == 0:
            return Triangulation((Simplex((verts[0],)),), (Fraction(1),), Fraction(1))
        local = [chart.local(v) for v in verts]
        scale = ex.lcm_of_denominators(itertools.chain.from_iterable(local))
        ipts = [tuple(int(a * scale) for a in p) for p in local]
        cells = _placing_triangulation(ipts, q)
        fact = math.factorial(q)
        simplices = []
        vols = []
        for cell in cells:
            p0 = ipts[cell[0]]
            m = [[a - b for a, b in zip(ipts[i], p0)] for i in cell[1:]]
            vols.append(Fraction(abs(ex.det_int(m)), fact * scale ** q))
            simplices.append(Simplex(tuple(verts[i] for i in cell)))
        return Triangulation(tuple(simplices), tuple(vols), chart.jacobian_sq)

    # predicates -------------------------------------------------------------

    def contains(self, y: Sequence) -> bool:
        y = ex.vec(y)
        if self.is_empty:
            return False
        return all(h.contains(y) for h in self.halfspaces)

    def __repr__(self) -> str:
        reps = []
        if self._hrep is not None:
            reps.append(f"{len(self._hrep)} halfspaces")
        if self._vrep is not None:
            reps.append(f"{len(self._vrep)} vertices")
        return f"Polytope(dim={self.dim}, {', '.join(reps)})"

    # serialisation ------------------------------------------------------------

    def to_json(self) -> dict:
        out = {"dim": self.dim}
        if self._hrep is not None:
            out["hrep"] = [h.to_json() for h in self._hrep]
        out["vrep"] = [[ex.fraction_to_json(a) for a in v] for v in self.vertices]
        return out

    @classmethod
    def from_json(cls, obj) -> "Polytope":
        if isinstance(obj, str):
            obj = json.loads(obj)
        dim = int(obj["dim"])
        hrep = obj.get("hrep")
        vrep = obj.get("vrep")
        hs = None if hrep is None else [Halfspace.from_json(h) for h in hrep]
        return cls(dim, halfspaces=hs, vertices=vrep)


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------


def vertex_enumeration(P: Polytope) -> Polytope:
    """Both representations of an H-polytope.  Raises on empty or unbounded input."""
    verts = _vertices_from_halfspaces(P.halfspaces, P.dim)
    if not verts:
        raise EmptyPolytope("constraints are infeasible")
    return Polytope(P.dim, halfspaces=P.halfspaces, vertices=verts)


def facet_enumeration(P: Polytope) -> Polytope:
    """Irredundant H-representation of a V-polytope (plus equations if flat)."""
    verts = P.vertices
    if not verts:
        raise EmptyPolytope("no vertices")
    if len(verts) == 1:
        raise DegenerateInput("all points coincide")
    return Polytope(P.dim, halfspaces=_halfspaces_from_vertices(list(verts), P.dim),
                    vertices=_extreme_points(P))


def _extreme_points(P: Polytope) -> tuple:
    """Drop non-extreme input points of a V-representation."""
    verts = P.vertices
    if len(verts) <= 2 or P.has_hrep:
        return verts
    return _vertices_from_halfspaces(_halfspaces_from_vertices(list(verts), P.dim), P.dim)


def volume(P: Polytope):
    """Intrinsic volume in the dimension of the affine hull of ``P``.

    Exact Fraction whenever the chart Jacobian is a rational square (always
    the case for full-dimensional input); otherwise a float.
    """
    if P.is_empty:
        return Fraction(0)
    tri = P.triangulation
    local = sum(tri.local_volumes, Fraction(0))
    if tri.jacobian_sq == 1:
        return local
    lo, hi = ex.sqrt_bounds(tri.jacobian_sq)
    if lo == hi:
        return local * lo
    return float(local) * math.sqrt(float(tri.jacobian_sq))


def full_volume(P: Polytope) -> Fraction:
    """Lebesgue volume in the ambient dimension (0 for flat sets)."""
    if P.is_empty or not P.is_full_dimensional:
        return Fraction(0)
    return sum(P.triangulation.local_volumes, Fraction(0))


def centroid(P: Polytope) -> tuple:
    if P.is_empty:
        raise EmptyPolytope("centroid of the empty set")
    tri = P.triangulation
    total = sum(tri.local_volumes, Fraction(0))
    acc = [Fraction(0)] * P.dim
    for cell, w in zip(tri.cells, tri.local_volumes):
        c = cell.centroid
        acc = [a + w * b for a, b in zip(acc, c)]
    return tuple(a / total for a in acc)


def intersect_halfspace(P: Polytope, H: Halfspace) -> Polytope:
    if H.dim != P.dim:
        raise DimensionMismatch("halfspace and polytope dimensions differ")
    if P.is_empty:
        return Polytope.empty(P.dim)
    if P.has_vrep and all(H.contains(v) for v in P.vertices):
        return P
    hs = tuple(P.halfspaces) + (H,)
    verts = _vertices_from_halfspaces(hs, P.dim)
    return Polytope(P.dim, halfspaces=hs, vertices=verts)


def intersect(P: Polytope, Q: Polytope) -> Polytope:
    if P.dim != Q.dim:
        raise DimensionMismatch("dimensions differ")
    if P.is_empty or Q.is_empty:
        return Polytope.empty(P.dim)
    hs = tuple(P.halfspaces) + tuple(Q.halfspaces)
    return Polytope(P.dim, halfspaces=hs, vertices=_vertices_from_halfspaces(hs, P.dim))


def affine_slice(P: Polytope, z: Sequence) -> Polytope:
    """``P ∩ ({z} x R^d)`` expressed in the trailing ``d`` coordinates."""
    z = ex.vec(z)
    n = len(z)
    if n > P.dim:
        raise DimensionMismatch("slice point longer than ambient dimension")
    d = P.dim - n
    if P.is_empty:
        return Polytope.empty(d)
    rows = []
    for h in P.halfspaces:
        rhs = h.offset - ex.dot(h.normal[:n], z)
        a = h.normal[n:]
        if all(x == 0 for x in a):
            if rhs > 0:
                return Polytope.empty(d)
            continue
        rows.append(Halfspace(a, rhs))
    if d == 0:
        return Polytope(0, vertices=[()])
    if d == 1:
        lo, hi = None, None
        for h in rows:
            bound = h.offset / h.normal[0]
            if h.normal[0] > 0:
                lo = bound if lo is None else max(lo, bound)
            else:
                hi = bound if hi is None else min(hi, bound)
        if lo is None or hi is None:
            raise UnboundedPolytope("slice is unbounded")
        if lo > hi:
            return Polytope.empty(1)
        verts = [(lo,), (hi,)] if lo != hi else [(lo,)]
        return Polytope(1, halfspaces=[Halfspace((1,), lo), Halfspace((-1,), -hi)], vertices=verts)
    verts = _vertices_from_halfspaces(rows, d)
    return Polytope(d, halfspaces=rows, vertices=verts)


def scale(P: Polytope, lam, about: Sequence | None = None) -> Polytope:
    """Image of ``P`` under ``y -> about + lam (y - about)``."""
    lam = ex.to_fraction(lam)
    if lam <= 0:
        raise ValueError("scale factor must be positive")
    about = ex.vec(about) if about is not None else tuple(Fraction(0) for _ in range(P.dim))
    hs = vs = None
    if P.has_hrep:
        hs = [Halfspace(h.normal, lam * h.offset + (1 - lam) * ex.dot(h.normal, about)) for h in P._hrep]
    if P.has_vrep or not P.has_hrep:
        vs = [tuple(c + lam * (a - c) for a, c in zip(v, about)) for v in P.vertices]
    return Polytope(P.dim, halfspaces=hs, vertices=vs)


def translate(P: Polytope, t: Sequence) -> Polytope:
    t = ex.vec(t)
    hs = vs = None
    if P.has_hrep:
        hs = [Halfspace(h.normal, h.offset + ex.dot(h.normal, t)) for h in P._hrep]
    if P.has_vrep or not P.has_hrep:
        vs = [ex.add(v, t) for v in P.vertices]
    return Polytope(P.dim, halfspaces=hs, vertices=vs)


def linear_map(P: Polytope, matrix: Sequence[Sequence], inverse: Sequence[Sequence] | None = None) -> Polytope:
    """Image under an invertible linear map ``y -> M y``."""
    m = [ex.vec(r) for r in matrix]
    inv = [ex.vec(r) for r in inverse] if inverse is not None else ex.inverse(m)
    p = P.dim
    vs = [tuple(ex.dot(row, v) for row in m) for v in P.vertices]
    hs = None
    if P.has_hrep:
        # a . x >= b with x = M^-1 y  ->  (M^-T a) . y >= b
        hs = [Halfspace(tuple(sum(inv[i][j] * h.normal[i] for i in range(p)) for j in range(p)), h.offset)
              for h in P._hrep]
    return Polytope(p, halfspaces=hs, vertices=vs)


def project(P: Polytope, n: int) -> Polytope:
    """Orthogonal projection onto the first ``n`` coordinates."""
    if n > P.dim:
        raise DimensionMismatch("cannot project onto more coordinates than the ambient dimension")
    if P.is_empty:
        return Polytope.empty(n)
    return Polytope(n, vertices={v[:n] for v in P.vertices})


def convex_hull(points: Iterable) -> Polytope:
    return Polytope.from_vertices(points)


def same_set(P: Polytope, Q: Polytope) -> bool:
    """Mutual containment of vertex sets."""
    if P.dim != Q.dim:
        return False
    if P.is_empty or Q.is_empty:
        return P.is_empty and Q.is_empty
    return all(Q.contains(v) for v in P.vertices) and all(P.contains(v) for v in Q.vertices)


def bounding_box(P: Polytope) -> tuple[tuple, tuple]:
    verts = P.vertices
    if not verts:
        raise EmptyPolytope("bounding box of the empty set")
    lo = tuple(min(c) for c in zip(*verts))
    hi = tuple(max(c) for c in zip(*verts))
    return lo, hi


def load_polytope(path) -> Polytope:
    with open(path) as fh:
        return Polytope.from_json(json.load(fh))
