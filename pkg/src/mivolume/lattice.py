"""Lattice width, flatness bound and unimodular rounding of the projection."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import _exact as ex
from .errors import DegenerateInput, DimensionMismatch, ZeroDirection
from .mixed_integer import MixedIntegerBody, chebyshev_ball
from .polytope import Halfspace, Polytope, linear_map


@dataclass(frozen=True)
class UnimodularMap:
    matrix: tuple  # rows of integers
    inverse: tuple

    def __post_init__(self):
        n = len(self.matrix)
        prod = [[sum(self.matrix[i][k] * self.inverse[k][j] for k in range(n)) for j in range(n)]
                for i in range(n)]
        if prod != [[int(i == j) for j in range(n)] for i in range(n)]:
            raise ValueError("matrix and inverse do not multiply to the identity")

    @property
    def n(self) -> int:
        return len(self.matrix)

    @classmethod
    def identity(cls, n: int) -> "UnimodularMap":
        eye = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
        return cls(eye, eye)

    @classmethod
    def from_matrix(cls, rows: Sequence[Sequence[int]]) -> "UnimodularMap":
        rows = tuple(tuple(int(a) for a in r) for r in rows)
        if abs(ex.det_int(rows)) != 1:
            raise ValueError("matrix is not unimodular")
        inv = ex.inverse([[Fraction(a) for a in r] for r in rows])
        return cls(rows, tuple(tuple(int(a) for a in r) for r in inv))

    def apply(self, z: Sequence) -> tuple:
        return tuple(ex.dot(r, z) for r in self.matrix)

    def to_json(self) -> dict:
        return {"matrix": [list(r) for r in self.matrix], "inverse": [list(r) for r in self.inverse]}


@dataclass(frozen=True)
class WidthResult:
    width: Fraction
    direction: tuple
    search_bound: int

    def to_json(self) -> dict:
        return {"width": ex.fraction_to_json(self.width), "width_float": float(self.width),
                "direction": list(self.direction), "search_bound": self.search_bound}


def width_along(D: Polytope, u: Sequence[int]) -> Fraction:
    if not any(u):
        raise ZeroDirection("direction must be nonzero")
    vals = [ex.dot(u, v) for v in D.vertices]
    return max(vals) - min(vals)


def _lex_positive(u: Sequence[int]) -> bool:
    for a in u:
        if a:
            return a > 0
    return False


def directions(n: int, B: int):
    """Nonzero integer vectors with sup-norm <= B, one of each ``±u`` pair."""
    for u in itertools.product(range(-B, B + 1), repeat=n):
        if _lex_positive(u):
            yield u


def lattice_width(D: Polytope, B: int = 1) -> WidthResult:
    """Smallest width over the searched directions; an upper bound on the lattice width."""
    if B < 1:
        raise ValueError("search bound must be >= 1")
    if D.is_empty:
        raise DegenerateInput("empty polytope")
    n = D.dim
    m = ex.lcm_of_denominators(a for v in D.vertices for a in v)
    V = [[int(a * m) for a in v] for v in D.vertices]
    best, best_u = None, None
    for u in directions(n, B):
        vals = [sum(x * y for x, y in zip(u, v)) for v in V]
        w = max(vals) - min(vals)
        if best is None or w < best:
            best, best_u = w, u
    return WidthResult(Fraction(best, m), tuple(best_u), B)


def flatness_bound(n: int) -> Fraction:
    """``n^(5/2)``, exact for perfect squares and rounded up otherwise."""
    if n < 1:
        raise ValueError("n must be positive")
    return n * n * ex.sqrt_upper(n)


def _minors_gcd(rows: Sequence[Sequence[int]]) -> int:
    j = len(rows)
    n = len(rows[0])
    g = 0
    for cols in itertools.combinations(range(n), j):
        g = math.gcd(g, ex.det_int([[r[c] for c in cols] for r in rows]))
        if g == 1:
            return 1
    return g


@dataclass(frozen=True)
class EnlargeResult:
    L: UnimodularMap
    image: Polytope
    achieved_radius: Fraction
    target: Fraction  # width / (n^2 n^(5/2)) with the rounded-up flatness bound
    width: WidthResult
    met_target: bool
    budget_exceeded: bool = False

    def __iter__(self):
        return iter((self.L, self.image, self.achieved_radius))

    def to_json(self) -> dict:
        return {
            "map": self.L.to_json(),
            "achieved_radius": float(self.achieved_radius),
            "target": float(self.target),
            "width": self.width.to_json(),
            "met_target": self.met_target,
            "budget_exceeded": self.budget_exceeded,
        }


def _greedy_basis(D: Polytope, search: int, budget: int):
    """Rows chosen one by one by smallest width, keeping the row set primitive.

    Directions with sup-norm up to ``search`` are scanned; the bound grows up
    to ``budget`` only when no primitive extension exists below it.
    """
    n = D.dim
    m = ex.lcm_of_denominators(a for v in D.vertices for a in v)
    V = [[int(a * m) for a in v] for v in D.vertices]
    rows: list[tuple] = []
    for _ in range(n):
        found = None
        for B in range(search, budget + 1):
            best = None
            for u in directions(n, B):
                if _minors_gcd(rows + [u]) != 1:
                    continue
                vals = [sum(x * y for x, y in zip(u, v)) for v in V]
                w = max(vals) - min(vals)
                if best is None or w < best[0]:
                    best = (w, u)
            if best is not None:
                found = best[1]
                break
        if found is None:
            return None
        rows.append(found)
    return rows


def unimodular_enlarge(K: Polytope, budget: int = 4, width_bound: int = 2, search: int = 2) -> EnlargeResult:
    """Greedy unimodular rounding; keeps whichever of it and the identity has the larger inradius."""
    if not K.is_full_dimensional:
        raise DegenerateInput("K must be full-dimensional")
    n = K.dim
    width = lattice_width(K, width_bound)
    target = width.width / (n * n * flatness_bound(n))
    cands = [UnimodularMap.identity(n)]
    rows = _greedy_basis(K, min(search, budget), budget)
    exceeded = rows is None
    if rows is not None:
        cands.append(UnimodularMap.from_matrix(rows))
    best = None
    for L in cands:
        img = linear_map(K, [list(r) for r in L.matrix], [list(r) for r in L.inverse])
        _, r = chebyshev_ball(img)
        if best is None or r > best[2]:
            best = (L, img, r)
    L, img, r = best
    return EnlargeResult(L, img, r, target, width, r >= target, exceeded)


def lift_matrix(L: UnimodularMap, d: int) -> tuple[list, list]:
    n = L.n

    def block(A):
        out = [[0] * (n + d) for _ in range(n + d)]
        for i in range(n):
            for j in range(n):
                out[i][j] = A[i][j]
        for i in range(d):
            out[n + i][n + i] = 1
        return out

    return block(L.matrix), block(L.inverse)


def lift_and_apply(M: MixedIntegerBody, L: UnimodularMap) -> MixedIntegerBody:
    """Apply ``(L, Id)`` to ``C``; the fiber at ``z`` moves to ``L z`` unchanged."""
    if L.n != M.n:
        raise DimensionMismatch(f"map acts on R^{L.n}, body has n = {M.n}")
    A, Ainv = lift_matrix(L, M.d)
    return MixedIntegerBody(linear_map(M.body, A, Ainv), M.n)


def transform_halfspace(H: Halfspace, L: UnimodularMap, d: int) -> Halfspace:
    """Image of ``H`` under ``(L, Id)``: normals map by the inverse transpose."""
    _, Ainv = lift_matrix(L, d)
    p = len(Ainv)
    normal = tuple(sum(Ainv[k][i] * H.normal[k] for k in range(p)) for i in range(p))
    return Halfspace(ex.vec(normal), H.offset)
