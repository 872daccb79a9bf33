"""Halfspace-mass oracles and lower-bound certificates for the Oertel radius.

The infimum over directions is approximated from above: a finite structured
set of directions is screened in floating point, the best few are refined by
coordinate search, and the winners are re-evaluated in exact arithmetic.
Every reported value is therefore the exact mass of an actual halfspace
through the query point, hence an upper bound on the true infimum there.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.optimize import bisect

from . import _exact as ex
from .errors import EmptyPolytope, ZeroDirection, ZeroTotalVolume
from .mixed_integer import CellMeasure, MixedIntegerBody, total_volume
from .polytope import Halfspace, Polytope, affine_slice, centroid


@dataclass(frozen=True)
class DirectionSearchConfig:
    sphere_samples: int = 2048
    refine_iters: int = 50
    r_max: float | None = None  # None: 1e6 times the body diameter
    seed: int = 0
    coarse_samples: int = 32
    exact_top: int = 8

    def __post_init__(self):
        if self.sphere_samples < 1:
            raise ValueError("sphere_samples must be >= 1")
        if self.r_max is not None and self.r_max < 1:
            raise ValueError("r_max must be >= 1")


def default_config(dim: int, seed: int = 0, **overrides) -> DirectionSearchConfig:
    samples = 2048 if dim <= 4 else 8192
    return DirectionSearchConfig(**{"sphere_samples": samples, "seed": seed, **overrides})


@dataclass(frozen=True)
class CenterpointCertificate:
    point: tuple
    value: Fraction
    worst_direction_found: tuple
    directions_tested: int
    seed: int = 0
    candidates_tried: int = 1

    def to_json(self) -> dict:
        return {
            "point": [ex.fraction_to_json(a) for a in self.point],
            "value": ex.fraction_to_json(self.value),
            "value_float": float(self.value),
            "direction": [float(a) for a in self.worst_direction_found],
            "directions_tested": self.directions_tested,
            "candidates_tried": self.candidates_tried,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class DirectionResult:
    direction: tuple
    value: Fraction
    directions_tested: int


# ---------------------------------------------------------------------------
# mass oracles
# ---------------------------------------------------------------------------


def halfspace_fraction(M: MixedIntegerBody, x: Sequence, u: Sequence) -> Fraction:
    """Exact ``mu(H(u, x) ∩ S)``."""
    u = ex.vec(u)
    if all(a == 0 for a in u):
        raise ZeroDirection("direction must be nonzero")
    cells = M.cells
    if cells.total == 0:
        raise ZeroTotalVolume("S has no full-dimensional fiber")
    return cells.exact_fraction(Halfspace.through(u, ex.vec(x)))


def polytope_halfspace_fraction(P: Polytope, x: Sequence, u: Sequence) -> Fraction:
    """``vol(H(u, x) ∩ P) / vol(P)`` for a full-dimensional polytope."""
    u = ex.vec(u)
    if all(a == 0 for a in u):
        raise ZeroDirection("direction must be nonzero")
    return CellMeasure.from_polytope(P).exact_fraction(Halfspace.through(u, ex.vec(x)))


# ---------------------------------------------------------------------------
# direction sets
# ---------------------------------------------------------------------------


def _unit_rows(a: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(a, axis=1, keepdims=True)
    keep = norms[:, 0] > 0
    return a[keep] / norms[keep]


def _sphere(rng: np.random.Generator, count: int, dim: int) -> np.ndarray:
    if count <= 0 or dim == 0:
        return np.zeros((0, dim))
    return _unit_rows(rng.standard_normal((count, dim)))


def _dedupe(rows: np.ndarray, decimals: int = 12) -> np.ndarray:
    if len(rows) == 0:
        return rows
    _, idx = np.unique(np.round(rows, decimals), axis=0, return_index=True)
    return rows[np.sort(idx)]


def _normals(halfspaces) -> list[np.ndarray]:
    return [np.array([float(a) for a in h.normal]) for h in halfspaces]


def _body_diameter(P: Polytope) -> float:
    pts = ex.as_float_array(P.vertices)
    return float(np.linalg.norm(pts.max(0) - pts.min(0)))


def mixed_integer_directions(M: MixedIntegerBody, cfg: DirectionSearchConfig) -> np.ndarray:
    """Structured direction set for the mixed-integer search."""
    n, d = M.n, M.d
    p = n + d
    rng = np.random.default_rng(cfg.seed)
    blocks = [_sphere(rng, cfg.sphere_samples, p)]
    facet = _normals(M.body.halfspaces)
    fiber_d = []
    for f in M.fiber_set:
        if f.vol_d > 0:
            fiber_d.extend(_normals(f.slice.halfspaces))
    eye_d = list(np.eye(d))
    dvecs = _dedupe(_unit_rows(np.array(fiber_d + eye_d)))
    dvecs = _dedupe(np.vstack([dvecs, -dvecs, _sphere(rng, cfg.coarse_samples, d)]))
    lifted = np.hstack([np.zeros((len(dvecs), n)), dvecs])
    body_normals = _unit_rows(np.array(facet)) if facet else np.zeros((0, p))
    blocks += [body_normals, -body_normals, lifted]
    r = cfg.r_max if cfg.r_max is not None else 1e6 * max(1.0, _body_diameter(M.body))
    comps = []
    for w in itertools.product((-1, 0, 1), repeat=n):
        if not any(w):
            continue
        wv = r * np.array(w, dtype=float)
        comps.append(np.concatenate([wv, np.zeros(d)]))
        for v in dvecs:
            comps.append(np.concatenate([wv, v]))
    if comps:
        blocks.append(np.array(comps))
    return np.vstack([b for b in blocks if len(b)])


def polytope_directions(P: Polytope, cfg: DirectionSearchConfig) -> np.ndarray:
    rng = np.random.default_rng(cfg.seed)
    normals = _unit_rows(np.array(_normals(P.halfspaces)))
    return np.vstack([_sphere(rng, cfg.sphere_samples, P.dim), normals, -normals, np.eye(P.dim), -np.eye(P.dim)])


def _refine(measure: CellMeasure, x: np.ndarray, u: np.ndarray, value: float, n: int,
            iters: int) -> tuple[list[np.ndarray], int]:
    """Coordinate-wise descent with step halving; block scales keep composites intact."""
    p = len(u)
    tested = []
    count = 0
    step = 0.25
    blocks = [slice(0, n), slice(n, p)]
    for _ in range(iters):
        cands = []
        scales = np.zeros(p)
        for b in blocks:
            nb = np.linalg.norm(u[b])
            scales[b] = nb if nb > 0 else 1.0
        for i in range(p):
            for s in (1.0, -1.0):
                c = u.copy()
                c[i] += s * step * scales[i]
                if np.any(c):
                    cands.append(c)
        cands = np.array(cands)
        vals = measure.float_fractions(x, cands)
        count += len(cands)
        k = int(np.argmin(vals))
        if vals[k] < value - 1e-15:
            u, value = cands[k], float(vals[k])
            tested.append(u)
        else:
            step *= 0.5
    return tested, count


def _search(measure: CellMeasure, x: Sequence, directions: np.ndarray, cfg: DirectionSearchConfig,
            n: int) -> DirectionResult:
    if measure.total == 0:
        raise ZeroTotalVolume("measure has zero total mass")
    xe = ex.vec(x)
    xf = np.array([float(a) for a in xe])
    vals = measure.float_fractions(xf, directions)
    tested = len(directions)
    order = np.argsort(vals, kind="stable")
    start = directions[order[0]]
    refined, extra = _refine(measure, xf, start.copy(), float(vals[order[0]]), n, cfg.refine_iters)
    tested += extra
    pool = [directions[i] for i in order[: cfg.exact_top]] + refined[-cfg.exact_top:]
    best_u, best_v = None, None
    seen = set()
    for u in pool:
        key = tuple(u.tolist())
        if key in seen:
            continue
        seen.add(key)
        ue = ex.vec(u.tolist())
        v = measure.exact_fraction(Halfspace.through(ue, xe))
        if best_v is None or v < best_v:
            best_u, best_v = ue, v
    return DirectionResult(best_u, best_v, tested)


def worst_direction(M: MixedIntegerBody, x: Sequence, cfg: DirectionSearchConfig | None = None):
    """Smallest exact halfspace fraction found over the structured direction set.

    Returns ``(u, value)``; ``value`` is an upper bound on the infimum at ``x``.
    """
    res = worst_direction_result(M, x, cfg)
    return res.direction, res.value


def worst_direction_result(M: MixedIntegerBody, x: Sequence, cfg: DirectionSearchConfig | None = None,
                           extra_directions: np.ndarray | None = None) -> DirectionResult:
    cfg = cfg or default_config(M.dim)
    dirs = mixed_integer_directions(M, cfg)
    if extra_directions is not None and len(extra_directions):
        dirs = np.vstack([dirs, extra_directions])
    return _search(M.cells, x, dirs, cfg, M.n)


def polytope_worst_direction(P: Polytope, x: Sequence, cfg: DirectionSearchConfig | None = None) -> DirectionResult:
    """Continuous analogue: minimum of ``vol(H ∩ P)/vol(P)`` over halfspaces through ``x``."""
    cfg = cfg or default_config(P.dim)
    return _search(CellMeasure.from_polytope(P), x, polytope_directions(P, cfg), cfg, 0)


# ---------------------------------------------------------------------------
# candidates and certificates
# ---------------------------------------------------------------------------


def move_into_fiber(M: MixedIntegerBody, z: Sequence[int], x: Sequence) -> tuple:
    """Closest point to ``x`` on the segment from ``x`` to the centroid of ``S_z``."""
    s = affine_slice(M.body, z)
    if s.is_empty:
        raise EmptyPolytope(f"no fiber at {tuple(z)}")
    x = ex.vec(x)
    if s.contains(x):
        return tuple(ex.vec(z)) + x
    c = centroid(s)
    t_min = Fraction(0)
    for h in s.halfspaces:
        at_x = h.value(x)
        at_c = h.value(c)
        if at_x < 0:
            # h(x + t (c - x)) = at_x + t (at_c - at_x) >= 0
            t_min = max(t_min, -at_x / (at_c - at_x))
    y = tuple(a + t_min * (b - a) for a, b in zip(x, c))
    return tuple(ex.vec(z)) + y


def shifted_centroid_point(M: MixedIntegerBody) -> tuple:
    """Integral-projection centroid of the shifted body, placed inside ``S``."""
    from .constructions import shift_centroid_general
    from .errors import BallTooSmall
    from .mixed_integer import chebyshev_ball, projection

    n = M.n
    try:
        ball = chebyshev_ball(projection(M))
        shift, shifted = shift_centroid_general(M.body, ball, n=n)
        g = centroid(shifted)
    except BallTooSmall:
        g = centroid(M.body)
        g = tuple(Fraction(round(a)) for a in g[:n]) + tuple(g[n:])
    z = tuple(int(a) for a in g[:n])
    fibers = M.fiber_set.by_z()
    if z not in fibers or fibers[z].vol_d == 0:
        full = [f.z for f in M.fiber_set if f.vol_d > 0]
        if not full:
            raise ZeroTotalVolume("S has no full-dimensional fiber")
        z = min(full, key=lambda w: (sum((a - b) ** 2 for a, b in zip(w, g[:n])), w))
    return move_into_fiber(M, z, g[n:])


def candidate_centerpoints(M: MixedIntegerBody, max_fibers: int | None = None) -> list[tuple]:
    """Candidate points of ``S`` in the documented order.

    1. the shifted-body centroid (integral projection, moved into its fiber);
    2. the fiber centroid nearest to the continuous centroid of ``C``;
    3. the remaining fiber centroids ``(z, c(S_z))`` by distance of ``z`` to
       that centroid, ties broken lexicographically.
    ``max_fibers`` truncates the fiber list (items 2 and 3).
    """
    if total_volume(M) == 0:
        raise ZeroTotalVolume("S has no full-dimensional fiber")
    n = M.n
    g = centroid(M.body)
    full = [f for f in M.fiber_set if f.vol_d > 0]
    full.sort(key=lambda f: (sum((a - b) ** 2 for a, b in zip(f.z, g[:n])), f.z))
    if max_fibers is not None:
        full = full[:max_fibers]
    out = [shifted_centroid_point(M)]
    for f in full:
        out.append(tuple(Fraction(a) for a in f.z) + centroid(f.slice))
    seen = set()
    unique = []
    for p in out:
        if p not in seen:
            seen.add(p)
            unique.append(p)
    return unique


def oertel_radius_lower_bound(M: MixedIntegerBody, cfg: DirectionSearchConfig | None = None,
                              max_fibers: int | None = 64) -> CenterpointCertificate:
    """Best candidate point and its (sampled) worst halfspace fraction."""
    cfg = cfg or default_config(M.dim)
    dirs = mixed_integer_directions(M, cfg)
    best = None
    tested = 0
    cands = candidate_centerpoints(M, max_fibers=max_fibers)
    for x in cands:
        res = _search(M.cells, x, dirs, cfg, M.n)
        tested += res.directions_tested
        if best is None or res.value > best[1].value:
            best = (x, res)
    x, res = best
    return CenterpointCertificate(x, res.value, res.direction, tested, cfg.seed, len(cands))


# ---------------------------------------------------------------------------
# reference constants
# ---------------------------------------------------------------------------

ALPHA = (44 / (4 - math.e)) ** 2


@dataclass(frozen=True)
class ReferenceBounds:
    n: int
    d: int
    grunbaum: Fraction
    worst_case: Fraction
    helly: Fraction
    conjecture: float
    alpha: float
    ball_threshold: float
    width_threshold: float
    width_threshold_flatness: float

    def as_dict(self) -> dict:
        return {k: (float(v) if isinstance(v, Fraction) else v) for k, v in self.__dict__.items()}


def grunbaum_constant(d: int) -> Fraction:
    return Fraction(d, d + 1) ** d


def reference_bounds(n: int, d: int) -> ReferenceBounds:
    """Constants attached to ``(n, d)``.

    ``width_threshold`` is ``alpha d^2 n^6``; ``width_threshold_flatness`` keeps
    the sharper ``alpha d^2 n^(7/2) Flt(n)`` form with ``Flt(n) <= n^(5/2)``,
    which coincides with it.
    """
    if n < 1 or d < 1:
        raise ValueError("n and d must be positive")
    g = grunbaum_constant(d)
    return ReferenceBounds(
        n=n,
        d=d,
        grunbaum=g,
        worst_case=g / 2**n,
        helly=Fraction(1, 2**n * (d + 1)),
        conjecture=1 / (2**n * math.e),
        alpha=ALPHA,
        ball_threshold=ALPHA * d**2 * n**1.5,
        width_threshold=ALPHA * d**2 * n**6,
        width_threshold_flatness=ALPHA * d**2 * n**3.5 * n**2.5,
    )


def cbar_function(c: float) -> float:
    """``e^(-1/c - 1) + e^(-2/c) - 1``; its root is the large-set constant."""
    return math.exp(-1 / c - 1) + math.exp(-2 / c) - 1


def g_function(c: float) -> float:
    return -2 / c + math.log(math.exp(1 / c - 1) + 1)


def g_derivative(c: float) -> float:
    t = math.exp(1 / c - 1)
    return 2 / c**2 - t / (t + 1) / c**2


def basu_oertel_cbar(tol: float = 1e-10) -> float:
    """Root of :func:`cbar_function` on ``[1, 100]`` by bisection."""
    return bisect(cbar_function, 1.0, 100.0, xtol=tol)


def g_is_increasing(grid: Sequence[float] | None = None) -> bool:
    """Check ``g'(c) > 0`` on a grid of ``c > 0``."""
    grid = np.linspace(0.05, 100, 4000) if grid is None else grid
    return all(g_derivative(float(c)) > 0 for c in grid)
