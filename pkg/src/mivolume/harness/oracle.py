"""Monte-Carlo oracles independent of the exact kernel's triangulation."""

from __future__ import annotations

import math

import numpy as np

from ..polytope import Halfspace, Polytope, bounding_box


def _hrep_arrays(P: Polytope) -> tuple[np.ndarray, np.ndarray]:
    A = np.array([[float(a) for a in h.normal] for h in P.halfspaces])
    b = np.array([float(h.offset) for h in P.halfspaces])
    return A, b


def mc_volume(P: Polytope, samples: int = 100_000, seed: int = 0) -> tuple[float, float]:
    """Rejection sampling in the bounding box; returns ``(estimate, standard error)``."""
    if samples < 100:
        raise ValueError("need at least 100 samples")
    if P.is_empty or not P.is_full_dimensional:
        return 0.0, 0.0
    lo, hi = (np.array([float(a) for a in v]) for v in bounding_box(P))
    box = float(np.prod(hi - lo))
    A, b = _hrep_arrays(P)
    rng = np.random.default_rng(seed)
    hits = 0
    done = 0
    while done < samples:
        m = min(1 << 16, samples - done)
        x = lo + (hi - lo) * rng.random((m, P.dim))
        hits += int(np.all(x @ A.T >= b - 1e-12, axis=1).sum())
        done += m
    p = hits / samples
    return box * p, box * math.sqrt(p * (1 - p) / samples)


def mc_mass_fraction(P: Polytope, H: Halfspace, samples: int = 100_000, seed: int = 0) -> tuple[float, float]:
    """Fraction of ``P`` inside ``H`` by sampling ``P``'s bounding box."""
    lo, hi = (np.array([float(a) for a in v]) for v in bounding_box(P))
    A, b = _hrep_arrays(P)
    u = np.array([float(a) for a in H.normal])
    rng = np.random.default_rng(seed)
    x = lo + (hi - lo) * rng.random((samples, P.dim))
    inside = np.all(x @ A.T >= b - 1e-12, axis=1)
    m = int(inside.sum())
    if m == 0:
        return 0.0, 0.0
    p = float(np.mean(x[inside] @ u >= float(H.offset)))
    return p, math.sqrt(p * (1 - p) / m)


def mc_mu(M, H: Halfspace, samples_per_fiber: int = 2_000, seed: int = 0) -> tuple[float, float]:
    """Mixed-integer measure of ``H`` by sampling each fiber independently."""
    rng = np.random.default_rng(seed)
    n = M.n
    u = np.array([float(a) for a in H.normal])
    total = 0.0
    num = 0.0
    var = 0.0
    for f in M.fiber_set:
        w = float(f.vol_d)
        if w == 0:
            continue
        S = f.slice
        lo, hi = (np.array([float(a) for a in v]) for v in bounding_box(S))
        A, b = _hrep_arrays(S)
        kept = np.zeros((0, M.d))
        while len(kept) < samples_per_fiber:
            x = lo + (hi - lo) * rng.random((4 * samples_per_fiber, M.d))
            kept = np.vstack([kept, x[np.all(x @ A.T >= b - 1e-12, axis=1)]])
        kept = kept[:samples_per_fiber]
        z = np.array([float(a) for a in f.z])
        vals = kept @ u[n:] + z @ u[:n] >= float(H.offset)
        p = float(vals.mean())
        total += w
        num += w * p
        var += w * w * p * (1 - p) / samples_per_fiber
    return num / total, math.sqrt(var) / total
