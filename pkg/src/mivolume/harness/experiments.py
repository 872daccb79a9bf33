"""End-to-end checks of the main results and the per-lemma verification suites."""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from ..centerpoint import (ALPHA, DirectionSearchConfig, default_config, grunbaum_constant,
                           move_into_fiber, polytope_worst_direction, shifted_centroid_point,
                           worst_direction_result)
from ..constructions import (LemmaCheckResult, check_all_faces, check_centroid_cut,
                             check_centroid_shift, check_cone_sandwich, check_slice_box,
                             check_slice_total, normalize_n1, shift_centroid_n1, thales_check)
from ..errors import BallTooSmall, GeometryError, HypothesisNotMet
from ..lattice import lattice_width, lift_and_apply, unimodular_enlarge
from ..mixed_integer import MixedIntegerBody, chebyshev_ball, projection
from ..polytope import Polytope, centroid, translate
from .families import InstanceFamily, generate_instance, random_polytope

INV_E = 1 / math.e


@dataclass(frozen=True)
class ExperimentRecord:
    instance_id: str
    n: int
    d: int
    k_or_width: float
    quantity_name: str
    measured: float
    paper_bound: float | None
    satisfied: bool | None  # None: out of hypothesis or informational
    runtime_ms: float | None = None
    seed: int = 0

    FIELDS = ("instance_id", "n", "d", "k_or_width", "quantity_name", "measured",
              "paper_bound", "satisfied", "runtime_ms", "seed")

    def row(self) -> dict:
        return {
            "instance_id": self.instance_id,
            "n": self.n,
            "d": self.d,
            "k_or_width": _num(self.k_or_width),
            "quantity_name": self.quantity_name,
            "measured": _num(self.measured),
            "paper_bound": _num(self.paper_bound),
            "satisfied": _flag(self.satisfied),
            "runtime_ms": "" if self.runtime_ms is None else f"{self.runtime_ms:.1f}",
            "seed": self.seed,
        }

    @classmethod
    def from_row(cls, row: dict) -> "ExperimentRecord":
        def opt(v):
            return None if v in ("", None) else float(v)

        sat = {"yes": True, "no": False, "n/a": None}[str(row["satisfied"])]
        return cls(row["instance_id"], int(row["n"]), int(row["d"]), float(row["k_or_width"]),
                   row["quantity_name"], float(row["measured"]), opt(row["paper_bound"]), sat,
                   opt(row.get("runtime_ms")), int(row.get("seed") or 0))


def _num(v) -> str:
    if v is None:
        return ""
    return repr(float(v))


def _flag(v: bool | None) -> str:
    return "n/a" if v is None else ("yes" if v else "no")


# ---------------------------------------------------------------------------
# theorem checks
# ---------------------------------------------------------------------------


def theorem_n1_point(M: MixedIntegerBody) -> tuple[MixedIntegerBody, tuple, int, bool]:
    """Centroid of the one-sided cut body, moved into its fiber if rounding was needed."""
    N, _ = normalize_n1(M)
    zs = [f.z[0] for f in N.fiber_set]
    k = max(zs) - min(zs)
    try:
        cut = shift_centroid_n1(N.body)
        g = centroid(cut.body)
        ok = True
    except (HypothesisNotMet, GeometryError):
        g = centroid(N.body)
        ok = False
    z = math.floor(g[0] + Fraction(1, 2))
    full = [f.z[0] for f in N.fiber_set if f.vol_d > 0]
    if z not in full:
        z = min(full, key=lambda w: (abs(w - g[0]), w))
    return N, move_into_fiber(N, (z,), g[1:]), k, ok


def check_theorem_n1(M: MixedIntegerBody, cfg: DirectionSearchConfig | None = None,
                     instance_id: str = "", seed: int = 0, timings: bool = False) -> list[ExperimentRecord]:
    t0 = time.perf_counter()
    d = M.d
    cfg = cfg or default_config(M.dim, seed=seed)
    N, x, k, constructed = theorem_n1_point(M)
    res = worst_direction_result(N, x, cfg)
    f = float(res.value)
    ms = (time.perf_counter() - t0) * 1000 if timings else None
    target = float(grunbaum_constant(d)) / 2
    applicable = k >= ALPHA * d
    shortfall = max(0.0, INV_E - f)

    def rec(name, measured, bound, sat):
        return ExperimentRecord(instance_id, 1, d, k, name, measured, bound, sat, ms, seed)

    return [
        rec("worst_fraction", f, INV_E, None),
        rec("slack_constant_a", shortfall * k / d, None, None),
        rec("half_grunbaum_target", f, target, (f >= target) if applicable else None),
        rec("conjecture_floor", f, INV_E / 2, (f >= INV_E / 2) if applicable else None),
        rec("point_constructed", 1.0 if constructed else 0.0, None, None),
    ]


def theorem_general_point(M: MixedIntegerBody) -> tuple[tuple, Fraction]:
    _, r = chebyshev_ball(projection(M))
    return shifted_centroid_point(M), r


def check_theorem_general(M: MixedIntegerBody, cfg: DirectionSearchConfig | None = None,
                          instance_id: str = "", seed: int = 0, timings: bool = False,
                          label: str = "") -> list[ExperimentRecord]:
    t0 = time.perf_counter()
    n, d = M.n, M.d
    cfg = cfg or default_config(M.dim, seed=seed)
    x, k = theorem_general_point(M)
    res = worst_direction_result(M, x, cfg)
    f = float(res.value)
    ms = (time.perf_counter() - t0) * 1000 if timings else None
    kf = float(k)
    scale = d * n**0.75 / math.sqrt(kf) if kf > 0 else math.inf
    bound = INV_E - 11 * scale
    target = float(grunbaum_constant(d)) / 2**n
    applicable = kf >= ALPHA * d * d * n**1.5
    shortfall = max(0.0, INV_E - f)

    def rec(name, measured, b, sat):
        return ExperimentRecord(instance_id, n, d, kf, label + name, measured, b, sat, ms, seed)

    return [
        rec("worst_fraction", f, bound, f >= bound),
        rec("slack_constant_b", shortfall / scale if scale else 0.0, None, None),
        rec("oertel_target", f, target, (f >= target) if applicable else None),
        rec("helly_floor", f, 1 / (2**n * (d + 1)), None),
    ]


def check_corollary_width(M: MixedIntegerBody, cfg: DirectionSearchConfig | None = None,
                          instance_id: str = "", seed: int = 0, timings: bool = False,
                          width_bound: int = 2) -> list[ExperimentRecord]:
    t0 = time.perf_counter()
    n, d = M.n, M.d
    proj = projection(M)
    width = lattice_width(proj, width_bound)
    enl = unimodular_enlarge(proj, width_bound=width_bound)
    image = lift_and_apply(M, enl.L)
    general = check_theorem_general(image, cfg, instance_id, seed, timings, label="image_")
    f = general[0].measured
    w = float(width.width)
    ms = (time.perf_counter() - t0) * 1000 if timings else None
    bound = INV_E - 11 * d * n**3 / math.sqrt(w) if w > 0 else -math.inf
    target = float(grunbaum_constant(d)) / 2**n
    applicable = w >= ALPHA * d * d * n**6

    def rec(name, measured, b, sat):
        return ExperimentRecord(instance_id, n, d, w, name, measured, b, sat, ms, seed)

    return general + [
        rec("lattice_width", w, None, None),
        rec("enlarged_radius", float(enl.achieved_radius), float(enl.target), enl.met_target),
        rec("width_bound", f, bound, f >= bound),
        rec("width_oertel_target", f, target, (f >= target) if applicable else None),
    ]


# ---------------------------------------------------------------------------
# sweeps over k
# ---------------------------------------------------------------------------


def _sweep_point(family: str, params: dict, k: int, kind: str, seed: int, timings: bool,
                 cfg_overrides: dict | None) -> list[ExperimentRecord]:
    check = check_theorem_n1 if kind == "n1" else check_theorem_general
    fam = InstanceFamily(family, {**params, "k": k, "seed": seed})
    M = generate_instance(fam)
    cfg = default_config(M.dim, seed=seed, **(cfg_overrides or {}))
    return check(M, cfg, fam.instance_id(), seed, timings)


def sweep(family: str, params: dict, k_values: Sequence[int], kind: str,
          cfg_overrides: dict | None = None, seed: int = 0, timings: bool = False,
          jobs: int = 1) -> list[ExperimentRecord]:
    """Run a theorem check for each ``k`` and append the fitted slack constant.

    ``kind`` is ``"n1"`` (fits ``a`` in ``1/e - a d/k``, bound 10) or
    ``"general"`` (fits ``b`` in ``b d n^(3/4)/sqrt(k)``, bound 20).
    The fitted value is the largest per-instance constant; the shortfall
    ``max(0, 1/e - f)`` must also be non-increasing in ``k``.
    With ``jobs > 1`` the instances run in worker processes; results are
    collected in ``k`` order, so the output does not depend on scheduling.
    """
    if kind not in ("n1", "general"):
        raise ValueError(f"unknown sweep kind {kind!r}")
    const = "slack_constant_a" if kind == "n1" else "slack_constant_b"
    limit = 10.0 if kind == "n1" else 20.0
    args = [(family, params, k, kind, seed, timings, cfg_overrides) for k in k_values]
    if jobs > 1 and len(args) > 1:
        with ProcessPoolExecutor(max_workers=min(jobs, len(args))) as pool:
            per_k = list(pool.map(_sweep_point, *zip(*args)))
    else:
        per_k = [_sweep_point(*a) for a in args]
    records = []
    consts, shortfalls = [], []
    n = d = 0
    for recs in per_k:
        records += recs
        by = {r.quantity_name: r for r in recs}
        n, d = recs[0].n, recs[0].d
        consts.append(by[const].measured)
        shortfalls.append(max(0.0, INV_E - by["worst_fraction"].measured))
    sweep_id = InstanceFamily(family, {**params, "seed": seed}).instance_id() + "[sweep]"
    fitted = max(consts) if consts else 0.0
    monotone = all(b <= a + 1e-12 for a, b in zip(shortfalls, shortfalls[1:]))
    kmax = float(max(k_values)) if k_values else 0.0
    records.append(ExperimentRecord(sweep_id, n, d, kmax, "fitted_" + const[-1], fitted, limit,
                                    fitted <= limit, None, seed))
    records.append(ExperimentRecord(sweep_id, n, d, kmax, "monotone_shortfall", float(monotone), 1.0,
                                    monotone, None, seed))
    return records


# ---------------------------------------------------------------------------
# continuous Grünbaum check
# ---------------------------------------------------------------------------


def grunbaum_at_centroid(P: Polytope, cfg: DirectionSearchConfig | None = None) -> tuple[Fraction, Fraction]:
    """(sampled minimum halfspace fraction at the centroid, ``(d/(d+1))^d``)."""
    cfg = cfg or default_config(P.dim)
    res = polytope_worst_direction(P, centroid(P), cfg)
    return res.value, grunbaum_constant(P.dim)


# ---------------------------------------------------------------------------
# per-lemma verification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VerifyRow:
    instance_id: str
    params: str
    measured: Fraction
    bound: Fraction | None
    upper: Fraction | None
    satisfied: bool | None
    seed: int
    note: str = ""

    FIELDS = ("instance_id", "params", "measured", "bound", "satisfied", "seed", "note")

    def row(self) -> dict:
        bound = "" if self.bound is None else repr(float(self.bound))
        if self.upper is not None:
            bound = f"{bound}..{float(self.upper)!r}"
        return {
            "instance_id": self.instance_id,
            "params": self.params,
            "measured": repr(float(self.measured)),
            "bound": bound,
            "satisfied": _flag(self.satisfied),
            "seed": self.seed,
            "note": self.note,
        }


LEMMAS = ("3.1", "3.2", "3.3", "4.1", "4.2", "4.3", "4.4")


def _default_family(lemma: str, i: int, seed: int) -> InstanceFamily:
    rng = np.random.default_rng([seed, i])
    if lemma in ("3.1", "3.2", "3.3"):
        d = 1 + int(rng.integers(0, 2))
        k = int(rng.integers(4, 13)) if lemma != "3.2" else int(rng.integers(8, 17))
        return InstanceFamily("random_hull", {"n": 1, "d": d, "k": k, "seed": seed + i})
    if lemma == "4.2":
        n = 1 + int(rng.integers(0, 2))
        return InstanceFamily("ball_prism", {"n": n, "d": 1, "k": int(rng.integers(2, 7)), "seed": seed + i,
                                             "shape": "simplex" if i % 2 else "box"})
    if lemma == "4.3":
        return InstanceFamily("ball_prism", {"n": 1, "d": 1, "k": int(rng.integers(26, 41)), "seed": seed + i,
                                             "shape": "simplex" if i % 2 else "box"})
    if lemma == "4.4":
        n = 1 + int(rng.integers(0, 2))
        return InstanceFamily("ball_prism", {"n": n, "d": 1, "k": int(rng.integers(n + 2, n + 6)),
                                             "seed": seed + i, "shape": "simplex" if i % 2 else "box"})
    raise ValueError(lemma)


def _params_text(fam: InstanceFamily) -> str:
    return ";".join(f"{k}={v}" for k, v in sorted(fam.params.items()))


def _from_check(fam: InstanceFamily, r: LemmaCheckResult, seed: int) -> VerifyRow:
    sat = None if r.relation == "ratio" else r.satisfied
    return VerifyRow(fam.instance_id(), _params_text(fam), r.measured, r.bound if r.relation != "ratio" else None,
                     r.upper, sat, seed, r.note)


def _thales_rows(i: int, seed: int, dim: int | None) -> list[VerifyRow]:
    rng = np.random.default_rng([seed, i])
    dim = dim or 2 + int(rng.integers(0, 3))
    P = random_polytope(dim, seed + i)
    P = translate(P, tuple(-a for a in centroid(P)))  # contain the origin
    verts = P.vertices
    a, b = rng.choice(len(verts), size=2)
    lam = Fraction(int(rng.integers(0, 9)), 8)
    z = verts[int(a)]
    w = tuple(lam * p + (1 - lam) * q for p, q in zip(verts[int(a)], verts[int(b)]))
    eps = Fraction(int(rng.integers(1, 33)), 16)
    ok = thales_check(P, z, w, eps)
    iid = f"random_polytope[dim={dim},seed={seed + i}]"
    return [VerifyRow(iid, f"dim={dim};eps={eps}", Fraction(int(ok)), Fraction(1), None, ok, seed + i)]


def verify_lemma(lemma: str, count: int = 50, seed: int = 0, family: str | None = None,
                 params: dict | None = None) -> list[VerifyRow]:
    """Run one lemma's checker on ``count`` seeded instances."""
    if lemma not in LEMMAS:
        raise ValueError(f"unknown lemma {lemma!r}; choose from {LEMMAS}")
    rows: list[VerifyRow] = []
    for i in range(count):
        if lemma == "4.1":
            rows += _thales_rows(i, seed, (params or {}).get("dim"))
            continue
        if family is not None:
            fam = InstanceFamily(family, {**(params or {}), "seed": seed + i})
        else:
            fam = _default_family(lemma, i, seed)
            if params:
                fam = InstanceFamily(fam.name, {**fam.params, **params})
        M = generate_instance(fam)
        iid = fam.instance_id()
        try:
            if lemma == "3.1":
                rows.append(_from_check(fam, check_all_faces(M, iid), seed + i))
            elif lemma == "3.2":
                rows += [_from_check(fam, r, seed + i) for r in check_cone_sandwich(M, iid)]
            elif lemma == "3.3":
                rows.append(_from_check(fam, check_centroid_cut(M, iid), seed + i))
            elif lemma == "4.2":
                D = projection(M)
                c, _ = chebyshev_ball(D)
                z = tuple(math.floor(a + Fraction(1, 2)) for a in c)
                rows.append(_from_check(fam, check_slice_box(M, z, instance_id=iid), seed + i))
            elif lemma == "4.3":
                _, r = chebyshev_ball(projection(M))
                rows.append(_from_check(fam, check_slice_total(M, r, iid), seed + i))
            elif lemma == "4.4":
                ball = chebyshev_ball(projection(M))
                rows.append(_from_check(fam, check_centroid_shift(M, ball, iid), seed + i))
        except (HypothesisNotMet, BallTooSmall) as exc:
            rows.append(VerifyRow(iid, _params_text(fam), Fraction(0), None, None, None, seed + i,
                                  f"hypothesis not met: {exc}"))
    return rows


# ---------------------------------------------------------------------------
# floor valid for every mixed-integer body
# ---------------------------------------------------------------------------


def helly_floor(n: int, d: int) -> Fraction:
    return Fraction(1, 2**n * (d + 1))
