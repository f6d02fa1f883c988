"""Seeded instance generation and the per-kind experiment runners."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

import numpy as np

from .. import linalg
from ..errors import ConfigError
from ..induce import InducedInner, verify_inner_product
from ..nip import NInnerForm, check_axioms
from ..stability import (Scheme, certify_linearity, certify_preservation, closed_form_bound,
                         direct_method_batch, make_perturbed_map, orthogonality_excess,
                         sample_points, verify_mode)
from ..stability.direct import BOUND_SLACK, ROUNDING_FLOOR, default_radii
from .config import MAX_DIM, MAX_N, ExperimentConfig

CSV_COLUMNS = ("experiment_id", "check", "instance", "sample", "x_norm", "y_norm",
               "defect_observed", "bound", "verdict")

DEFAULT_TOL = {"axioms": 1e-9, "induce": 1e-9, "stability_hilbert": 1e-6, "stability_nip": 1e-6}


@dataclass
class Row:
    check: str
    instance: int
    sample: int
    x_norm: float | None
    y_norm: float | None
    defect_observed: float
    bound: float
    passed: bool


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    rows: list[Row]
    summary: dict = field(default_factory=dict)
    runtime: float = 0.0

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)

    def checks(self) -> dict:
        out: dict[str, dict] = {}
        for r in self.rows:
            c = out.setdefault(r.check, {"samples": 0, "failures": 0, "max_defect": 0.0,
                                         "max_excess": float("-inf")})
            c["samples"] += 1
            c["failures"] += 0 if r.passed else 1
            c["max_defect"] = max(c["max_defect"], r.defect_observed)
            c["max_excess"] = max(c["max_excess"], r.defect_observed - r.bound)
        for c in out.values():
            c["verdict"] = "pass" if c["failures"] == 0 else "fail"
        return out


def _check_caps(n: int, dim: int) -> None:
    if not 2 <= n <= MAX_N:
        raise ConfigError(f"n={n} outside 2..{MAX_N}")
    if dim > MAX_DIM:
        raise ConfigError(f"dim={dim} exceeds cap {MAX_DIM}")
    if dim < n:
        raise ConfigError(f"dim={dim} < n={n}; an n-inner product needs dim >= n >= 2")


def draw_anchors(n: int, dim: int, seed: int, max_condition: float = 1e6):
    """Random anchors, redrawn until independent and well conditioned."""
    for attempt in range(1000):
        rng = np.random.default_rng([seed, attempt, 0x414E])
        anchors = [linalg.random_vector(rng, dim) for _ in range(n)]
        if linalg.numeric_rank(anchors) < n:
            continue
        cond = linalg.condition_estimate(linalg.gram_matrix(anchors, anchors))
        if cond < max_condition:
            return anchors
    raise ConfigError(f"could not draw anchors with condition < {max_condition:g}")


def orthonormal_anchors(n: int, dim: int):
    return [np.eye(dim, dtype=np.complex128)[i] for i in range(n)]


def _map_seed(seed: int, index: int) -> int:
    return int(np.random.default_rng([seed, index, 0x4D4150]).integers(2**31))


def _mode_for(scheme: Scheme) -> str:
    return "jensen" if scheme.is_jensen else "cauchy"


def generate_instance(kind: str, seed: int, params: dict | None = None) -> bytes:
    """Deterministic JSON serialisation of the random objects an experiment uses."""
    params = dict(params or {})
    kind = kind.lower()
    n = int(params.get("n", 2))
    dim = int(params.get("dim", params.get("dim_X", 3)))
    inst: dict = {"kind": kind, "seed": seed}
    if kind in ("axioms", "induce", "stability_nip"):
        _check_caps(n, dim)
    elif dim > MAX_DIM:
        raise ConfigError(f"dim={dim} exceeds cap {MAX_DIM}")
    if kind == "axioms":
        inst.update(n=n, dim=dim)
    elif kind == "induce":
        anchors = draw_anchors(n, dim, seed, float(params.get("max_condition", 1e6)))
        inst.update(n=n, dim=dim, k=float(params.get("k", 1.0)),
                    anchors=[linalg.vector_to_json(a) for a in anchors])
    elif kind in ("stability_hilbert", "stability_nip"):
        scheme = Scheme.parse(params.get("scheme", "doubling"))
        order = n if kind == "stability_nip" else 1
        theta = float(params.get("theta", 1.0))
        p = float(params.get("p", 0.5 if scheme.ascending else 2.0 * order + 1.0))
        scheme.check_p(p, order)
        dim_y = int(params.get("dim_Y", dim))
        if dim_y > MAX_DIM:
            raise ConfigError(f"dim_Y={dim_y} exceeds cap {MAX_DIM}")
        f = make_perturbed_map(theta, p, dim, dim_y, _map_seed(seed, 0), _mode_for(scheme),
                               bool(params.get("complement", False)))
        inst.update(n=n, scheme=scheme.value, map=f.describe(),
                    mode_check_excess=verify_mode(f, 256, seed))
    else:
        raise ConfigError(f"unknown kind {kind!r}")
    return json.dumps(inst, sort_keys=True).encode()


def run_axioms(exp: ExperimentConfig) -> ExperimentResult:
    tol = exp.tol or DEFAULT_TOL["axioms"]
    report = check_axioms(NInnerForm(exp.n, exp.dim_X), exp.samples, exp.seed, tol)
    rows = [Row(rec.axiom_id, 0, i, None, None, v, tol, v <= tol)
            for rec in report.records.values() for i, v in enumerate(rec.violations)]
    return ExperimentResult(exp, rows, {"report": report.to_json()})


def run_induce(exp: ExperimentConfig) -> ExperimentResult:
    tol = exp.tol or DEFAULT_TOL["induce"]
    form = NInnerForm(exp.n, exp.dim_X)
    if exp.anchors == "orthonormal":
        anchors = orthonormal_anchors(exp.n, exp.dim_X)
    elif exp.anchors == "random":
        anchors = draw_anchors(exp.n, exp.dim_X, exp.seed, exp.max_condition)
    else:
        anchors = [linalg.vector_from_json(a) for a in exp.anchors]
    ii = InducedInner(form, tuple(anchors), exp.k)
    report = verify_inner_product(ii, exp.samples, exp.seed, tol)
    rows = [Row(rec.axiom_id, 0, i, None, None, v, tol, v <= tol)
            for rec in report.records.values() for i, v in enumerate(rec.violations)]
    rows.append(Row("anchor_condition", 0, 0, None, None, ii.condition, exp.max_condition,
                    ii.condition < exp.max_condition))
    if exp.anchors == "orthonormal" and exp.n == exp.dim_X:
        rng = np.random.default_rng([exp.seed, 0x524543])
        for i in range(exp.samples):
            x = linalg.random_vector(rng, exp.dim_X)
            y = linalg.random_vector(rng, exp.dim_X)
            err = abs(ii(x, y) - exp.k * linalg.inner(x, y))
            rows.append(Row("recovery", 0, i, linalg.norm(x), linalg.norm(y), err,
                            exp.recovery_tol, err <= exp.recovery_tol))
    return ExperimentResult(exp, rows, {"report": report.to_json()})


def run_stability(exp: ExperimentConfig) -> ExperimentResult:
    scheme = exp.scheme_enum
    order = exp.order
    tol = exp.tol or DEFAULT_TOL[exp.kind]
    dim_y = exp.dim_X if exp.dim_Y is None else exp.dim_Y
    radii = tuple(exp.radii) if exp.radii else default_radii(scheme)
    l_max = exp.l_max
    pairs = exp.pairs or exp.samples
    lin_samples = exp.linearity_samples or min(exp.samples, 100)
    forms = (None, None)
    if exp.kind == "stability_nip":
        forms = (NInnerForm(exp.n, exp.dim_X), NInnerForm(exp.n, dim_y))
    rows: list[Row] = []
    summary = {"maps": []}

    for m in range(exp.maps):
        mseed = _map_seed(exp.seed, m)
        f = make_perturbed_map(exp.theta, exp.p, exp.dim_X, dim_y, mseed, _mode_for(scheme),
                               exp.complement)
        excess = verify_mode(f, 256, mseed)
        rows.append(Row("mode_check", m, 0, None, None, excess, 0.0, excess <= 0.0))
        if exp.complement:
            oexc = orthogonality_excess(f, 256, mseed)
            rows.append(Row("orthogonality_hypothesis", m, 0, None, None, oexc, 0.0, oexc <= 0.0))

        rng = np.random.default_rng([exp.seed, m, 0x505453])
        xs = sample_points(rng, exp.dim_X, exp.samples, *radii)
        runs = direct_method_batch(f, scheme, xs, l_max, order=order)
        for i, run in enumerate(runs):
            if run.excluded:
                continue
            nx = linalg.norm(run.x)
            total = run.defect_bound_theoretical + run.tail_bound + BOUND_SLACK
            rows.append(Row("approximation", m, i, nx, None, run.defect_observed, total,
                            run.verdict == "pass"))
            cfb = closed_form_bound(scheme, exp.theta, exp.p, nx, order) + exp.bound_slack
            rows.append(Row("closed_form", m, i, nx, None, run.defect_observed, cfb,
                            run.defect_observed <= cfb))
            gap_excess = float(np.max(run.gaps - run.gap_bounds))
            floor = ROUNDING_FLOOR * max(1.0, nx)
            rows.append(Row("gap_law", m, i, nx, None, gap_excess, floor, run.gap_law_ok))

        lin = certify_linearity(f, scheme, lin_samples, mseed, tol, l_max, order=order,
                                radii=radii)
        for rec in lin.records.values():
            rows.extend(Row(rec.axiom_id, m, i, None, None, v, tol, v <= tol)
                        for i, v in enumerate(rec.violations))

        pres = certify_preservation(f, scheme, pairs, mseed, l_max, *forms, radii=radii)
        limit = pres.bounds + pres.floors
        if exp.preservation_max is not None:
            limit = np.minimum(limit, exp.preservation_max)
        for i in range(len(pres.defects)):
            d = float(pres.defects[i])
            rows.append(Row("preservation", m, i, float(pres.norms[i, 0]),
                            float(pres.norms[i, 1]), d, float(limit[i]), d <= limit[i]))
        summary["maps"].append({"map_seed": mseed, "linearity": lin.to_json(),
                                "preservation": pres.to_json()})
    return ExperimentResult(exp, rows, summary)


RUNNERS = {
    "axioms": run_axioms,
    "induce": run_induce,
    "stability_hilbert": run_stability,
    "stability_nip": run_stability,
}


def run_experiment(exp: ExperimentConfig) -> ExperimentResult:
    start = time.perf_counter()
    result = RUNNERS[exp.kind](exp)
    result.runtime = time.perf_counter() - start
    return result
