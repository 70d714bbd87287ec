"""Recompute published reference values and compare them row by row."""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Mapping

from . import reference as ref
from .hypnum import ConvergenceError
from .pell import solve_negative_pell, solve_pell
from .poincare import (
    coeff_hyp_hyp,
    coeff_hyp_par,
    coeff_par_hyp,
    coeff_par_par,
    phi_negative_pell,
    workers_from_env,
)
from .qseries import eisenstein_series, j_invariant, rankin_basis

TARGETS = ("table1", "table2", "table3", "table4", "delta_hyp", "lambda_values", "rankin")

TOLERANCE = {
    "table1": 5e-3,
    "table2": 1e-2,
    "table3": 1e-2,
    "table4": 5e-4,
    "delta_hyp": 1e-2,
    "lambda_values": 1e-3,
    "rankin": 1e-3,
}
# Φ(D) is compared absolutely: half of its reference values are 0
ABSOLUTE = {"table4"}


@dataclass(frozen=True)
class VerifyRow:
    label: str
    computed: float
    reference: float
    rel_err: float
    passed: bool
    tolerance: float
    error: str | None = None

    def to_json(self) -> dict[str, object]:
        return {
            "label": self.label,
            "computed": self.computed,
            "reference": self.reference,
            "rel_err": self.rel_err,
            "tolerance": self.tolerance,
            "pass": self.passed,
            "error": self.error,
        }


@dataclass(frozen=True)
class VerifyReport:
    target: str
    rows: tuple[VerifyRow, ...]
    wall_time: float
    metric: str = "rel"

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)

    def to_json(self, include_time: bool = False) -> dict[str, object]:
        out: dict[str, object] = {
            "target": self.target,
            "metric": self.metric,
            "pass": self.passed,
            "rows": [r.to_json() for r in self.rows],
        }
        if include_time:
            out["wall_time"] = self.wall_time
        return out


# --------------------------------------------------------------------------
# row jobs: (label, reference, tolerance, callable spec) with picklable specs


def _job_value(spec: tuple) -> float:
    kind, args = spec[0], spec[1:]
    if kind == "par_par":
        k, m, n, w = args
        return coeff_par_par(k, m, n, window=w).value.re
    if kind == "hyp_par":
        k, D, m, n, w = args
        return coeff_hyp_par(k, D, m, n, window=w).value.re
    if kind == "par_hyp":
        k, D, m, n, w = args
        return coeff_par_hyp(k, D, m, n, window=w).value.re
    if kind == "hyp_hyp":
        k, D, m, n, w = args
        return coeff_hyp_hyp(k, D, m, n, window=w).value.re
    if kind == "phi":
        D, w = args
        return phi_negative_pell(D, w)
    if kind == "delta_ratio":
        D, n, w = args
        top = coeff_par_hyp(12, D, 1, n, window=w).value.re
        return top / coeff_par_hyp(12, D, 1, 0, window=w).value.re
    if kind == "rankin":
        (w,) = args
        return coeff_par_par(12, -1, 1, window=w).value.re - float(rankin_basis(1)[1])
    if kind == "rankin2":
        (w,) = args
        j = j_invariant(3)
        e6 = eisenstein_series(6, 4)
        form = (j * j - 480 * j + 205128) * (e6 * e6)
        return coeff_par_par(12, -2, 1, window=w).value.re - float(form[1])
    raise ValueError(f"unknown job kind {kind!r}")


def _run_job(job: tuple) -> tuple[float | None, str | None]:
    try:
        return _job_value(job), None
    except (ConvergenceError, ArithmeticError, ValueError) as exc:
        return None, f"{type(exc).__name__}: {exc}"


def _jobs(target: str, overrides: Mapping[str, object]) -> list[tuple[str, float, tuple, float]]:
    """(label, reference, job spec, printed resolution) for every row of ``target``."""
    w = overrides.get("window")
    out: list[tuple[str, float, tuple, float]] = []
    if target == "lambda_values":
        for m, v in ref.LAMBDA.items():
            out.append((f"lambda_{m}", v, ("par_par", 12, m, 1, w or 1000), 0.0))
    elif target == "rankin":
        out.append(("lambda_-1", ref.LAMBDA_MINUS_1, ("rankin", w or 1000), 0.0))
        out.append(("lambda_-2", ref.LAMBDA_MINUS_2, ("rankin2", w or 1000), 0.0))
    elif target == "table1":
        for (D, m), v in ref.PARABOLIC_OF_HYPERBOLIC.items():
            out.append((f"D={D},m={m}", v, ("hyp_par", 12, D, m, 1, w or 200), 0.0))
    elif target == "table2":
        for (m, n), v in ref.HYPERBOLIC_OF_PARABOLIC.items():
            res = ref.HYPERBOLIC_OF_PARABOLIC_RESOLUTION[(m, n)]
            out.append((f"m={m},n={n}", v, ("par_hyp", 12, 2, m, n, w or 200), res))
    elif target == "table3":
        X = w or ref.HYPERBOLIC_OF_HYPERBOLIC_WINDOW
        for n, v in ref.HYPERBOLIC_OF_HYPERBOLIC.items():
            out.append((f"n={n}", v, ("hyp_hyp", 12, 2, 0, n, X), 0.0))
    elif target == "table4":
        X = w or ref.PHI_WINDOW
        for D, v in ref.PHI.items():
            out.append((f"D={D}", v, ("phi", D, X), 0.0))
    elif target == "delta_hyp":
        for n, v in ref.DELTA_HYPERBOLIC.items():
            if n != 0:
                out.append((f"n={n}", v, ("delta_ratio", 2, n, w or 200), 0.0))
    else:
        raise ValueError(f"unknown target {target!r}; expected one of {', '.join(TARGETS)}")
    return out


def _static_rows(target: str) -> list[VerifyRow]:
    # exact arithmetic rows that need no numerics
    rows = []
    if target == "table4":
        for D, unit in ref.FUNDAMENTAL_UNIT.items():
            pd = solve_pell(D)
            ok = (pd.a0, pd.c0) == unit and solve_negative_pell(D) == ref.NEGATIVE_PELL[D]
            rows.append(VerifyRow(f"pell D={D}", float(ok), 1.0, 0.0 if ok else 1.0, ok, 0.0))
    return rows


def run_verify(target: str, overrides: Mapping[str, object] | None = None) -> VerifyReport:
    overrides = dict(overrides or {})
    if target not in TARGETS:
        raise ValueError(f"unknown target {target!r}; expected one of {', '.join(TARGETS)}")
    start = time.perf_counter()
    jobs = _jobs(target, overrides)
    workers = int(overrides.get("workers") or workers_from_env())
    specs = [j[2] for j in jobs]
    if workers > 1 and len(specs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_job, specs))
    else:
        results = [_run_job(s) for s in specs]
    tol = TOLERANCE[target]
    absolute = target in ABSOLUTE
    rows = []
    for (label, reference, _, resolution), (value, err) in zip(jobs, results):
        if value is None:
            rows.append(VerifyRow(label, math.nan, reference, math.inf, False, tol, err))
            continue
        diff = abs(value - reference)
        metric = diff if absolute else diff / abs(reference)
        # a value printed with few digits cannot be checked below half its last digit
        row_tol = tol if absolute else max(tol, 0.5 * resolution / abs(reference))
        rows.append(VerifyRow(label, value, reference, metric, metric <= row_tol, row_tol))
    rows.extend(_static_rows(target))
    return VerifyReport(target, tuple(rows), time.perf_counter() - start, "abs" if absolute else "rel")
