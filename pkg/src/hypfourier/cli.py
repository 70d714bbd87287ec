"""Command-line interface: ``hypfourier <command> [options]``.

Exit codes: 0 success (every verify row passed), 1 a verify row failed,
2 usage error, 3 numeric failure (precision cap or non-convergence).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .hypnum import ConvergenceError
from .kloosterman import (
    s_hyp_hyp,
    s_hyp_par,
    s_par_hyp,
    s_par_par,
    s_star_hyp_hyp,
    s_star_hyp_par,
    s_star_par_hyp,
)
from .lattice import enumerate_hd, enumerate_rstar
from .pell import solve_pell
from .poincare import CoeffRequest, compute_coefficient, phi_negative_pell
from .qseries import QSeries, delta_series, eisenstein_series, j_invariant, rankin_basis
from .verify import TARGETS, run_verify

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(f"{self.prog}: {message}")


@dataclass
class CommandResult:
    exit_code: int
    payload: object
    text: str


def _build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "table", "csv"), default="json")
    common.add_argument("--precision", type=int, default=None, help="significant digits printed (not working precision)")

    p = _Parser(prog="hypfourier", description="Fourier coefficients of Poincaré series for SL2(Z).")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("pell", parents=[common], help="fundamental Pell data")
    s.add_argument("--d", type=int, required=True)

    s = sub.add_parser("lattice", parents=[common], help="lattice points or double-coset representatives")
    s.add_argument("--d", type=int, required=True)
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--n", type=int, help="coprime points on e^2 - Dg^2 = N inside the ellipse")
    g.add_argument("--hd-window", type=Fraction, help="representatives with |C - 1/2| <= X")
    s.add_argument("--method", choices=("norm", "ellipsoid"), default="norm")

    s = sub.add_parser("kloosterman", parents=[common], help="one Kloosterman sum")
    s.add_argument("--kind", choices=("par-par", "hyp-par", "par-hyp", "hyp-hyp"), required=True)
    s.add_argument("--d", type=int)
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--bigN", type=int, help="N with C = -N/(2 sqrt D) (hyp-par) or N/(2 sqrt D) (par-hyp)")
    s.add_argument("--c", type=Fraction, help="modulus c (par-par) or exact C (hyp-hyp)")
    s.add_argument("--alpha", type=int, choices=(1, -1))
    s.add_argument("--star", action="store_true", help="renormalised variant")

    s = sub.add_parser("coeff", parents=[common], help="a Fourier coefficient")
    s.add_argument("--expansion", required=True, choices=("par-par", "hyp-par", "par-hyp", "hyp-hyp"))
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--d", type=int)
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--window", type=float)
    s.add_argument("--tol", type=float, default=1e-12)
    s.add_argument("--terms", action="store_true", help="include every summand")

    s = sub.add_parser("phi", parents=[common], help="the negative-Pell detector")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--window", type=Fraction, default=Fraction(2))

    s = sub.add_parser("qseries", parents=[common], help="exact q-expansions")
    s.add_argument("--form", required=True, help="delta | eisenstein:K | j | rankin")
    s.add_argument("--order", type=int, required=True)

    s = sub.add_parser("verify", parents=[common], help="compare against reference values")
    s.add_argument("--target", required=True, choices=TARGETS + ("all",))
    s.add_argument("--window", type=float)
    s.add_argument("--timing", action="store_true", help="add wall time (breaks byte-identical output)")
    return p


# --------------------------------------------------------------------------
# rendering


def _round(x: float, digits: int | None) -> float:
    if digits is None or not math.isfinite(x):
        return x
    return float(f"{x:.{digits}g}")


def _clean(obj: object, digits: int | None) -> object:
    if isinstance(obj, float):
        if math.isnan(obj):
            return "nan"
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        return _round(obj, digits)
    if isinstance(obj, dict):
        return {k: _clean(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v, digits) for v in obj]
    return obj


def _rows_of(payload: object) -> list[dict]:
    if isinstance(payload, list) and all(isinstance(r, dict) for r in payload):
        return payload
    if isinstance(payload, dict) and isinstance(payload.get("rows"), list):
        return payload["rows"]
    if isinstance(payload, dict):
        return [payload]
    return [{"value": payload}]


def render(payload: object, fmt: str, digits: int | None) -> str:
    payload = _clean(payload, digits)
    if fmt == "json":
        return json.dumps(payload, indent=2, ensure_ascii=False)
    rows = _rows_of(payload)
    cols: list[str] = []
    for r in rows:
        cols.extend(c for c in r if c not in cols)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({c: json.dumps(r[c]) if isinstance(r.get(c), (list, dict)) else r.get(c, "") for c in cols})
        return buf.getvalue().rstrip("\n")
    cells = [[str(r.get(c, "")) for c in cols] for r in rows]
    widths = [max([len(c)] + [len(row[i]) for row in cells]) for i, c in enumerate(cols)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(cols, widths))]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(v.ljust(w) for v, w in zip(row, widths)) for row in cells]
    return "\n".join(lines)


# --------------------------------------------------------------------------
# commands


def _need(value: object, flag: str, command: str) -> None:
    if value is None:
        raise UsageError(f"{command}: {flag} is required here")


def _value_json(v) -> dict[str, object]:
    return {"re": v.value.re, "im": v.value.im, "abs_err": v.value.abs_err, "terms": v.term_count}


def _cmd_pell(a) -> tuple[int, object]:
    return EXIT_OK, solve_pell(a.d).to_json()


def _cmd_lattice(a) -> tuple[int, object]:
    pd = solve_pell(a.d)
    if a.n is not None:
        pts = sorted(enumerate_rstar(pd, a.n))
        return EXIT_OK, [{"e": p.e, "g": p.g} for p in pts]
    table = enumerate_hd(pd, a.hd_window, method=a.method)
    out = []
    for C, reps in table.items():
        for r in reps:
            e, f, g, h = r.source
            out.append(
                {"C": [C.numerator, C.denominator], "alpha": r.alpha, "beta": r.beta, "e": e, "f": f, "g": g, "h": h}
            )
    return EXIT_OK, out


def _cmd_kloosterman(a) -> tuple[int, object]:
    if a.kind == "par-par":
        _need(a.c, "--c", "kloosterman par-par")
        if a.c.denominator != 1:
            raise UsageError("kloosterman par-par: --c must be a positive integer")
        return EXIT_OK, _value_json(s_par_par(a.m, a.n, int(a.c)))
    _need(a.d, "--d", f"kloosterman {a.kind}")
    pd = solve_pell(a.d)
    if a.kind in ("hyp-par", "par-hyp"):
        _need(a.bigN, "--bigN", f"kloosterman {a.kind}")
        if a.kind == "hyp-par":
            fn = s_star_hyp_par if a.star else s_hyp_par
        else:
            fn = s_star_par_hyp if a.star else s_par_hyp
        return EXIT_OK, _value_json(fn(pd, a.m, a.n, a.bigN))
    _need(a.c, "--c", "kloosterman hyp-hyp")
    _need(a.alpha, "--alpha", "kloosterman hyp-hyp")
    C = a.c
    beta = a.alpha * (1 if C > 0 else -1)
    reps = enumerate_hd(pd, max(Fraction(1, 2), abs(C - Fraction(1, 2))))
    if a.star:
        v = s_star_hyp_hyp(pd, a.m, a.n, C, a.alpha, reps)
    else:
        v = s_hyp_hyp(pd, a.m, a.n, C, a.alpha, beta, reps)
    return EXIT_OK, {**_value_json(v), "C": [C.numerator, C.denominator], "alpha": a.alpha, "beta": beta}


def _cmd_coeff(a) -> tuple[int, object]:
    req = CoeffRequest(a.expansion, a.k, a.m, a.n, D=a.d, window=a.window, tol=a.tol)
    res = compute_coefficient(req)
    out = res.to_json()
    if a.terms:
        out["term_values"] = [[t.label, t.value.real, t.value.imag] for t in res.terms]
    return EXIT_OK, out


def _cmd_phi(a) -> tuple[int, object]:
    return EXIT_OK, {"D": a.d, "window": str(a.window), "phi": phi_negative_pell(a.d, a.window)}


def _series_payload(s: QSeries) -> list[dict]:
    return [{"exponent": n, "coefficient": str(c)} for n, c in s.items()]


def _cmd_qseries(a) -> tuple[int, object]:
    form = a.form.lower()
    if form == "delta":
        s = delta_series(a.order)
    elif form == "j":
        s = j_invariant(a.order)
    elif form == "rankin":
        s = rankin_basis(a.order)
    elif form.startswith("eisenstein:"):
        try:
            k = int(form.split(":", 1)[1])
        except ValueError:
            raise UsageError(f"qseries: bad weight in {a.form!r}") from None
        s = eisenstein_series(k, a.order)
    else:
        raise UsageError(f"qseries: unknown form {a.form!r}")
    return EXIT_OK, _series_payload(s)


def _cmd_verify(a) -> tuple[int, object]:
    targets = TARGETS if a.target == "all" else (a.target,)
    overrides = {} if a.window is None else {"window": a.window}
    reports = [run_verify(t, overrides) for t in targets]
    code = EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL
    if a.format != "json":
        rows = [{"target": r.target, **row.to_json()} for r in reports for row in r.rows]
        return code, rows
    body = [r.to_json(include_time=a.timing) for r in reports]
    return code, body[0] if len(body) == 1 else body


_COMMANDS = {
    "pell": _cmd_pell,
    "lattice": _cmd_lattice,
    "kloosterman": _cmd_kloosterman,
    "coeff": _cmd_coeff,
    "phi": _cmd_phi,
    "qseries": _cmd_qseries,
    "verify": _cmd_verify,
}


def run_command(argv: Sequence[str]) -> CommandResult:
    """Parse and execute one command without touching the process state."""
    parser = _build_parser()
    fmt, digits = "json", None
    try:
        args = parser.parse_args(list(argv))
        fmt, digits = args.format, args.precision
        code, payload = _COMMANDS[args.command](args)
    except UsageError as exc:
        payload = {"error": str(exc)}
        return CommandResult(EXIT_USAGE, payload, render(payload, "json", None))
    except ConvergenceError as exc:
        partial = exc.partial
        payload = {
            "error": f"{type(exc).__name__}: {exc}",
            "partial": None if partial is None else {"re": partial.re, "im": partial.im, "abs_err": partial.abs_err},
        }
        return CommandResult(EXIT_NUMERIC, payload, render(payload, "json", digits))
    except (ValueError, TypeError, KeyError) as exc:
        payload = {"error": f"{type(exc).__name__}: {exc}"}
        return CommandResult(EXIT_USAGE, payload, render(payload, "json", None))
    return CommandResult(code, payload, render(payload, fmt, digits))


def main(argv: Sequence[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    if any(a in ("-h", "--help") for a in argv):
        try:
            _build_parser().parse_args(list(argv))
        except SystemExit as exc:
            return int(exc.code or 0)
    res = run_command(argv)
    stream = sys.stderr if res.exit_code in (EXIT_USAGE,) else sys.stdout
    print(res.text, file=stream)
    return res.exit_code


if __name__ == "__main__":
    sys.exit(main())
