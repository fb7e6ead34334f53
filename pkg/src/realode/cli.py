"""``realode solve`` / ``realode verify`` command-line front end.

Exit codes: 0 success, 1 verification failure, 2 input error.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Sequence

from . import invariants, oracle, solver
from .parser import Coefficients, DegenerateOrderError, ParseError, parse_coefficients
from .solver import DampingClass, format_number

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INPUT = 2

RESIDUAL_TOL = 1e-9
INTEGRAL_TOL = 1e-9
RK4_TOL = 1e-8


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def _eval_grid(spec: str) -> list[float]:
    try:
        start, stop, step = (float(p) for p in spec.split(":"))
    except ValueError:
        raise InputError(f"--eval expects start:stop:step, got {spec!r}") from None
    if not all(math.isfinite(v) for v in (start, stop, step)) or step <= 0 or stop < start:
        raise InputError(f"--eval needs finite start <= stop and step > 0, got {spec!r}")
    n = math.floor((stop - start) / step + 1e-9)
    return [start + i * step for i in range(n + 1)]


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="realode", description="Closed-form solutions of y'' + a*y' + b*y = 0.")
    sub = p.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("solve", "classify, solve and optionally fit initial conditions"),
        ("verify", "solve, then check residual, first integrals and RK4 agreement"),
    ):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("equation", nargs="?", help="e.g. \"y'' + 3y' + 2y = 0\"")
        sp.add_argument("-a", type=float, help="coefficient of y'")
        sp.add_argument("-b", type=float, help="coefficient of y")
        sp.add_argument("--y0", type=float, help="y(0)")
        sp.add_argument("--v0", type=float, help="y'(0)")
        sp.add_argument("--tol", type=float, default=solver.DEFAULT_TOL, help="classification tolerance")
        sp.add_argument("--eval", dest="eval_spec", metavar="START:STOP:STEP", help="evaluation table")
        sp.add_argument("--csv", metavar="PATH", help="write the evaluation table as CSV")
        sp.add_argument("--format", choices=("text", "json"), default="text")
        sp.add_argument("--h", type=float, default=oracle.DEFAULT_H, help="RK4 step for verify")
    return p


def _coefficients(args) -> Coefficients:
    has_pair = args.a is not None or args.b is not None
    if args.equation is not None and has_pair:
        raise InputError("give either an equation or -a/-b, not both")
    if args.equation is not None:
        return parse_coefficients(args.equation)
    if args.a is None or args.b is None:
        raise InputError("give an equation or both -a and -b")
    return Coefficients(args.a, args.b)


def _validate(args):
    if (args.y0 is None) != (args.v0 is None):
        raise InputError("--y0 and --v0 must be given together")
    if args.eval_spec is not None and args.y0 is None:
        raise InputError("--eval needs --y0 and --v0")
    if args.csv is not None and args.eval_spec is None:
        raise InputError("--csv needs --eval")
    if not (args.tol >= 0 and math.isfinite(args.tol)):
        raise InputError("--tol must be a non-negative number")
    if args.command == "verify" and args.y0 is None:
        raise InputError("verify needs --y0 and --v0")
    if not (args.h > 0 and math.isfinite(args.h)):
        raise InputError("--h must be positive")
    for name in ("y0", "v0"):
        v = getattr(args, name)
        if v is not None and not math.isfinite(v):
            raise InputError(f"--{name} must be finite")


def solve_record(coeffs: Coefficients, args) -> dict:
    form = solver.general_solution(coeffs, args.tol)
    record = {
        "input": {"a": coeffs.a, "b": coeffs.b},
        "class": form.damping.value,
        "alpha": form.alpha,
        "beta": form.beta,
        "general_solution": solver.render(form),
        "roots": list(solver.characteristic_roots(coeffs, args.tol)),
        "solution": {"c1": None, "c2": None, "rendered": solver.render(form)},
    }
    if args.y0 is None:
        return record
    fitted = solver.fit_initial_conditions(form, args.y0, args.v0)
    record["ic"] = {"y0": args.y0, "v0": args.v0}
    record["solution"] = {"c1": fitted.c1, "c2": fitted.c2, "rendered": solver.render(fitted)}
    if fitted.damping is DampingClass.OVERDAMPED:
        exp = solver.to_exponential_form(fitted)
        record["exponential_form"] = {**exp.to_dict(), "rendered": solver.render_exponential(exp)}
    if args.eval_spec is not None:
        record["eval"] = [{"x": x, "y": solver.evaluate(fitted, x)} for x in _eval_grid(args.eval_spec)]
    return record


def verify_record(coeffs: Coefficients, args, record: dict) -> dict:
    fitted = solver.solve_ivp(coeffs, args.y0, args.v0, args.tol)
    grid = invariants.default_grid()
    residual_max = max(oracle.scaled_residual(coeffs, fitted, x) for x in grid)
    constancy = invariants.check_constancy(fitted, grid, INTEGRAL_TOL)
    traj = oracle.rk4_integrate(coeffs, args.y0, args.v0, oracle.DEFAULT_SPAN, args.h)
    cmp = oracle.compare(fitted, traj)
    checks = {
        "residual": residual_max <= RESIDUAL_TOL,
        "integrals": constancy.passed,
        "rk4": cmp.max_err <= RK4_TOL,
    }
    record.update(
        {
            "residual_max": residual_max,
            "integral_dev": {"I1": constancy.max_dev_I1, "I2": constancy.max_dev_I2},
            "identification_dev": constancy.max_id_dev,
            "identified": {"c1": constancy.identified_C1, "c2": constancy.identified_C2},
            "rk4_max_err": cmp.max_err,
            "rk4_relative": cmp.relative,
            "thresholds": {"residual": RESIDUAL_TOL, "integrals": INTEGRAL_TOL, "rk4": RK4_TOL, "h": args.h},
            "checks": checks,
            "pass": all(checks.values()),
        }
    )
    return record


def _signed(v: float) -> str:
    text = format_number(v)
    return f" - {text[1:]}" if text.startswith("-") else f" + {text}"


def _g(v: float) -> str:
    return f"{v:.12g}"


def format_text(record: dict) -> str:
    a, b = record["input"]["a"], record["input"]["b"]
    lines = [
        f"equation: y''{_signed(a)}*y'{_signed(b)}*y = 0",
        f"class: {record['class']}",
        f"alpha: {format_number(record['alpha'])}",
        f"beta: {format_number(record['beta'])}",
        f"general solution: {record['general_solution']}",
    ]
    roots = record["roots"]
    if len(roots) == 2:
        lines.append(f"roots: r1 = {format_number(roots[0])}, r2 = {format_number(roots[1])}")
    elif len(roots) == 1:
        lines.append(f"roots: r = {format_number(roots[0])} (double)")
    else:
        lines.append("roots: none (no real roots)")
    if "ic" in record:
        sol = record["solution"]
        lines.append(f"initial conditions: y(0) = {format_number(record['ic']['y0'])}, "
                     f"y'(0) = {format_number(record['ic']['v0'])}")
        lines.append(f"constants: C1 = {format_number(sol['c1'])}, C2 = {format_number(sol['c2'])}")
        lines.append(f"solution: {sol['rendered']}")
    if "exponential_form" in record:
        e = record["exponential_form"]
        lines.append(
            f"exponential form: {e['rendered']} (D1 = {format_number(e['d1'])}, D2 = {format_number(e['d2'])}, "
            f"r1 = {format_number(e['r1'])}, r2 = {format_number(e['r2'])})"
        )
    if "eval" in record:
        lines.append("eval:")
        lines.append(f"{'x':>20} {'y':>20}")
        lines.extend(f"{_g(row['x']):>20} {_g(row['y']):>20}" for row in record["eval"])
    if "pass" in record:
        t = record["thresholds"]
        c = record["checks"]
        verdict = lambda ok: "pass" if ok else "FAIL"  # noqa: E731
        lines.append("verification:")
        lines.append(f"  residual max (scaled): {record['residual_max']:.3e} <= {t['residual']:g}  "
                     f"{verdict(c['residual'])}")
        lines.append(f"  first integral I1 dev: {record['integral_dev']['I1']:.3e} <= {t['integrals']:g}")
        lines.append(f"  first integral I2 dev: {record['integral_dev']['I2']:.3e} <= {t['integrals']:g}")
        lines.append(f"  I1, I2 vs C1, C2 dev:  {record['identification_dev']:.3e} <= {t['integrals']:g}  "
                     f"{verdict(c['integrals'])}")
        lines.append(f"  identified: C1 = {format_number(record['identified']['c1'])}, "
                     f"C2 = {format_number(record['identified']['c2'])}")
        kind = "relative" if record["rk4_relative"] else "absolute"
        lines.append(f"  rk4 max error ({kind}, h = {t['h']:g}): {record['rk4_max_err']:.3e} <= {t['rk4']:g}  "
                     f"{verdict(c['rk4'])}")
        lines.append(f"result: {'PASS' if record['pass'] else 'FAIL'}")
    return "\n".join(lines) + "\n"


def _write_csv(path: str, rows: list[dict]):
    with open(path, "w") as fh:
        fh.write("x,y\n")
        for row in rows:
            fh.write(f"{row['x']!r},{row['y']!r}\n")


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    try:
        args = build_parser().parse_args(argv)
        _validate(args)
        coeffs = _coefficients(args)
        record = solve_record(coeffs, args)
        if args.command == "verify":
            record = verify_record(coeffs, args, record)
    except (InputError, ParseError, DegenerateOrderError, ValueError) as exc:
        print(f"realode: error: {exc}", file=stderr)
        return EXIT_INPUT
    except OverflowError as exc:
        print(f"realode: error: {exc}", file=stderr)
        return EXIT_FAIL if getattr(args, "command", None) == "verify" else EXIT_INPUT
    if args.csv is not None:
        _write_csv(args.csv, record["eval"])
    if args.format == "json":
        stdout.write(json.dumps(record, indent=2, ensure_ascii=False) + "\n")
    else:
        stdout.write(format_text(record))
    if args.command == "verify" and not record["pass"]:
        return EXIT_FAIL
    return EXIT_OK


def main():
    sys.exit(run())
