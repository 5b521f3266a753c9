#!/usr/bin/env python3
"""
Command-line interface for the complex fractional IVP toolkit.

Subcommands: ops, radius, solve, classify, schwarz, bridge, check.

Exit codes:
    0  success
    2  parse or spec-file error
    3  evaluation singularity
    4  solver did not converge
    5  F(0, b) != b/Gamma(1-q), the problem is refused

Usage:
    python cfde_cli.py solve --spec data/example_linear.json --format json
    python cfde_cli.py ops --op I --q 0.5 --expr 1 --points 1 0.5i
"""

import argparse
import json
import sys

import numpy as np
import pandas as pd

from cfde_bridge import bridge_solve
from cfde_existence import (
    ConditionIVViolation,
    ProblemSpec,
    cauchy_riemann_defect,
    check_condition_iv,
    estimate_M,
    naive_invariance_bound,
    radius_R0,
)
from cfde_expr import ExprSyntaxError, evaluate, free_names, parse
from cfde_geometry import DEFAULT_DISC_GRID, classify
from cfde_log import print_coefficients, print_report, table_lines
from cfde_ops import (
    PowerSeries,
    cauchy_derivative,
    frac_derivative_of_integral_quad,
    frac_derivative_quad,
    frac_derivative_series,
    frac_integral_of_derivative_quad,
    frac_integral_quad,
    frac_integral_series,
)
from cfde_schwarz import DEFAULT_SCHWARZ_GRID, BidiscSpec, schwarz2_check
from cfde_solver import DEFAULT_TORUS_GRID, SolverConfig, solve
from cfde_special import DomainError, QuadratureError, SingularityError
from cfde_utils import SpecFileError, env_default, load_spec_file, map_points, parse_grid

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_SINGULARITY = 3
EXIT_NONCONVERGENCE = 4
EXIT_CONDITION_IV = 5

CSV_FLOAT_FORMAT = "%.17g"
CAUCHY_RADIUS = 0.1


def parse_point(text):
    """
    Complex number from text; i and j both mark the imaginary unit.

    Example:
        parse_point("0.5i")     -> 0.5j
        parse_point("-0.3+2i")  -> (-0.3+2j)
    """
    try:
        return complex(str(text).strip().replace(" ", "").replace("i", "j"))
    except ValueError:
        raise SpecFileError(f"not a complex number: {text!r}")


def _threads(args):
    return args.threads if args.threads is not None else env_default("threads")


def _grid(args, spec, key, default):
    if args.grid:
        return parse_grid(args.grid)
    if spec is not None and key in spec.grids:
        return spec.grids[key]
    env = env_default("grid")
    return parse_grid(env) if env else default


def _solver_config(args, spec):
    overrides = {
        "n_quad": args.n_quad,
        "tol": args.tol,
        "max_iter": args.max_iter,
        "degree": args.degree,
        "damping": args.damping,
    }
    return SolverConfig.resolve(spec.solver, overrides)


def _load_problem(args):
    if not args.spec:
        raise SpecFileError("this command needs --spec <file>")
    return ProblemSpec.from_config(load_spec_file(args.spec))


def _result(title, report, table=None, code=EXIT_OK, coefficients=None, show_table=True):
    return {
        "title": title,
        "report": report,
        "table": table,
        "code": code,
        "coefficients": coefficients,
        "show_table": show_table,
    }


def cmd_ops(args):
    """Apply I^q, D^q or a composition to a function at the given points."""
    q = args.q
    points = np.array([parse_point(p) for p in args.points], dtype=complex)
    n = args.n_quad or env_default("n_quad")

    if (args.expr is None) == (args.coeffs is None):
        raise SpecFileError("ops needs exactly one of --expr or --coeffs")

    if args.coeffs is not None:
        radius = max(1.0, float(np.max(np.abs(points))))
        u = PowerSeries([parse_point(c) for c in args.coeffs.split(",")], radius)
        if args.op == "I":
            result = frac_integral_series(u, q)
        elif args.op == "D":
            result = frac_derivative_series(u, q)
        elif args.op == "DI":
            result = frac_derivative_series(frac_integral_series(u, q), q)
        else:
            result = frac_integral_series(frac_derivative_series(u, q), q)
        values = map_points(result, points, threads=_threads(args))
    else:
        ast = parse(args.expr)
        extra = free_names(ast) - {"z", "q"}
        if extra:
            raise SpecFileError(f"--expr may use z and q only, found {', '.join(sorted(extra))}")

        def u(w):
            return evaluate(ast, {"z": w, "q": q})

        def uprime(w):
            return cauchy_derivative(u, w, CAUCHY_RADIUS)

        operators = {
            "I": lambda z: frac_integral_quad(u, q, z, n),
            "D": lambda z: frac_derivative_quad(u, uprime, q, z, n),
            "DI": lambda z: frac_derivative_of_integral_quad(u, uprime, q, z, n),
            "ID": lambda z: frac_integral_of_derivative_quad(u, uprime, q, z, n),
        }
        values = map_points(operators[args.op], points, threads=_threads(args))

    table = pd.DataFrame({
        "z_re": points.real,
        "z_im": points.imag,
        "val_re": values.real,
        "val_im": values.imag,
    })
    report = {"op": args.op, "q": q, "points": len(points), "path": "series" if args.coeffs else "quadrature"}
    return _result("Fractional operator", report, table)


def cmd_radius(args):
    """M on the torus, the existence radius and the compatibility check."""
    spec = _load_problem(args)
    iv = check_condition_iv(spec)
    est = estimate_M(spec, gridN=_grid(args, spec, "torus", (DEFAULT_TORUS_GRID, DEFAULT_TORUS_GRID)),
                     threads=_threads(args))
    radius = radius_R0(est["M"], spec.q, spec.R, spec.r)
    report = {
        "q": spec.order,
        "b": spec.b,
        "R": spec.R,
        "r": spec.r,
        "M": radius.M,
        "gamma_2_minus_q": radius.gamma2q,
        "R0": radius.R0,
        "branch": radius.branch.value,
        "argmax_z": est["argmax"][0],
        "argmax_t": est["argmax"][1],
        "condition_iv": iv["pass"],
        "observed_limit": iv["observed_limit"],
        "target": iv["target"],
    }
    return _result("Existence radius", report)


def cmd_solve(args):
    """Solve the problem; the grid table goes to --out or stdout."""
    spec = _load_problem(args)
    cfg = _solver_config(args, spec)
    sol = solve(spec, cfg, threads=_threads(args), verbose=args.verbose)
    report = sol.to_report()
    report.pop("grid")
    coefficients = report.pop("coefficients")
    solver = report.pop("solver")
    report.update({f"solver_{k}": v for k, v in solver.items()})
    report["coefficients"] = coefficients

    z = np.array([p[0] for p in sol.grid], dtype=complex)
    u = np.array([p[1] for p in sol.grid], dtype=complex)
    table = pd.DataFrame({"z_re": z.real, "z_im": z.imag, "u_re": u.real, "u_im": u.imag})
    code = EXIT_OK if sol.converged else EXIT_NONCONVERGENCE
    return _result("Solution", report, table, code=code, coefficients=sol.poly.coeffs, show_table=False)


def cmd_classify(args):
    """Univalence and starlikeness certificates for f = z^(-q) h(z)."""
    spec = _load_problem(args)
    if "t" in free_names(spec.F_expr):
        raise SpecFileError("classify needs f = z^(-q) h(z) with h independent of t")
    # the certificates are for u = I^q[z^(-q) h], which has u(0) = 0
    if spec.b != 0:
        raise SpecFileError(f"classify needs b = 0, got b = {spec.b}")

    def h(w):
        return spec.F(w, 0j)

    report = classify(h, spec.q, grid=_grid(args, spec, "unit_disc", DEFAULT_DISC_GRID),
                      n=args.n_quad or 32).to_dict()
    return _result("Classification", report)


def cmd_schwarz(args):
    """Sample the two-variable Schwarz bound for g(z, t)."""
    ast = parse(args.g)
    extra = free_names(ast) - {"z", "t", "b"}
    if extra:
        raise SpecFileError(f"g may use z, t and b only, found {', '.join(sorted(extra))}")
    spec = BidiscSpec(R=args.R, r=args.r, b=parse_point(args.b))

    def g(z, t):
        return evaluate(ast, {"z": z, "t": t, "b": spec.b})

    grid = _grid(args, None, "schwarz", DEFAULT_SCHWARZ_GRID)
    report = schwarz2_check(g, args.M, spec, grid=grid, threads=_threads(args)).to_dict()
    return _result("Schwarz bound", report)


def cmd_bridge(args):
    """Real-line solution on [0, R0] with the real integral-equation defect."""
    spec = _load_problem(args)
    cfg = _solver_config(args, spec)
    sol = bridge_solve(spec, cfg, n_x=args.n_x, threads=_threads(args), verbose=args.verbose)
    table = pd.DataFrame({"x": sol.xs, "u": sol.us, "defect": sol.defects})
    report = {
        "q": spec.order,
        "b": spec.b.real,
        "R0": sol.R0,
        "volterra_residual": sol.volterra_residual,
        "symmetric": sol.symmetric,
        "max_imag": sol.imag_max,
        "converged": sol.converged,
        "status": sol.solution.status,
    }
    code = EXIT_OK if sol.converged else EXIT_NONCONVERGENCE
    return _result("Real-line solution", report, table, code=code)


def cmd_check(args):
    """Compatibility, analyticity spot check and the naive invariance bound."""
    spec = _load_problem(args)
    iv = check_condition_iv(spec)
    report = {
        "condition_iii": iv["condition_iii"],
        "condition_iv": iv["pass"],
        "observed_limit": iv["observed_limit"],
        "target": iv["target"],
    }
    if not iv["condition_iii"]:
        report["error"] = iv["error"]
        return _result("Problem check", report, code=EXIT_SINGULARITY)

    report["cauchy_riemann_defect"] = cauchy_riemann_defect(spec)
    grid = _grid(args, spec, "torus", (DEFAULT_TORUS_GRID, DEFAULT_TORUS_GRID))
    m_sup = estimate_M(spec, gridN=grid, centered=False, threads=_threads(args))["M"]
    naive = naive_invariance_bound(spec, m_sup)
    report.update({"sup_F": m_sup, "naive_bound": naive["bound"], "naive_bound_sufficient": naive["sufficient"]})
    code = EXIT_OK if iv["pass"] else EXIT_CONDITION_IV
    return _result("Problem check", report, code=code)


COMMANDS = {
    "ops": cmd_ops,
    "radius": cmd_radius,
    "solve": cmd_solve,
    "classify": cmd_classify,
    "schwarz": cmd_schwarz,
    "bridge": cmd_bridge,
    "check": cmd_check,
}


def _json_default(value):
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    raise TypeError(f"cannot serialise {type(value).__name__}")


def report_frame(report):
    """One-row table of the scalar report entries; complex values split in re/im."""
    row = {}
    for key, value in report.items():
        if isinstance(value, (complex, np.complexfloating)):
            row[f"{key}_re"], row[f"{key}_im"] = complex(value).real, complex(value).imag
        elif isinstance(value, tuple) and all(isinstance(v, complex) for v in value):
            for i, v in enumerate(value):
                row[f"{key}_{i}_re"], row[f"{key}_{i}_im"] = v.real, v.imag
        elif isinstance(value, (list, dict, tuple)):
            continue
        else:
            row[key] = value
    return pd.DataFrame([row])


def emit(args, result, stream=None):
    stream = stream or sys.stdout
    table = result["table"]
    report = result["report"]

    if args.out and table is not None:
        table.to_csv(args.out, index=False, float_format=CSV_FLOAT_FORMAT)

    if args.format == "csv":
        frame = table if table is not None and not args.out else report_frame(report)
        stream.write(frame.to_csv(index=False, float_format=CSV_FLOAT_FORMAT))
    elif args.format == "json":
        payload = {"command": args.command, "report": report}
        if table is not None:
            payload["table"] = table.to_dict(orient="list")
        stream.write(json.dumps(payload, default=_json_default, indent=2, sort_keys=True) + "\n")
    else:
        print_report(result["title"], {k: v for k, v in report.items() if k != "coefficients"}, file=stream)
        if result["coefficients"] is not None:
            print_coefficients(result["coefficients"], file=stream)
        if table is not None and result["show_table"] and not args.out:
            stream.write("\n")
            rows = [[f"{v:.12g}" for v in row] for row in table.itertuples(index=False)]
            for line in table_lines(list(table.columns), rows):
                print(line, file=stream)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--spec", help="JSON problem-spec file")
    common.add_argument("--out", help="Write the result table as CSV to this file")
    common.add_argument("--format", choices=("report", "csv", "json"), default="report")
    common.add_argument("--threads", type=int, default=None, help="Worker threads (CFDE_THREADS)")
    common.add_argument("--grid", default=None, help="Sampling grid NxM (CFDE_GRID)")
    common.add_argument("--n-quad", dest="n_quad", type=int, default=None)
    common.add_argument("--tol", type=float, default=None)
    common.add_argument("--max-iter", dest="max_iter", type=int, default=None)
    common.add_argument("--degree", type=int, default=None)
    common.add_argument("--damping", type=float, default=None)
    common.add_argument("--verbose", action="store_true", help="Diagnostics on stderr")

    parser = argparse.ArgumentParser(
        prog="cfde",
        description="Complex fractional initial value problems: operators, existence radius, solver, certificates",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    ops = sub.add_parser("ops", parents=[common], help="Apply fractional operators")
    ops.add_argument("--op", choices=("I", "D", "DI", "ID"), required=True)
    ops.add_argument("--q", type=float, required=True)
    ops.add_argument("--expr", help="Function of z")
    ops.add_argument("--coeffs", help="Comma-separated power-series coefficients a0,a1,...")
    ops.add_argument("--points", nargs="+", required=True, help="Evaluation points, e.g. 1 0.5i -0.2+0.1i")

    sub.add_parser("radius", parents=[common], help="Sup bound M and existence radius R0")
    sub.add_parser("solve", parents=[common], help="Solve by Picard iteration")
    sub.add_parser("classify", parents=[common], help="Univalence / starlikeness certificates")

    schwarz = sub.add_parser("schwarz", parents=[common], help="Two-variable Schwarz bound check")
    schwarz.add_argument("--g", required=True, help="g(z, t)")
    schwarz.add_argument("--M", type=float, required=True)
    schwarz.add_argument("--R", type=float, default=1.0)
    schwarz.add_argument("--r", type=float, default=1.0)
    schwarz.add_argument("--b", default="0")

    bridge = sub.add_parser("bridge", parents=[common], help="Real-line solution on [0, R0]")
    bridge.add_argument("--n-x", dest="n_x", type=int, default=101)

    sub.add_parser("check", parents=[common], help="Compatibility and analyticity checks")
    return parser


def main(argv=None, stream=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        result = COMMANDS[args.command](args)
    except ConditionIVViolation as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONDITION_IV
    except SingularityError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_SINGULARITY
    except (ExprSyntaxError, SpecFileError, DomainError, QuadratureError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT

    emit(args, result, stream)
    return result["code"]


if __name__ == "__main__":
    sys.exit(main())
