"""Command-line front end.

Subcommands:

* ``eval``   — evaluate one operator and print a single JSON object.
* ``verify`` — run theorem-verification sweeps, write CSV/JSON reports.
* ``table``  — tabulate c_q(alpha) or M_q(alpha, a, b) surfaces as CSV.

Exit codes: 0 verified/ok, 1 counterexample found, 2 usage error,
3 domain/window error.  QFRAC_SEED overrides the default --seed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .core import QPowerConfig, nabla_q_derivative, nabla_q_integral, q_bracket, q_gamma, q_pow_frac
from .errors import ConfigError, QCalcError
from .fracops import caputo_q_derivative, q_frac_integral, rl_q_derivative
from .grid import GridFunction, QParams, point_value
from .monotone import c_q
from .mvt import m_q
from .oracle import oracle_frac_integral, oracle_q_gamma, oracle_q_pow_frac, oracle_rl_derivative
from .sweep import ALL_THEOREMS, SweepConfig, run_sweep, write_reports

EXIT_OK = 0
EXIT_COUNTEREXAMPLE = 1
EXIT_USAGE = 2
EXIT_DOMAIN = 3


def parse_grid_function(spec: str) -> GridFunction:
    """Parse --f: 'tabulated:n_lo:v0,v1,...', 'const:c:n_lo:n_hi',
    'identity:n_lo:n_hi' (values filled later), or a JSON file path
    {"n_lo": int, "values": [...]}."""
    if spec.startswith("tabulated:"):
        parts = spec.split(":", 2)
        if len(parts) != 3:
            raise ConfigError("--f", f"malformed tabulated spec '{spec}'")
        try:
            n_lo = int(parts[1])
            values = tuple(float(v) for v in parts[2].split(","))
        except ValueError as exc:
            raise ConfigError("--f", f"malformed tabulated spec '{spec}': {exc}") from exc
        return GridFunction(n_lo, n_lo + len(values) - 1, values)
    path = Path(spec)
    if path.suffix == ".json" or path.exists():
        try:
            data = json.loads(path.read_text())
            return GridFunction(
                int(data["n_lo"]),
                int(data["n_lo"]) + len(data["values"]) - 1,
                tuple(float(v) for v in data["values"]),
            )
        except (OSError, KeyError, ValueError, TypeError) as exc:
            raise ConfigError("--f", f"cannot load grid function from '{spec}': {exc}") from exc
    raise ConfigError("--f", f"unrecognized function spec '{spec}'")


def _require(args, *names):
    for name in names:
        if getattr(args, name.replace("-", "_"), None) is None:
            raise ConfigError(f"--{name}", f"required for --op {args.op}")


def cmd_eval(args) -> int:
    params = QParams(args.q, args.alpha)
    cfg = QPowerConfig()
    out: dict = {}
    oracle_value = None

    if args.op == "cq":
        _require(args, "alpha")
        out["value"] = c_q(args.alpha, args.q)
    elif args.op == "qbracket":
        _require(args, "x")
        out["value"] = q_bracket(args.x, args.q)
    elif args.op == "qgamma":
        _require(args, "x")
        res = q_gamma(args.x, args.q, cfg)
        out["value"] = res.value
        out["err_bound"] = res.trunc_error_bound
        if args.verify:
            oracle_value = oracle_q_gamma(args.x, args.q)
    elif args.op == "qpow":
        _require(args, "alpha", "t-exp", "s-exp")
        t = point_value(args.t_exp, params)
        s = point_value(args.s_exp, params)
        res = q_pow_frac(t, s, args.alpha, args.q, cfg)
        out["value"] = res.value
        out["err_bound"] = res.trunc_error_bound
        if args.verify:
            oracle_value = oracle_q_pow_frac(t, s, args.alpha, args.q)
    elif args.op == "mq":
        _require(args, "alpha", "n0", "t-exp")
        out["value"] = m_q(args.alpha, args.n0, args.t_exp, params, cfg)
    elif args.op == "nabla-deriv":
        _require(args, "f", "t-exp")
        out["value"] = nabla_q_derivative(parse_grid_function(args.f), args.t_exp, params)
    elif args.op == "nabla-integral":
        _require(args, "f", "n0", "t-exp")
        out["value"] = nabla_q_integral(parse_grid_function(args.f), args.n0, args.t_exp, params)
    elif args.op == "frac-integral":
        _require(args, "f", "alpha", "n0", "t-exp")
        f = parse_grid_function(args.f)
        out["value"] = q_frac_integral(f, args.n0, args.alpha, args.t_exp, params, cfg)
        if args.verify:
            oracle_value = oracle_frac_integral(f, args.n0, args.alpha, args.t_exp, params)
    elif args.op == "rl-deriv":
        _require(args, "f", "alpha", "n0", "t-exp")
        f = parse_grid_function(args.f)
        out["value"] = rl_q_derivative(f, args.n0, args.alpha, args.t_exp, params, cfg)
        if args.verify and 0.0 < args.alpha < 1.0:
            oracle_value = oracle_rl_derivative(f, args.n0, args.alpha, args.t_exp, params)
    elif args.op == "caputo":
        _require(args, "f", "alpha", "n0", "t-exp")
        f = parse_grid_function(args.f)
        out["value"] = caputo_q_derivative(f, args.n0, args.alpha, args.t_exp, params, cfg)
    else:  # pragma: no cover - argparse choices guard this
        raise ConfigError("--op", f"unknown op '{args.op}'")

    exit_code = EXIT_OK
    if oracle_value is not None:
        rel = abs(out["value"] - oracle_value) / max(abs(oracle_value), 1e-300)
        out["oracle_value"] = oracle_value
        out["rel_diff"] = rel
        if rel > args.tol:
            out["oracle_agreement"] = False
            exit_code = EXIT_COUNTEREXAMPLE
        else:
            out["oracle_agreement"] = True
    print(json.dumps(out))
    return exit_code


def cmd_verify(args) -> int:
    if args.config:
        config = SweepConfig.from_json(args.config)
    else:
        seed = args.seed if args.seed is not None else int(os.environ.get("QFRAC_SEED", "42"))
        kwargs = {"seed": seed}
        if args.q is not None:
            kwargs["q_values"] = (args.q,)
        if args.alpha is not None:
            kwargs["alpha_values"] = (args.alpha,)
        if args.samples is not None:
            kwargs["samples_per_cell"] = args.samples
        if args.window is not None:
            kwargs["window_sizes"] = (args.window,)
        if args.tol is not None:
            kwargs["residual_tol"] = args.tol
        if args.n0 is not None:
            kwargs["n0"] = args.n0
        config = SweepConfig(**kwargs)
    theorems = ALL_THEOREMS if args.theorem == "all" else (args.theorem,)
    result = run_sweep(config, theorems)
    paths = write_reports(result, args.out)
    summary = result.summary
    print(
        f"rows={summary['total_rows']} counterexamples={summary['counterexamples']} "
        f"csv={paths['csv']} summary={paths['summary']}"
    )
    return EXIT_COUNTEREXAMPLE if result.counterexamples else EXIT_OK


def _float_range(lo: float, hi: float, steps: int) -> list[float]:
    if steps < 1:
        raise ConfigError("--steps", f"must be >= 1, got {steps}")
    if hi < lo:
        raise ConfigError("--alpha-to", f"empty range [{lo}, {hi}]")
    return [lo + (hi - lo) * k / steps for k in range(steps + 1)]


def cmd_table(args) -> int:
    qs = sorted(args.q_list)
    if not qs:
        raise ConfigError("--q", "need at least one q value")
    for q in qs:
        if not (0.0 < q < 1.0):
            raise ConfigError("--q", f"q must lie in (0,1), got {q}")
    alphas = _float_range(args.alpha_from, args.alpha_to, args.steps)
    lines = []
    if args.fn == "cq":
        lines.append("q,alpha,value")
        for q in qs:
            for alpha in alphas:
                lines.append(f"{q!r},{alpha!r},{c_q(alpha, q)!r}")
    else:  # mq
        if not args.na_list or not args.nb_list:
            raise ConfigError("--na", "M_q tables need --na and --nb exponent lists")
        lines.append("q,alpha,n_a,n_b,value")
        for q in qs:
            params = QParams(q)
            for alpha in alphas:
                if not (0.0 < alpha < 1.0):
                    raise ConfigError("--alpha-from", f"M_q needs 0 < alpha < 1, got {alpha}")
                for n_a in sorted(args.na_list):
                    for n_b in sorted(args.nb_list):
                        v = m_q(alpha, n_a, n_b, params)
                        lines.append(f"{q!r},{alpha!r},{n_a},{n_b},{v!r}")
    print("\n".join(lines))
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qnabla",
        description="nabla q-calculus operators and theorem verification on the geometric grid",
    )
    parser.add_argument("--version", action="version", version=f"qnabla {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="evaluate one operator, print JSON")
    p_eval.add_argument("--op", required=True, choices=[
        "cq", "qbracket", "qgamma", "qpow", "mq",
        "nabla-deriv", "nabla-integral", "frac-integral", "rl-deriv", "caputo",
    ])
    p_eval.add_argument("--q", type=float, required=True)
    p_eval.add_argument("--alpha", type=float)
    p_eval.add_argument("--x", type=float)
    p_eval.add_argument("--n0", type=int, help="anchor exponent (a = q^n0)")
    p_eval.add_argument("--t-exp", dest="t_exp", type=int, help="evaluation exponent")
    p_eval.add_argument("--s-exp", dest="s_exp", type=int, help="second exponent for qpow")
    p_eval.add_argument("--f", help="grid function: tabulated:n_lo:v0,v1,... or JSON path")
    p_eval.add_argument("--verify", action="store_true", help="cross-check against the oracle path")
    p_eval.add_argument("--tol", type=float, default=1e-11, help="oracle agreement tolerance")
    p_eval.set_defaults(func=cmd_eval)

    p_verify = sub.add_parser("verify", help="run verification sweeps, write reports")
    p_verify.add_argument("--theorem", default="all", choices=("all",) + ALL_THEOREMS)
    p_verify.add_argument("--config", help="JSON sweep config path")
    p_verify.add_argument("--q", type=float, help="single q override")
    p_verify.add_argument("--alpha", type=float, help="single alpha override")
    p_verify.add_argument("--window", type=int, help="single window size override")
    p_verify.add_argument("--samples", type=int, help="samples per cell override")
    p_verify.add_argument("--n0", type=int, help="anchor exponent override")
    p_verify.add_argument("--seed", type=int, default=None,
                          help="master seed (default: QFRAC_SEED env var or 42)")
    p_verify.add_argument("--tol", type=float, help="residual tolerance override")
    p_verify.add_argument("--out", default="qnabla-report", help="output directory")
    p_verify.set_defaults(func=cmd_verify)

    p_table = sub.add_parser("table", help="tabulate c_q or M_q as CSV on stdout")
    p_table.add_argument("--fn", required=True, choices=("cq", "mq"))
    p_table.add_argument("--q", dest="q_list", type=float, action="append", required=True,
                         help="repeatable: one q per flag")
    p_table.add_argument("--alpha-from", type=float, required=True)
    p_table.add_argument("--alpha-to", type=float, required=True)
    p_table.add_argument("--steps", type=int, required=True)
    p_table.add_argument("--na", dest="na_list", type=int, action="append", default=[],
                         help="repeatable: anchor exponents for M_q")
    p_table.add_argument("--nb", dest="nb_list", type=int, action="append", default=[],
                         help="repeatable: evaluation exponents for M_q")
    p_table.set_defaults(func=cmd_table)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except QCalcError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


def entry() -> None:  # console-script hook
    sys.exit(main())
