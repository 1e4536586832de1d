"""Command-line front end: every subcommand is a thin adapter over the library.

Exit codes: 0 success, 2 usage error, 1 runtime failure.  Every run emits a
metadata header (version, seed, parameters) into the output's comment region.
A config file (JSON or key=value lines) may preset any flag; explicit flags
win.  PADIC_LAB_SEED provides the default seed.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .fit import DEFAULT_B_GRID, fit_padic, load_series
from .grassmann import bra_comparison, op_symbols, scs_bracket, scs_structure_report
from .jackson import SeriesSpec, jackson_integral, padic_correspondence_check, qq_series, shell_sum_oracle
from .market import MarketConfig, simulate_market
from .operators import (
    car_residuals,
    classify_operators,
    creation_annihilation,
    gamma5,
    gamma5_identity_residual,
    hamiltonian_dense,
)
from .output import format_number, metadata_lines, polyline_svg, write_csv, write_json
from .padic import digits, padic_norm
from .qcalc import QParams, check_algebra_relations, d_q, d_rq
from .waves import (
    PatternKind,
    WaveSeries,
    WaveSpec,
    delay_embed,
    envelope_compose,
    f_b_map,
    pattern,
    random_series,
    wave_series,
)

_EXPR_NAMES = {
    "sin": math.sin, "cos": math.cos, "tan": math.tan,
    "sinh": math.sinh, "cosh": math.cosh, "tanh": math.tanh,
    "exp": math.exp, "log": math.log, "sqrt": math.sqrt,
    "abs": abs, "pow": pow, "pi": math.pi, "e": math.e,
}


def compile_expr(expr: str, var: str = "x"):
    """Compile a one-variable arithmetic expression with a whitelisted namespace."""
    try:
        code = compile(expr, "<expr>", "eval")
    except SyntaxError as exc:
        raise ValueError(f"bad expression {expr!r}: {exc}") from None
    for name in code.co_names:
        if name != var and name not in _EXPR_NAMES:
            raise ValueError(f"unknown name {name!r} in expression")

    def fn(value: float) -> float:
        return float(eval(code, {"__builtins__": {}}, {**_EXPR_NAMES, var: value}))

    return fn


def _parse_base(text: str) -> int | Fraction:
    frac = Fraction(text)
    return int(frac) if frac.denominator == 1 else frac


def _parse_vec3(text: str) -> tuple[float, float, float]:
    parts = [float(v) for v in text.split(",")]
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("expected three comma-separated values plus,minus,z")
    return parts[0], parts[1], parts[2]


def _default_seed() -> int:
    return int(os.environ.get("PADIC_LAB_SEED", "0"))


def _load_config(path: str) -> dict:
    text = Path(path).read_text()
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return json.load(open(path))
    out: dict[str, object] = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"config line without '=': {line!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def _emit_series(args, series: WaveSeries, command: str, params: dict) -> None:
    meta = metadata_lines(command, params, __version__)
    columns = {"r": series.r, "value": series.values}
    if getattr(args, "format", "csv") == "json":
        payload = {"r": series.r.tolist(), "value": series.values.tolist()}
        _with_stream(args.out, lambda s: write_json(s, payload, _meta_dict(command, params)))
    else:
        _with_stream(args.out, lambda s: write_csv(s, columns, meta))
    if getattr(args, "svg", None):
        Path(args.svg).write_text(
            polyline_svg(series.r, series.values, title=command, meta=meta)
        )
    if getattr(args, "plot", None):
        from .plots import render_series

        render_series(series.r, series.values, args.plot, title=command)


def _meta_dict(command: str, params: dict) -> dict:
    return {"tool": f"padiclab v{__version__}", "command": command, **params}


def _with_stream(out: str | None, writer) -> None:
    if out in (None, "-"):
        writer(sys.stdout)
    else:
        with open(out, "w", newline="") as fh:
            writer(fh)


def _print_record(command: str, params: dict, record: dict) -> None:
    for line in metadata_lines(command, params, __version__):
        print(line)
    for key, value in record.items():
        if isinstance(value, (int, float, np.integer, np.floating)):
            print(f"{key} = {format_number(value)}")
        else:
            print(f"{key} = {value}")


# ---------------------------------------------------------------- subcommands


def cmd_expand(args) -> int:
    d = digits(args.n, args.base, strict=args.strict)
    _print_record("expand", {"n": args.n, "base": args.base}, {
        "digits": ",".join(str(x) for x in d.digits),
        "valuation": "undefined" if d.valuation is None else d.valuation,
    })
    return 0


def cmd_norm(args) -> int:
    value = Fraction(args.value)
    nu, norm = padic_norm(value, args.p)
    _print_record("norm", {"value": args.value, "p": args.p}, {
        "valuation": "undefined" if nu is None else nu,
        "norm": norm,
    })
    return 0


def cmd_map(args) -> int:
    spec = WaveSpec(base=args.base, b_frac=args.b, n_digits=args.n)
    value = f_b_map(args.r, spec)
    for line in metadata_lines("map", {"base": args.base, "b": args.b, "r": args.r}, __version__):
        print(line)
    print(format_number(value))
    return 0


def cmd_wave(args) -> int:
    spec = WaveSpec(
        base=args.base, b_frac=args.b, n_digits=args.n,
        r_start=args.r_start, r_stop=args.r_stop,
    )
    params = {"base": args.base, "b": args.b, "n": args.n}
    if args.random:
        series = random_series(spec, args.random, args.seed)
        params.update({"random_steps": args.random, "seed": args.seed})
    else:
        series = wave_series(spec)
        start, stop = spec.resolved_range()
        params.update({"r_start": start, "r_stop": stop})
    _emit_series(args, series, "wave", params)
    return 0


def cmd_pattern(args) -> int:
    kind = PatternKind(args.kind)
    spec = WaveSpec(base=args.base, b_frac=args.b, n_digits=args.n)
    series = pattern(kind, spec, trend=args.trend, substeps=args.substeps)
    params = {"kind": args.kind, "base": args.base, "b": args.b,
              "trend": args.trend, "substeps": args.substeps}
    _emit_series(args, series, "pattern", params)
    return 0


def cmd_envelope(args) -> int:
    g = compile_expr(args.expr, var="t")
    ts = np.linspace(args.t_start, args.t_stop, args.samples)
    samples = np.array([g(t) for t in ts])
    spec = WaveSpec(base=args.base, b_frac=args.b, n_digits=args.n)
    series = envelope_compose(samples, spec, args.scale)
    params = {"expr": args.expr, "t_start": args.t_start, "t_stop": args.t_stop,
              "samples": args.samples, "scale": args.scale,
              "base": args.base, "b": args.b}
    _emit_series(args, series, "envelope", params)
    return 0


def cmd_qderiv(args) -> int:
    f = compile_expr(args.expr)
    params = {"expr": args.expr, "x": args.x, "q": args.q}
    if args.r is not None:
        value = d_rq(f, args.x, args.r, args.q)
        params["r"] = args.r
    else:
        value = d_q(f, args.x, args.q)
    for line in metadata_lines("qderiv", params, __version__):
        print(line)
    print(format_number(value))
    return 0


def cmd_jackson(args) -> int:
    f = compile_expr(args.expr)
    value = jackson_integral(f, args.c, args.q, args.tol)
    params = {"expr": args.expr, "c": args.c, "q": args.q, "tol": args.tol}
    record = {"jackson_integral": value}
    if args.padic_check is not None:
        s = args.padic_check
        residual = padic_correspondence_check(s, int(round(1.0 / args.q)))
        record["padic_shell_sum"] = shell_sum_oracle(s, int(round(1.0 / args.q)))
        record["padic_residual"] = residual
    _print_record("jackson", params, record)
    return 0


def cmd_qqseries(args) -> int:
    f = compile_expr(args.expr)
    spec = SeriesSpec(c=args.c, b_coef=args.b, q=args.q,
                      m_max=args.m_max, n_max=args.n_max, tol=args.tol)
    value = qq_series(f, spec)
    _print_record(
        "qqseries",
        {"expr": args.expr, "c": args.c, "q": args.q, "b": args.b,
         "m_max": args.m_max, "n_max": args.n_max},
        {"qq_series": value},
    )
    return 0


def cmd_algebra_check(args) -> int:
    qp = QParams(q=args.q, r=args.r)
    report = check_algebra_relations(args.degree, qp)
    _print_record(
        "algebra-check",
        {"degree": args.degree, "q": args.q, "r": args.r},
        {
            "ladder_plus_residual": report.ladder_plus_residual,
            "ladder_minus_residual": report.ladder_minus_residual,
            "commutator_residual": report.commutator_residual,
            "paper_rhs_deviation": report.paper_rhs_deviation,
            "notes": "; ".join(report.notes),
        },
    )
    return 0


def cmd_operators(args) -> int:
    params = {"sites": args.sites, "W": args.w, "U": args.u, "mu": args.mu}
    for line in metadata_lines("operators", params, __version__):
        print(line)
    np.set_printoptions(linewidth=120)
    for sigma in ("up", "down"):
        for dagger in (True, False):
            name = f"a_{sigma}{'+' if dagger else ''}"
            print(f"{name} =")
            print(creation_annihilation(sigma, dagger))
    print("gamma5 =")
    print(gamma5())
    print(f"gamma5_identity_residual = {format_number(gamma5_identity_residual())}")
    for relation, residual in car_residuals().items():
        print(f"CAR {relation} residual = {format_number(residual)}")
    fermionic, bosonic = classify_operators()
    print(f"fermionic ({len(fermionic)}): {' '.join(name for name, _ in fermionic)}")
    print(f"bosonic ({len(bosonic)}): {' '.join(name for name, _ in bosonic)}")
    if args.sites:
        ham = hamiltonian_dense(args.sites, args.w, args.u, args.mu)
        eigs = np.linalg.eigvalsh(ham)
        print("spectrum = " + ",".join(format_number(v) for v in eigs))
    return 0


def cmd_scs(args) -> int:
    bracket = scs_bracket(args.e, args.h)
    symbols = op_symbols(args.e, args.h)
    report = scs_structure_report(args.e, args.h)
    bra_cmp = bra_comparison(args.e, args.h)
    record = {
        "ket_bosonic": ",".join(format_number(v) for v in bracket.ket),
        "bra_printed": ",".join(format_number(v) for v in bracket.bra),
        "norm": bracket.norm,
        "E_invariant": symbols.e_invariant,
        "h_invariant": symbols.h_invariant,
        "f4": symbols.f4,
        "Sq+": symbols.sq_plus,
        "Sq-": symbols.sq_minus,
        "Sqz": symbols.sq_z,
        "structure_report": "clean" if not report
        else "; ".join(f"[{d.component}] {d.kind}: {d.detail}" for d in report),
        "bra_adjoint_scalar_deviations": bra_cmp["scalar_deviations"] or "none",
    }
    _print_record("scs", {"E": args.e, "h": args.h}, record)
    return 0


def cmd_simulate(args) -> int:
    cfg = MarketConfig(
        n_agents=args.agents, w_pair=args.w, u_hold=args.u, mu=args.mu,
        beta_temp=args.beta, steps=args.steps, seed=args.seed, init=args.init,
    )
    series = simulate_market(cfg)
    params = {"agents": cfg.n_agents, "W": cfg.w_pair, "U": cfg.u_hold, "mu": cfg.mu,
              "beta": cfg.beta_temp, "steps": cfg.steps, "seed": cfg.seed, "init": cfg.init}
    meta = metadata_lines("simulate", params, __version__)
    columns = {
        "step": series.steps, "n_buy": series.n_buy, "n_sell": series.n_sell,
        "n_hold": series.n_hold, "price": series.price,
    }
    if args.format == "json":
        _with_stream(args.out, lambda s: write_json(
            s, {k: np.asarray(v).tolist() for k, v in columns.items()},
            _meta_dict("simulate", params)))
    else:
        _with_stream(args.out, lambda s: write_csv(s, columns, meta))
    if args.svg:
        Path(args.svg).write_text(polyline_svg(series.steps, series.price,
                                               title="simulate", meta=meta))
    if args.plot:
        from .plots import render_series

        render_series(series.steps, series.price, args.plot,
                      title="market price", xlabel="step", ylabel="price")
    return 0


def cmd_fit(args) -> int:
    series = load_series(args.input, column=args.column)
    bases = [_parse_base(b) for b in args.bases.split(",")]
    result = fit_padic(
        series,
        bases=bases,
        b_grid=(args.b_min, args.b_max, args.b_step),
        t0_range=range(0, args.t0_max),
    )
    params = {"input": args.input, "column": args.column, "bases": args.bases,
              "b_grid": f"[{args.b_min},{args.b_max}]/{args.b_step}", "t0_max": args.t0_max}
    _with_stream(args.out, lambda s: write_json(s, {"fit": result.as_dict()},
                                                _meta_dict("fit", params)))
    if args.overlay:
        meta = metadata_lines("fit-overlay", params, __version__)
        with open(args.overlay, "w", newline="") as fh:
            write_csv(fh, {"t": np.arange(len(series)),
                           "price": series.prices, "fitted": result.fitted}, meta)
    if args.svg:
        meta = metadata_lines("fit", params, __version__)
        Path(args.svg).write_text(polyline_svg(
            np.arange(len(series)), series.prices, title="fit", meta=meta))
    if args.plot:
        from .plots import render_series

        render_series(np.arange(len(series)), series.prices, args.plot,
                      title=f"fit rmse={result.rmse:.4g}", xlabel="t", ylabel="price",
                      overlay=(result.fitted, "fitted"))
    return 0


def cmd_embed(args) -> int:
    series = load_series(args.input, column=args.column)
    vectors = delay_embed(series.prices, args.m, args.stride)
    params = {"input": args.input, "column": args.column, "m": args.m, "stride": args.stride}
    meta = metadata_lines("embed", params, __version__)
    columns = {"i": np.arange(len(vectors))}
    for k in range(args.m):
        columns[f"x{k}"] = vectors[:, k]
    _with_stream(args.out, lambda s: write_csv(s, columns, meta))
    return 0


# -------------------------------------------------------------------- parser


def _add_output_flags(sp, svg=True, plot=True) -> None:
    sp.add_argument("--out", "-o", default=None, help="output path (default stdout)")
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    if svg:
        sp.add_argument("--svg", default=None, help="also write a hermetic SVG plot")
    if plot:
        sp.add_argument("--plot", default=None, help="also render a matplotlib figure (png/pdf)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="padiclab",
        description="p-adic price maps, q-calculus, and the four-state trader market",
    )
    parser.add_argument("--version", action="version", version=f"padiclab {__version__}")
    parser.add_argument("--config", default=None, help="JSON or key=value file presetting flags")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("expand", help="base-p digit expansion of an integer")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--base", type=int, required=True)
    sp.add_argument("--strict", action="store_true", help="require a prime base")
    sp.set_defaults(func=cmd_expand)

    sp = sub.add_parser("norm", help="p-adic valuation and norm of a rational")
    sp.add_argument("--value", required=True, help="integer or m/n rational")
    sp.add_argument("--p", type=int, required=True)
    sp.set_defaults(func=cmd_norm)

    sp = sub.add_parser("map", help="evaluate the fractal price map at one r")
    sp.add_argument("--base", type=_parse_base, required=True)
    sp.add_argument("--b", type=float, required=True)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--n", type=int, default=6)
    sp.set_defaults(func=cmd_map)

    sp = sub.add_parser("wave", help="fractal wave series over an r range")
    sp.add_argument("--base", type=_parse_base, required=True)
    sp.add_argument("--b", type=float, required=True)
    sp.add_argument("--n", type=int, default=6, help="digit span (range [0, base^n))")
    sp.add_argument("--r-start", type=int, default=0)
    sp.add_argument("--r-stop", type=int, default=None)
    sp.add_argument("--random", type=int, default=0,
                    help="emit this many uniform random draws instead of the range")
    sp.add_argument("--seed", type=int, default=_default_seed())
    _add_output_flags(sp)
    sp.set_defaults(func=cmd_wave)

    sp = sub.add_parser("pattern", help="Elliott-style preset built from digit windows")
    sp.add_argument("--kind", choices=[k.value for k in PatternKind], required=True)
    sp.add_argument("--base", type=_parse_base, default=3)
    sp.add_argument("--b", type=float, default=0.5)
    sp.add_argument("--n", type=int, default=6)
    sp.add_argument("--trend", type=int, choices=(1, -1), default=1)
    sp.add_argument("--substeps", type=int, default=8)
    _add_output_flags(sp)
    sp.set_defaults(func=cmd_pattern)

    sp = sub.add_parser("envelope", help="map a sampled signal through f_b")
    sp.add_argument("--expr", default="sin(t)")
    sp.add_argument("--t-start", type=float, default=0.0)
    sp.add_argument("--t-stop", type=float, default=4 * math.pi)
    sp.add_argument("--samples", type=int, default=400)
    sp.add_argument("--scale", type=float, default=100.0)
    sp.add_argument("--base", type=_parse_base, default=3)
    sp.add_argument("--b", type=float, default=0.5)
    sp.add_argument("--n", type=int, default=6)
    _add_output_flags(sp)
    sp.set_defaults(func=cmd_envelope)

    sp = sub.add_parser("qderiv", help="quantum derivative D_q (or D_rq with --r)")
    sp.add_argument("--expr", required=True)
    sp.add_argument("--x", type=float, required=True)
    sp.add_argument("--q", type=float, required=True)
    sp.add_argument("--r", type=float, default=None)
    sp.set_defaults(func=cmd_qderiv)

    sp = sub.add_parser("jackson", help="Jackson integral over [0, c]")
    sp.add_argument("--expr", required=True)
    sp.add_argument("--c", type=float, default=1.0)
    sp.add_argument("--q", type=float, required=True)
    sp.add_argument("--tol", type=float, default=1e-12)
    sp.add_argument("--padic-check", type=int, default=None, metavar="S",
                    help="compare x^S against the p-adic shell sum at p = 1/q")
    sp.set_defaults(func=cmd_jackson)

    sp = sub.add_parser("qqseries", help="deformed exponential double series")
    sp.add_argument("--expr", required=True)
    sp.add_argument("--c", type=float, default=1.0)
    sp.add_argument("--q", type=float, required=True)
    sp.add_argument("--b", type=float, default=0.0)
    sp.add_argument("--m-max", type=int, default=8)
    sp.add_argument("--n-max", type=int, default=12)
    sp.add_argument("--tol", type=float, default=1e-9)
    sp.set_defaults(func=cmd_qqseries)

    sp = sub.add_parser("algebra-check", help="deformed su(2) ladder residuals on monomials")
    sp.add_argument("--degree", type=int, default=5)
    sp.add_argument("--q", type=float, required=True)
    sp.add_argument("--r", type=float, default=None)
    sp.set_defaults(func=cmd_algebra_check)

    sp = sub.add_parser("operators", help="X-operator expansions, CAR residuals, spectra")
    sp.add_argument("--sites", type=int, default=0)
    sp.add_argument("--w", type=float, default=1.0)
    sp.add_argument("--u", type=float, default=1.0)
    sp.add_argument("--mu", type=float, default=0.0)
    sp.set_defaults(func=cmd_operators)

    sp = sub.add_parser("scs", help="supercoherent-state symbols and structure report")
    sp.add_argument("--e", type=_parse_vec3, default=(0.0, 0.0, 0.0),
                    metavar="P,M,Z", help="E vector components plus,minus,z")
    sp.add_argument("--h", type=_parse_vec3, default=(0.0, 0.0, 0.0), metavar="P,M,Z")
    sp.set_defaults(func=cmd_scs)

    sp = sub.add_parser("simulate", help="seeded Metropolis market run")
    sp.add_argument("--agents", type=int, default=64)
    sp.add_argument("--w", type=float, default=1.0)
    sp.add_argument("--u", type=float, default=1.0)
    sp.add_argument("--mu", type=float, default=0.0)
    sp.add_argument("--beta", type=float, default=1.0)
    sp.add_argument("--steps", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=_default_seed())
    sp.add_argument("--init", choices=("empty", "random"), default="empty")
    _add_output_flags(sp)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("fit", help="grid-search fit of A f_b(t+t0) + C to a CSV column")
    sp.add_argument("--input", required=True)
    sp.add_argument("--column", default="close")
    sp.add_argument("--bases", default="2,3,5")
    sp.add_argument("--b-min", type=float, default=DEFAULT_B_GRID[0])
    sp.add_argument("--b-max", type=float, default=DEFAULT_B_GRID[1])
    sp.add_argument("--b-step", type=float, default=DEFAULT_B_GRID[2])
    sp.add_argument("--t0-max", type=int, default=81)
    sp.add_argument("--out", "-o", default=None)
    sp.add_argument("--overlay", default=None, help="CSV path for the fitted overlay")
    sp.add_argument("--svg", default=None)
    sp.add_argument("--plot", default=None)
    sp.set_defaults(func=cmd_fit)

    sp = sub.add_parser("embed", help="delay-embed a CSV column into m-vectors")
    sp.add_argument("--input", required=True)
    sp.add_argument("--column", default="close")
    sp.add_argument("--m", type=int, default=3)
    sp.add_argument("--stride", type=int, default=1)
    sp.add_argument("--out", "-o", default=None)
    sp.set_defaults(func=cmd_embed)

    return parser


def _validate(parser: argparse.ArgumentParser, args) -> None:
    base = getattr(args, "base", None)
    if base is not None and float(base) <= 1.0:
        parser.error("base must exceed 1")
    if getattr(args, "b", None) is not None and args.command in (
        "map", "wave", "pattern", "envelope"
    ) and args.b <= 0:
        parser.error("fractal exponent b must be positive")


def dispatch(argv: list[str]) -> int:
    parser = build_parser()
    # a light pre-pass so --config can preset subcommand defaults
    if "--config" in argv:
        idx = argv.index("--config")
        try:
            config = _load_config(argv[idx + 1])
        except (OSError, ValueError, IndexError, json.JSONDecodeError) as exc:
            print(f"error: cannot read config: {exc}", file=sys.stderr)
            return 2
        for action in parser._subparsers._group_actions:
            for sp in action.choices.values():
                by_dest = {a.dest: a for a in sp._actions}
                overrides = {}
                for key, value in config.items():
                    act = by_dest.get(key)
                    if act is None:
                        continue
                    if isinstance(value, str):
                        if isinstance(act.default, bool):
                            value = value.lower() in ("1", "true", "yes", "on")
                        elif act.type is not None:
                            value = act.type(value)
                    act.required = False  # the config satisfies it
                    overrides[key] = value
                sp.set_defaults(**overrides)
    args = parser.parse_args(argv)
    _validate(parser, args)
    try:
        return args.func(args)
    except BrokenPipeError:
        return 1
    except Exception as exc:  # runtime failure -> exit 1 with message
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
