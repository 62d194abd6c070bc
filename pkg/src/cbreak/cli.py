"""Command-line surface: run cases, emit tables, moments, diagnostics.

Exit codes: 0 success, 2 configuration error, 3 solver error, 4 exact
solution unavailable for the requested case.  All CSV output is byte-stable
across repeated runs of the same configuration.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from pathlib import Path

import numpy as np

from cbreak import analysis
from cbreak.model import UnknownCase, load_case
from cbreak.odm import odm_solve
from cbreak.verify import run_all_checks
from cbreak.vim import vim_solve

EXIT_CONFIG = 2
EXIT_SOLVER = 3
EXIT_NO_EXACT = 4


class ConfigError(ValueError):
    pass


def _output_dir(args: argparse.Namespace) -> Path:
    raw = args.output_dir or os.environ.get("CBE_OUTPUT_DIR") or "."
    path = Path(raw)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _methods(name: str) -> tuple[str, ...]:
    if name == "both":
        return ("vim", "odm")
    if name in ("vim", "odm"):
        return (name,)
    raise ConfigError(f"method must be vim, odm or both, got {name!r}")


def _solve(spec, method: str, order: int):
    return vim_solve(spec, order) if method == "vim" else odm_solve(spec, order)


def _times(args: argparse.Namespace) -> list[float]:
    if getattr(args, "times", None):
        return [float(t) for t in args.times]
    if getattr(args, "trange", None):
        start, stop, num = args.trange
        return [float(t) for t in np.linspace(float(start), float(stop), int(num))]
    raise ConfigError("no times given: use --times or --trange")


def _norm_spec(args: argparse.Namespace) -> analysis.NormSpec:
    return analysis.NormSpec(
        mode=args.norm_mode,
        time=args.time,
        horizon=args.horizon if args.horizon is not None else args.time,
        nt=args.nt,
    )


def cmd_run(args: argparse.Namespace) -> int:
    spec = load_case(args.case)
    if args.order < 0:
        raise ConfigError("order must be non-negative")
    out = _output_dir(args)
    manifest = {"case": args.case, "order": args.order, "series": {}}
    for method in _methods(args.method):
        series = _solve(spec, method, args.order)
        dump = series.dump()
        path = out / f"series_{method}.txt"
        path.write_text(dump, encoding="utf-8")
        manifest["series"][method] = {
            "path": path.name,
            "components": len(series.components),
            "sha256": hashlib.sha256(dump.encode("utf-8")).hexdigest(),
        }
    (out / "manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    return 0


def cmd_table(args: argparse.Namespace) -> int:
    spec = load_case(args.case)
    try:
        exact = analysis.exact_reference(spec.label or args.case)
    except UnknownCase:
        print(f"error: no exact solution for case {args.case!r}", file=sys.stderr)
        return EXIT_NO_EXACT
    if not exact.has_concentration:
        print(f"error: no exact concentration for case {args.case!r}", file=sys.stderr)
        return EXIT_NO_EXACT
    times = _times(args)
    orders = [int(n) for n in args.orders]
    if not times or not orders:
        raise ConfigError("times and orders must be non-empty")
    rows = []
    for method in _methods(args.method):
        series = _solve(spec, method, max(orders))
        rows.extend(analysis.error_table(series, exact, times, orders))
    out = _output_dir(args)
    (out / "table.csv").write_text(analysis.render_table_csv(rows), encoding="utf-8")
    return 0


def cmd_moments(args: argparse.Namespace) -> int:
    spec = load_case(args.case)
    times = _times(args)
    try:
        exact = analysis.exact_reference(spec.label or args.case)
    except UnknownCase:
        exact = None
    rows = []
    for method in _methods(args.method):
        series = _solve(spec, method, args.order)
        for j in args.j:
            curve = analysis.moments_of_series(series, int(j))
            for t in times:
                exact_val = None
                if exact is not None and int(j) in exact.moment_indices():
                    try:
                        exact_val = exact.moment(int(j), t)
                    except analysis.OutOfDomain:
                        exact_val = None
                rows.append((t, method, args.order, int(j), curve.eval(t), exact_val))
    out = _output_dir(args)
    (out / "moments.csv").write_text(analysis.render_moments_csv(rows), encoding="utf-8")
    return 0


def _sizes(args: argparse.Namespace) -> np.ndarray:
    start, stop, num = args.sizes
    start, stop, num = float(start), float(stop), int(num)
    if num < 2 or stop <= start or start < 0:
        raise ConfigError("size grid needs 0 <= START < STOP and NUM >= 2")
    return np.linspace(start, stop, num)


def cmd_profile(args: argparse.Namespace) -> int:
    """Concentration curves of the truncations (and the exact solution)."""
    spec = load_case(args.case)
    times = _times(args)
    sizes = _sizes(args)
    orders = [int(n) for n in args.orders]
    try:
        exact = analysis.exact_reference(spec.label or args.case)
    except UnknownCase:
        exact = None
    rows = []
    for method in _methods(args.method):
        series = _solve(spec, method, max(orders))
        for t in times:
            exact_vals = None
            if exact is not None and exact.has_concentration:
                exact_vals = exact.eval_sizes(t, sizes)
            for order in orders:
                values = series.partial_sum(order).eval_sizes(t, sizes)
                for idx, x in enumerate(sizes):
                    e_val = float(exact_vals[idx]) if exact_vals is not None else None
                    rows.append((t, method, order, float(x), float(values[idx]), e_val))
    out = _output_dir(args)
    (out / "profile.csv").write_text(analysis.render_profile_csv(rows), encoding="utf-8")
    return 0


def cmd_components(args: argparse.Namespace) -> int:
    """Per-component concentration curves, for coefficient-difference plots."""
    spec = load_case(args.case)
    times = _times(args)
    sizes = _sizes(args)
    if args.order < 0:
        raise ConfigError("order must be non-negative")
    rows = []
    for method in _methods(args.method):
        series = _solve(spec, method, args.order)
        for t in times:
            for k, comp in enumerate(series.components):
                values = comp.eval_sizes(t, sizes)
                for idx, x in enumerate(sizes):
                    rows.append((t, method, k, float(x), float(values[idx])))
    out = _output_dir(args)
    (out / "components.csv").write_text(
        analysis.render_components_csv(rows), encoding="utf-8"
    )
    return 0


def cmd_converge(args: argparse.Namespace) -> int:
    spec = load_case(args.case)
    i_lo, i_hi = (int(v) for v in args.i)
    if i_lo < 0 or i_hi < i_lo:
        raise ConfigError("index range must satisfy 0 <= lo <= hi")
    ns = _norm_spec(args)
    rows = []
    for method in _methods(args.method):
        series = _solve(spec, method, i_hi + 1)
        gammas = dict(analysis.gamma_ratios(series, ns))
        for i in range(i_lo, i_hi + 1):
            rows.append((i, gammas[i], ns.mode, ns.time))
    out = _output_dir(args)
    (out / "gamma.csv").write_text(analysis.render_gamma_csv(rows), encoding="utf-8")
    return 0


def cmd_bound(args: argparse.Namespace) -> int:
    spec = load_case(args.case)
    try:
        exact = analysis.exact_reference(spec.label or args.case)
    except UnknownCase:
        print(f"error: no exact solution for case {args.case!r}", file=sys.stderr)
        return EXIT_NO_EXACT
    if not exact.has_concentration:
        print(f"error: no exact concentration for case {args.case!r}", file=sys.stderr)
        return EXIT_NO_EXACT
    s = args.time
    horizon = args.horizon if args.horizon is not None else s
    m2_zero = spec.init.total_integral(2).eval(0.0, 0.0)
    m1_zero = spec.init.total_integral(1).eval(0.0, 0.0)
    lipschitz = m1_zero * (1.0 + horizon)
    eta = analysis.contraction_eta(m2_zero, lipschitz, s)
    if not 0.0 < eta < 1.0:
        print(f"error: eta = {eta:.6f} is not a contraction", file=sys.stderr)
        return EXIT_SOLVER
    series = odm_solve(spec, args.order)
    ns = analysis.NormSpec(mode="sup", horizon=horizon, nt=args.nt)
    norm_f1 = analysis.weighted_l1_norm(series.components[1], ns)
    eps_max = 40.0
    times = ns.times()
    rows = []
    for m in range(2, args.order + 1):
        psi = series.partial_sum(m)
        observed = analysis.weighted_l1_norm_of(
            lambda t, x: psi.eval_sizes(t, x) - exact.eval_sizes(t, x),
            times,
            eps_max,
        )
        rows.append((m, eta, analysis.odm_error_bound(m, eta, norm_f1), observed))
    out = _output_dir(args)
    (out / "bound.csv").write_text(analysis.render_bound_csv(rows), encoding="utf-8")
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    spec = load_case(args.case)
    results = run_all_checks(spec, seed=args.seed, samples=args.samples)
    failed = 0
    for res in results:
        status = "PASS" if res.ok else "FAIL"
        print(f"{status} {res.name}: {res.detail}")
        failed += 0 if res.ok else 1
    return 0 if failed == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cbreak",
        description="Series solvers and diagnostics for the collision-induced breakage equation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--case", default="example1", help="built-in label or case file path")
        p.add_argument("--output-dir", default=None, help="defaults to $CBE_OUTPUT_DIR or cwd")

    p_run = sub.add_parser("run", help="solve and dump series components")
    common(p_run)
    p_run.add_argument("--method", default="both", choices=["vim", "odm", "both"])
    p_run.add_argument("--order", type=int, required=True)
    p_run.set_defaults(func=cmd_run)

    p_table = sub.add_parser("table", help="discrete L1 error table against the exact solution")
    common(p_table)
    p_table.add_argument("--method", default="both", choices=["vim", "odm", "both"])
    p_table.add_argument("--times", nargs="+", type=float)
    p_table.add_argument("--trange", nargs=3, metavar=("START", "STOP", "NUM"))
    p_table.add_argument("--orders", nargs="+", type=int, default=[4, 6, 8, 10])
    p_table.set_defaults(func=cmd_table)

    p_mom = sub.add_parser("moments", help="exact series moments vs closed-form moments")
    common(p_mom)
    p_mom.add_argument("--method", default="both", choices=["vim", "odm", "both"])
    p_mom.add_argument("--order", type=int, default=10)
    p_mom.add_argument("--j", nargs="+", type=int, default=[0, 1, 2])
    p_mom.add_argument("--times", nargs="+", type=float)
    p_mom.add_argument("--trange", nargs=3, metavar=("START", "STOP", "NUM"))
    p_mom.set_defaults(func=cmd_moments)

    p_prof = sub.add_parser("profile", help="concentration curves of the truncations")
    common(p_prof)
    p_prof.add_argument("--method", default="both", choices=["vim", "odm", "both"])
    p_prof.add_argument("--orders", nargs="+", type=int, default=[10])
    p_prof.add_argument("--times", nargs="+", type=float)
    p_prof.add_argument("--trange", nargs=3, metavar=("START", "STOP", "NUM"))
    p_prof.add_argument(
        "--sizes", nargs=3, default=["0", "10", "201"], metavar=("START", "STOP", "NUM")
    )
    p_prof.set_defaults(func=cmd_profile)

    p_comp = sub.add_parser("components", help="per-component concentration curves")
    common(p_comp)
    p_comp.add_argument("--method", default="both", choices=["vim", "odm", "both"])
    p_comp.add_argument("--order", type=int, required=True)
    p_comp.add_argument("--times", nargs="+", type=float)
    p_comp.add_argument("--trange", nargs=3, metavar=("START", "STOP", "NUM"))
    p_comp.add_argument(
        "--sizes", nargs=3, default=["0", "10", "201"], metavar=("START", "STOP", "NUM")
    )
    p_comp.set_defaults(func=cmd_components)

    p_conv = sub.add_parser("converge", help="successive component norm ratios")
    common(p_conv)
    p_conv.add_argument("--method", default="vim", choices=["vim", "odm", "both"])
    p_conv.add_argument("--i", nargs=2, type=int, default=[5, 9], metavar=("LO", "HI"))
    p_conv.add_argument("--time", type=float, default=1.5)
    p_conv.add_argument("--norm-mode", default="single", choices=["single", "sup"])
    p_conv.add_argument("--horizon", type=float, default=None)
    p_conv.add_argument("--nt", type=int, default=16)
    p_conv.set_defaults(func=cmd_converge)

    p_bound = sub.add_parser("bound", help="contraction-based truncation error bound")
    common(p_bound)
    p_bound.add_argument("--time", type=float, default=0.1)
    p_bound.add_argument("--horizon", type=float, default=None)
    p_bound.add_argument("--order", type=int, default=10)
    p_bound.add_argument("--nt", type=int, default=16)
    p_bound.set_defaults(func=cmd_bound)

    p_verify = sub.add_parser("verify", help="cross-check symbolic engine against the oracle")
    common(p_verify)
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--samples", type=int, default=20)
    p_verify.set_defaults(func=cmd_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, UnknownCase, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # solver/runtime failures
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    raise SystemExit(main())
