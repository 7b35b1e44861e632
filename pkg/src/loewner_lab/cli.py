"""Command-line front end: ``python -m loewner_lab <command> ...``.

Exit status is 0 on success, 1 when a verification fails and 2 for usage
errors (bad flags, bad symbol or driver specs, out-of-domain parameters).
"""

from __future__ import annotations

import argparse
import math
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__, bs_pde, closed_forms, mc, output, spectra, verify, words
from .errors import LoewnerLabError
from .levy import parse_number, parse_symbol
from .scalars import RatFunc

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit directly; route through main instead
        raise UsageError(f"{self.prog}: error: {message}\n{self.format_usage()}")


def _fmt_value(v) -> str:
    if isinstance(v, RatFunc):
        return v.render()
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _float_value(v) -> float | None:
    try:
        return float(v)
    except (TypeError, ValueError):
        return None


def _base_config(args, command: str) -> dict:
    cfg = {k: v for k, v in vars(args).items() if k not in ("func", "out")}
    cfg.update(command=command, version=__version__)
    return cfg


def _emit(args, command: str, rows: list[dict], columns: list[str], config: dict,
          plot: tuple | None = None) -> None:
    fmt = args.format
    if fmt == "csv":
        text = output.to_csv(rows, columns, config)
    elif fmt == "json":
        text = output.to_json(rows, config)
    else:
        if plot is None:
            raise UsageError(f"--format svg is not available for {command}")
        series, title, xlabel, ylabel = plot
        text = output.to_svg(series, config, title, xlabel, ylabel)
    if args.out:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        path = out_dir / f"{command}.{fmt}"
        path.write_text(text)
        print(f"wrote {path}", file=sys.stderr)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# commands


def cmd_moments(args) -> int:
    symbol = parse_symbol(args.symbol)
    kind = {"a": "a", "f": "a", "b": "b", "h": "b"}[args.family]
    ns = range(2 if kind == "a" else 1, args.n + 1) if args.all else [args.n]
    rows = []
    for n in ns:
        fam = words.CoeffFamily(kind, n)
        if args.mode == words.FLOAT and not symbol.is_symbolic:
            v = words.level_dp_second_moment(kind, symbol, n)[n]
            method = "level DP"
        else:
            v = words.second_moment(fam, symbol, args.mode)
            method = "word pairs"
        rows.append({"n": n, "coefficient": fam.label, "value": _fmt_value(v),
                     "float": _float_value(v) if not isinstance(v, RatFunc) else None, "method": method})
    _emit(args, "moments", rows, ["n", "coefficient", "value", "float", "method"], _base_config(args, "moments"))
    return EXIT_OK


def cmd_oracle(args) -> int:
    if args.symbol:
        symbol = parse_symbol(args.symbol)
    elif args.kappa is not None:
        symbol = parse_symbol(f"sle:{args.kappa}")
    else:
        symbol = parse_symbol("sle:sym")
    what = args.what
    mu = parse_number(args.mu) if args.mu is not None else None
    if what in closed_forms.SMALL_KINDS:
        res = closed_forms.quad_moment_small(what, symbol, mu=mu, mode=args.mode)
    elif what.startswith("E(a_") or what.startswith("Ea"):
        n = int(what.strip("E(a_)"))
        res = closed_forms.expected_an(n, symbol, args.mode)
    elif what.startswith("E(b_") or what.startswith("Eb"):
        n = int(what.strip("E(b_)"))
        res = closed_forms.expected_b2n1((n - 1) // 2, symbol, args.mode)
    elif what.startswith("S"):
        res = closed_forms.truncated_series_Sn(int(what[1:]), symbol, args.mode)
    elif what.startswith("sle"):
        res = closed_forms.MomentFormulaResult(closed_forms.sle_reference(int(what[3:])),
                                               closed_forms.Provenance.SLE_TABLE)
    else:
        raise UsageError(f"unknown --what {what!r}")
    v = res.value
    row = {"what": what, "symbol": symbol.spec(), "value": _fmt_value(v),
           "float": None if isinstance(v, RatFunc) else _float_value(v), "provenance": res.provenance.value}
    _emit(args, "oracle", [row], ["what", "symbol", "value", "float", "provenance"], _base_config(args, "oracle"))
    return EXIT_OK


def cmd_spectra(args) -> int:
    ps = np.linspace(args.p_min, args.p_max, args.steps + 1)
    rows = []
    for p in ps:
        sv = spectra.whole_plane_spectrum(float(p), args.kappa, args.m)
        row = {"p": float(p), "beta": sv.value, "regime": sv.regime.value, "status": sv.status}
        if args.kappa > 0:
            try:
                row["packing"] = spectra.packing(float(p), args.kappa, args.m)
            except LoewnerLabError:
                row["packing"] = None
        rows.append(row)
    config = _base_config(args, "spectra")
    if args.kappa > 0:
        config["transitions"] = spectra.transition_points(args.kappa, args.m)._asdict()
    columns = ["p", "beta", "regime", "status"] + (["packing"] if args.kappa > 0 else [])
    bounds = [spectra.universal_bounds(float(p), args.m) for p in ps]
    plot = (
        [(f"beta_{args.m}(p, {args.kappa:g})", ps, [r["beta"] for r in rows]),
         ("(m+2)p/m - 1", ps, [b.value if b.asserted else math.nan for b in bounds])],
        f"integral means spectrum, kappa={args.kappa:g}, m={args.m}", "p", "beta",
    )
    _emit(args, "spectra", rows, columns, config, plot)
    return EXIT_OK


def cmd_pde_check(args) -> int:
    rep = bs_pde.closed_form_residuals(args.kappa, args.m, args.grid, dps=None if args.dps == 0 else args.dps)
    rows = [{"z": complex(z), "F": float(f), "residual": float(r)} for z, f, r in zip(rep.points, rep.values, rep.residuals)]
    ok = rep.max_abs < args.tol
    config = _base_config(args, "pde-check")
    config.update(p=rep.p, max_abs_residual=rep.max_abs, max_rel_residual=rep.max_rel, passed=ok)
    _emit(args, "pde-check", rows, ["z", "F", "residual"], config)
    print(f"max |residual| = {rep.max_abs:.3e} (tol {args.tol:g}): {'PASS' if ok else 'FAIL'}", file=sys.stderr)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_series(args) -> int:
    table = bs_pde.series_coefficients(Fraction(parse_number(args.kappa)), args.m, args.count)
    rows = [{"k": k, "n": args.m * k + 1, "value": _fmt_value(v), "float": float(v)} for k, v in table.items()]
    ks = [r["n"] for r in rows]
    plot = ([("E|a_n|^2", ks, [r["float"] for r in rows])], f"coefficient series, kappa={args.kappa}, m={args.m}",
            "n", "E|a_n|^2")
    _emit(args, "series", rows, ["k", "n", "value", "float"], _base_config(args, "series"), plot)
    return EXIT_OK


def cmd_simulate(args) -> int:
    driver = mc.parse_driver(args.driver)
    family = {"a": mc.FAMILY_F, "f": mc.FAMILY_F, "b": mc.FAMILY_H, "h": mc.FAMILY_H}[args.family]
    t0 = time.perf_counter()
    table = mc.estimate_moments(driver, args.n, args.samples, args.seed, family, T=args.T, dt=args.dt,
                                workers=args.threads)
    elapsed = time.perf_counter() - t0
    symbol = driver.symbol()
    rows = []
    for n in table.ns():
        m, a2 = table.get(n, "mean"), table.get(n, "abs2")
        exact = None
        try:
            ex = (closed_forms.expected_an(n, symbol, words.FLOAT) if family == mc.FAMILY_F
                  else closed_forms.expected_b2n1(n, symbol, words.FLOAT))
            exact = float(ex.value)
        except LoewnerLabError:
            pass
        rows.append({"n": n, "coefficient": mc.coefficient_label(n, family),
                     "mean_re": m.mean.real, "mean_im": m.mean.imag, "mean_stderr": m.stderr,
                     "exact_mean": exact, "abs2": a2.mean, "abs2_stderr": a2.stderr})
    config = dict(table.config)
    config.update(command="simulate", version=__version__, seconds=round(elapsed, 3))
    ns = [r["n"] for r in rows]
    plot = ([("MC E|c_n|^2", ns, [r["abs2"] for r in rows]),
             ("MC + 2 stderr", ns, [r["abs2"] + 2 * r["abs2_stderr"] for r in rows]),
             ("MC - 2 stderr", ns, [r["abs2"] - 2 * r["abs2_stderr"] for r in rows])],
            f"Monte Carlo, {driver.spec()}", "n", "E|c_n|^2")
    columns = ["n", "coefficient", "mean_re", "mean_im", "mean_stderr", "exact_mean", "abs2", "abs2_stderr"]
    _emit(args, "simulate", rows, columns, config, plot)
    return EXIT_OK


def cmd_verify_all(args) -> int:
    results = verify.run_suite(quick=args.quick)
    print(verify.format_report(results))
    if args.out:
        rows = [{"check": r.name, "ok": r.ok, "detail": r.detail, "seconds": round(r.seconds, 3)} for r in results]
        args.format = "json" if args.format == "svg" else args.format
        _emit(args, "verify-all", rows, ["check", "ok", "detail", "seconds"], _base_config(args, "verify-all"))
    return EXIT_OK if all(r.ok for r in results) else EXIT_FAIL


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="loewner-lab", description="Coefficient moments, PDE checks and spectra for Levy-Loewner maps.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, formats=("csv", "json")):
        p.add_argument("--format", choices=formats, default=formats[0])
        p.add_argument("--out", help="write <command>.<format> into this directory instead of stdout")

    p = sub.add_parser("moments", help="E|a_n|^2 or E|b_{2n+1}|^2 from the word engine or the level DP")
    p.add_argument("--family", choices=["a", "b", "f", "h"], default="a")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--symbol", default="sle:sym")
    p.add_argument("--mode", choices=[words.SYMBOLIC, words.EXACT, words.FLOAT, words.AUTO], default=words.AUTO)
    p.add_argument("--all", action="store_true", help="emit every n up to --n")
    common(p)
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("oracle", help="closed-form moments (a2, a3, a3_mu, a4, a5, b5, schwarzian0, E(a_n), S<n>, sle<n>)")
    p.add_argument("--what", required=True)
    p.add_argument("--kappa")
    p.add_argument("--symbol")
    p.add_argument("--mu")
    p.add_argument("--mode", choices=[words.SYMBOLIC, words.EXACT, words.FLOAT, words.AUTO], default=words.AUTO)
    common(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("spectra", help="tabulate beta_m(p, kappa) with regime labels")
    p.add_argument("--kappa", type=float, required=True)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--p-min", type=float, default=-5.0)
    p.add_argument("--p-max", type=float, default=5.0)
    p.add_argument("--steps", type=int, default=400)
    common(p, ("csv", "json", "svg"))
    p.set_defaults(func=cmd_spectra)

    p = sub.add_parser("pde-check", help="finite-difference residual of the explicit solution")
    p.add_argument("--kappa", type=float, required=True)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--grid", type=int, default=100)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--dps", type=int, default=30, help="working digits of the stencil; 0 for long double")
    common(p)
    p.set_defaults(func=cmd_pde_check)

    p = sub.add_parser("series", help="exact E|a_{mk+1}|^2 at kappa = 2m or 2(m+2)/m")
    p.add_argument("--kappa", required=True)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--count", type=int, default=20)
    common(p, ("csv", "json", "svg"))
    p.set_defaults(func=cmd_series)

    p = sub.add_parser("simulate", help="Monte Carlo coefficient moments")
    p.add_argument("--driver", required=True, help="brownian:K, koebe, stable:A:K, poisson:L[:turns], composite:K:L[:turns]")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--family", choices=["a", "b", "f", "h"], default="a")
    p.add_argument("--T", type=float, default=None)
    p.add_argument("--dt", type=float, default=mc.DEFAULT_DT)
    p.add_argument("--threads", type=int, default=None, help="worker threads (default LOEWNER_LAB_THREADS or CPU count)")
    common(p, ("csv", "json", "svg"))
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify-all", help="run the cross-check suite")
    p.add_argument("--quick", action="store_true")
    common(p)
    p.set_defaults(func=cmd_verify_all)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(str(exc).rstrip(), file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (LoewnerLabError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
