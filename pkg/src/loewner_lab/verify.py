"""Cross-check suite behind ``verify-all``.

Each check compares two independent routes to the same quantity (word
sums vs product formulas, tabulated SLE moments vs the symbolic engine,
finite differences vs explicit PDE solutions, Monte Carlo vs exact values)
and returns a :class:`CheckResult`.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from . import bs_pde, closed_forms, mc, spectra, words
from .levy import LevySymbol


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: str
    seconds: float = 0.0
    diffs: tuple = ()  # (label, expected, got) for failures


def random_table(rng: random.Random, kmax: int) -> LevySymbol:
    """Exact random symbol with eta_0 = 0 and positive eta_k (keeps every denominator nonzero)."""
    return LevySymbol.table([0] + [Fraction(rng.randint(1, 60), rng.randint(1, 7)) for _ in range(kmax)])


def check_symbolic_tables(n_values=range(4, 9)) -> CheckResult:
    sym = LevySymbol.sle()
    diffs = []
    for n in n_values:
        got = words.second_moment(words.a(n), sym, words.SYMBOLIC)
        want = closed_forms.sle_reference(n)
        if got != want:
            diffs.append((f"E|a_{n}|^2", want.render(), got.render()))
    return CheckResult("symbolic word engine = tabulated SLE moments", not diffs,
                       f"n in {list(n_values)}", diffs=tuple(diffs))


def check_sle_exact_values(n_a: int = 19, n_b: int = 9, tol: float = 1e-9) -> CheckResult:
    diffs = []
    for kappa, target in ((6, lambda n: 1.0), (2, lambda n: float(n))):
        dp = words.level_dp_second_moment("a", LevySymbol.sle(kappa), n_a)
        for n, v in dp.items():
            if abs(v - target(n)) > tol:
                diffs.append((f"kappa={kappa} E|a_{n}|^2", target(n), v))
    dp = words.level_dp_second_moment("b", LevySymbol.sle(4), n_b)
    for n, v in dp.items():
        if abs(v - 1 / (2 * n + 1)) > tol:
            diffs.append((f"kappa=4 E|b_{2 * n + 1}|^2", 1 / (2 * n + 1), v))
    return CheckResult("level DP: kappa=6 -> 1, kappa=2 -> n, kappa=4 odd -> 1/(2n+1)", not diffs,
                       f"a_n for n <= {n_a}, b_(2n+1) for n <= {n_b}", diffs=tuple(diffs))


def check_product_formula(symbols: int = 10, n_max: int = 10, seed: int = 11) -> CheckResult:
    rng = random.Random(seed)
    diffs = []
    for _ in range(symbols):
        sym = random_table(rng, n_max)
        for n in range(2, n_max + 1):
            got = words.family_expectation(words.a(n), sym, words.EXACT)
            want = closed_forms.expected_an(n, sym, words.EXACT).value
            if got != want:
                diffs.append((f"E(a_{n}) for {sym.spec()}", want, got))
        for n in range(1, n_max // 2 + 1):
            got = words.family_expectation(words.b(n), sym, words.EXACT)
            want = closed_forms.expected_b2n1(n, sym, words.EXACT).value
            if got != want:
                diffs.append((f"E(b_{2 * n + 1}) for {sym.spec()}", want, got))
        for n in range(1, 9):
            s1 = closed_forms.truncated_series_Sn(n, sym, words.EXACT).value
            s2 = closed_forms.truncated_series_closed(n, sym, words.EXACT).value
            if s1 != s2:
                diffs.append((f"S_{n} for {sym.spec()}", s2, s1))
    return CheckResult("word sums = product formulas; truncated-series identity", not diffs,
                       f"{symbols} random exact symbols, n <= {n_max}", diffs=tuple(diffs))


def check_small_closed_forms(symbols: int = 6, seed: int = 5) -> CheckResult:
    rng = random.Random(seed)
    diffs = []
    for _ in range(symbols):
        sym = random_table(rng, 10)
        dp_a = words.level_dp_second_moment("a", sym, 5, words.EXACT)
        dp_b = words.level_dp_second_moment("b", sym, 2, words.EXACT)
        pairs = [(f"a{n}", dp_a[n]) for n in range(2, 6)] + [("b5", dp_b[2])]
        for kind, want in pairs:
            got = closed_forms.quad_moment_small(kind, sym, mode=words.EXACT).value
            if got != want:
                diffs.append((f"{kind} for {sym.spec()}", want, got))
    return CheckResult("small closed forms (a2..a5, b5) = level DP", not diffs,
                       f"{symbols} random exact symbols", diffs=tuple(diffs))


def check_pde_residuals(tol: float = 1e-8, grid: int = 100) -> CheckResult:
    diffs = []
    worst = 0.0
    for m, kappa in bs_pde.PDE_CHECK_PAIRS:
        rep = bs_pde.closed_form_residuals(kappa, m, grid)
        worst = max(worst, rep.max_abs)
        if rep.max_abs >= tol:
            diffs.append((f"residual m={m} kappa={kappa:g}", f"< {tol:g}", rep.max_abs))
    return CheckResult("explicit solutions solve the m-fold equation", not diffs,
                       f"max |residual| {worst:.2e} on {grid}-point grids", diffs=tuple(diffs))


def check_generating_function(tol: float = 1e-10) -> CheckResult:
    diffs = []
    for kappa, m, count in ((2, 1, 15), (6, 1, 15), (4, 2, 8)):
        kind = "a" if m == 1 else "b"
        dp = words.level_dp_second_moment(kind, LevySymbol.sle(kappa), 15 if m == 1 else 7)
        dp[1 if m == 1 else 0] = 1.0
        taylor = bs_pde.taylor_diagonal(kappa, m, count)
        series = bs_pde.series_coefficients(kappa, m, count)
        for k in range(count):
            n = m * k + 1
            idx = n if m == 1 else k
            from_taylor = taylor[k] / n**2
            if abs(from_taylor - dp[idx]) > tol:
                diffs.append((f"Taylor kappa={kappa} m={m} n={n}", dp[idx], from_taylor))
            if abs(float(series[k]) - dp[idx]) > tol:
                diffs.append((f"series kappa={kappa} m={m} n={n}", dp[idx], float(series[k])))
    return CheckResult("explicit E|h'|^2 generates the DP second moments", not diffs,
                       "m=1 kappa in {2,6}; m=2 kappa=4", diffs=tuple(diffs))


def spectrum_continuity_failures(kappas, ms=range(1, 9), tol: float = 1e-12) -> list:
    out = []
    for kappa in kappas:
        tp_tip = spectra.p_tip(kappa)
        a, b = spectra.beta_tip(tp_tip, kappa), spectra.beta0(tp_tip, kappa)
        if abs(a - b) > tol:
            out.append((f"tip kappa={kappa}", a, b))
        for m in ms:
            ps = spectra.p_m_star(kappa, m)
            if not (spectra.kappa_m(m) is not None and kappa > spectra.kappa_m(m)):
                a, b = spectra.beta0(ps, kappa), spectra.B_m(ps, kappa, m)
                if abs(a - b) > tol:
                    out.append((f"p_m* kappa={kappa} m={m}", a, b))
            else:
                p0 = spectra.p0_star(kappa)
                a, b = spectra.beta0(p0, kappa), spectra.beta0_hat(p0, kappa)
                if abs(a - b) > tol * max(1, abs(a)):
                    out.append((f"p0* kappa={kappa} m={m}", a, b))
                p2 = spectra.p_m_2star(kappa, m)
                a, b = spectra.beta0_hat(p2, kappa), spectra.B_m(p2, kappa, m)
                if abs(a - b) > tol * max(1, abs(a)):
                    out.append((f"p_m** kappa={kappa} m={m}", a, b))
        ps = spectra.p_star(kappa)
        a, b = spectra.beta0(ps, kappa), spectra.B_m(ps, kappa, 1)
        if abs(a - b) > tol:
            out.append((f"p* kappa={kappa}", a, b))
    return out


def check_spectra(kappas=None) -> CheckResult:
    kappas = [0.25, 0.5, 1, 2, 3, 4, 6, 8, 12, 16, 20, 28, 40] if kappas is None else kappas
    diffs = spectrum_continuity_failures(kappas)
    for kappa in kappas:
        for m in range(1, 7):
            for p in np.linspace(2 * m / (m + 4), 6, 25):
                v = spectra.whole_plane_spectrum(float(p), kappa, m).value
                bound = spectra.universal_bounds(float(p), m).value
                if v > bound + 1e-12:
                    diffs.append((f"Makarov bound kappa={kappa} m={m} p={p:.3f}", bound, v))
        for s in np.linspace(spectra.s_min(kappa) + 1e-6, 5, 15):
            p = spectra.packing_inverse(float(s), kappa, 1)
            back = spectra.packing(p, kappa, 1)
            if abs(back - s) > 1e-12 * max(1, abs(s)):
                diffs.append((f"packing round trip kappa={kappa} s={s:.3f}", s, back))
    return CheckResult("spectrum pieces agree at transitions; bounds; packing inverse", not diffs,
                       f"{len(kappas)} kappa values", diffs=tuple(diffs))


def check_transitions(kappas=(1, 2, 4, 6, 8, 16), tol: float = 1e-10) -> CheckResult:
    diffs = []
    for kappa in kappas:
        root = bs_pde.transition_from_b0(kappa)
        want = spectra.p_star(kappa)
        if abs(root - want) > tol:
            diffs.append((f"p*({kappa})", want, root))
    return CheckResult("root of 1/2 - b0 = closed-form p*", not diffs, f"kappa in {list(kappas)}", diffs=tuple(diffs))


def check_boundary(kappas=(2, 4, 6)) -> CheckResult:
    diffs = []
    for kappa in kappas:
        ps = spectra.p_star(kappa)
        p = 0.5 * ps
        g = bs_pde.gamma0_pm(p, kappa)
        worst = max(abs(bs_pde.boundary_ode_residual(x, g, p, kappa, h=1e-5, dps=40))
                    for x in np.linspace(0.2, 3.8, 20))
        if worst >= 1e-9:
            diffs.append((f"boundary ODE residual kappa={kappa}", "< 1e-9", worst))
        if not bs_pde.boundary_positivity(ps - 1e-3, kappa).positive:
            diffs.append((f"positivity below p* kappa={kappa}", True, False))
        if bs_pde.boundary_positivity(ps + 0.05, kappa).positive:
            diffs.append((f"failure above p* kappa={kappa}", False, True))
    return CheckResult("boundary solution: ODE residual, positivity up to p*", not diffs,
                       f"kappa in {list(kappas)}", diffs=tuple(diffs))


def check_sign_regions(kappa: float = 6.0) -> CheckResult:
    diffs = []
    cases = [("plus", 1.0, "supersolution"), ("plus", 3.0, "subsolution"), ("minus", 1.0, "subsolution")]
    for branch, p, pattern in cases:
        rep = bs_pde.sign_regions_check(branch, p, kappa)
        if not rep.holds or rep.pattern != pattern:
            diffs.append((f"{branch} p={p}", pattern, f"{rep.pattern}, {len(rep.failures)} failures"))
    exact = bs_pde.sign_regions_check("plus", spectra.p_kappa(kappa), kappa)
    if not exact.holds or exact.max_abs_ratio > 1e-10:
        diffs.append(("exact solution at p(kappa)", "< 1e-10", exact.max_abs_ratio))
    return CheckResult("sub/supersolution sign patterns", not diffs, f"kappa={kappa}", diffs=tuple(diffs))


def check_monte_carlo(samples: int = 2000, seed: int = 2024, n_max: int = 4, z: float = 4.0) -> CheckResult:
    diffs = []
    koebe = mc.koebe_coefficients(8)
    for n, v in koebe.items():
        if abs(v - (-1) ** (n - 1) * n) > 1e-6:
            diffs.append((f"Koebe a_{n}", (-1) ** (n - 1) * n, v))
    for kappa, target in ((6, lambda n: 1.0), (2, lambda n: float(n))):
        tab = mc.estimate_moments(mc.Driver.brownian(kappa), n_max, samples, seed)
        for n in tab.ns():
            e = tab.get(n)
            if abs(e.mean - target(n)) > z * e.stderr:
                diffs.append((f"MC kappa={kappa} E|a_{n}|^2", target(n), f"{e.mean:.4f} +- {e.stderr:.4f}"))
    return CheckResult("Monte Carlo smoke test", not diffs,
                       f"{samples} samples, n <= {n_max}, {z:g} stderr", diffs=tuple(diffs))


def suite(quick: bool = True) -> list[tuple[str, Callable[[], CheckResult]]]:
    checks = [
        ("symbolic", check_symbolic_tables),
        ("sle-exact", check_sle_exact_values),
        ("product", (lambda: check_product_formula(3, 8)) if quick else check_product_formula),
        ("small-forms", check_small_closed_forms),
        ("pde", check_pde_residuals),
        ("generating", check_generating_function),
        ("spectra", check_spectra),
        ("transitions", check_transitions),
        ("boundary", check_boundary),
        ("signs", check_sign_regions),
        ("mc", (lambda: check_monte_carlo(1000)) if quick else (lambda: check_monte_carlo(20000, n_max=8))),
    ]
    return checks


def run_suite(quick: bool = True) -> list[CheckResult]:
    results = []
    for _, fn in suite(quick):
        t0 = time.perf_counter()
        try:
            res = fn()
        except Exception as exc:  # a crash is a failed check, reported like one
            res = CheckResult(getattr(fn, "__name__", "check"), False, f"raised {type(exc).__name__}: {exc}")
        res.seconds = time.perf_counter() - t0
        results.append(res)
    return results


def format_report(results: list[CheckResult]) -> str:
    lines = []
    for r in results:
        lines.append(f"[{'PASS' if r.ok else 'FAIL'}] {r.name} ({r.detail}; {r.seconds:.1f}s)")
        for label, want, got in r.diffs[:20]:
            lines.append(f"    {label}: expected {want}, got {got}")
        if len(r.diffs) > 20:
            lines.append(f"    ... {len(r.diffs) - 20} more")
    failed = sum(not r.ok for r in results)
    lines.append(f"{len(results) - failed}/{len(results)} checks passed")
    return "\n".join(lines)

