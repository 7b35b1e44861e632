"""The Beliaev-Smirnov operator for E|h'(z)|^p, its explicit solutions and boundary problem.

Conventions: ``zeta = rho * exp(i phi)`` is the variable of the m-fold
equation (``zeta = z**m``), ``x = |1 - zeta|^2`` and ``u = 1 - |zeta|^2``.
Power-law trial functions are ``psi = x**gamma * u**(-beta)``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, NamedTuple

import mpmath
import numpy as np
from scipy import optimize, special

from . import spectra
from .errors import BracketError, DegenerateParametersError, DomainError


@dataclass(frozen=True)
class PdeParams:
    p: float
    kappa: float
    sigma: int = -1
    m: int = 1

    def __post_init__(self):
        if self.kappa <= 0:
            raise DomainError("kappa must be positive")
        if self.sigma not in (-1, 1):
            raise DomainError("sigma must be -1 or +1")
        if int(self.m) != self.m or self.m < 1:
            raise DomainError("m must be a positive integer")


@dataclass(frozen=True)
class PowerLawAnsatz:
    gamma: float
    beta: float


# ---------------------------------------------------------------------------
# coefficient functions


class Coefficients(NamedTuple):
    A: float
    B: float
    C: float
    beta_of_gamma: float
    A_sigma: float
    gamma_plus: float | None
    gamma_minus: float | None
    gamma0_plus: float | None
    gamma0_minus: float | None


def A_m(gamma, p, kappa, m=1):
    return -kappa * gamma * gamma / 2 + gamma + p / m


def B_m(gamma, p, kappa, m=1):
    return kappa * gamma * (2 * gamma - 1) / 2 - 3 * gamma + (1 - Fraction(1, m)) * p


def C_of(gamma, p, kappa):
    return -kappa * gamma * (gamma - 1) / 2 + 2 * gamma - p


def beta_of_gamma(gamma, p, kappa):
    """beta(gamma) = kappa gamma^2 - (kappa/2 + 2) gamma + p = kappa gamma^2/2 - C(gamma)."""
    return kappa * gamma * gamma - (kappa / 2 + 2) * gamma + p


def A_sigma(gamma, p, kappa, sigma=-1):
    return -kappa * gamma * gamma / 2 + gamma - sigma * p


def _sqrt_or_none(disc):
    return math.sqrt(disc) if disc >= 0 else None


def gamma_pm(p, kappa, m=1, sign=+1, sigma=-1):
    """Roots (1 +- sqrt(1 - 2 sigma kappa p / m)) / kappa of A^sigma_m = 0."""
    disc = 1 - 2 * sigma * kappa * p / m
    if disc < 0:
        raise DomainError(f"complex branch: 1 - 2 sigma kappa p/m = {disc} < 0")
    return (1 + sign * math.sqrt(disc)) / kappa


def gamma0_pm(p, kappa, sign=-1):
    disc = (4 + kappa) ** 2 - 8 * kappa * p
    if disc < 0:
        raise DomainError(f"complex branch: (4+kappa)^2 - 8 kappa p = {disc} < 0")
    return (4 + kappa + sign * math.sqrt(disc)) / (2 * kappa)


def beta_pm(p, kappa, sign=+1):
    return 3 * p - 0.5 * (1 + sign * math.sqrt(1 + 2 * kappa * p))


def coefficients_ABC(gamma, p, kappa, m: int = 1, sigma: int = -1) -> Coefficients:
    d1 = 1 - 2 * sigma * kappa * p / m
    d0 = (4 + kappa) ** 2 - 8 * kappa * p
    s1, s0 = _sqrt_or_none(float(d1)), _sqrt_or_none(float(d0))
    A = A_m(gamma, p, kappa, m)
    return Coefficients(
        A=A,
        B=B_m(gamma, p, kappa, m),
        C=C_of(gamma, p, kappa),
        beta_of_gamma=beta_of_gamma(gamma, p, kappa),
        A_sigma=A - (1 + sigma) * p if m == 1 else A,
        gamma_plus=None if s1 is None else (1 + s1) / kappa,
        gamma_minus=None if s1 is None else (1 - s1) / kappa,
        gamma0_plus=None if s0 is None else (4 + kappa + s0) / (2 * kappa),
        gamma0_minus=None if s0 is None else (4 + kappa - s0) / (2 * kappa),
    )


# ---------------------------------------------------------------------------
# explicit solutions


class ClosedForm(NamedTuple):
    holomorphic: complex  # E[h'(z)^{p/2}]
    modulus: float  # E|h'(z)|^p
    alpha: float
    beta: float
    p: float


def closed_form_exponents(kappa, m: int = 1):
    """(alpha, beta, p_m(kappa)) of the explicit m-fold solution."""
    alpha = (2 * m + 4 + kappa) / ((m + 1) * kappa)
    return alpha, kappa * alpha * alpha / 2, spectra.p_m_kappa(kappa, m)


def closed_form_F(z: complex, kappa, m: int = 1) -> ClosedForm:
    if abs(z) >= 1:
        raise DomainError("closed form needs |z| < 1")
    alpha, beta, p = closed_form_exponents(kappa, m)
    zeta = complex(z) ** m
    hol = (1 - zeta) ** alpha
    mod = abs(1 - zeta) ** (2 * alpha) / (1 - abs(zeta) ** 2) ** beta
    return ClosedForm(hol, mod, alpha, beta, p)


def closed_form_modulus(kappa, m: int = 1) -> Callable[[complex], float]:
    """E|h'|^p as a function of zeta = z^m (the variable of the m-fold operator).

    Only ``abs`` and ``**`` are used, so the callable keeps the precision of
    its argument (complex, ``np.clongdouble`` or ``mpmath.mpc``).
    """
    alpha, beta, _ = closed_form_exponents(kappa, m)

    def F(zeta):
        return abs(1 - zeta) ** (2 * alpha) / (1 - abs(zeta) ** 2) ** beta

    return F


def _log(x):
    if isinstance(x, mpmath.mpf):
        return mpmath.log(x)
    return np.log(x)


def power_law(ansatz: PowerLawAnsatz, log_delta: float = 0.0) -> Callable[[complex], float]:
    """psi(zeta) = x^gamma u^-beta, times (-log u)^delta when ``log_delta`` is nonzero."""
    g2, b = 2 * ansatz.gamma, ansatz.beta

    def psi(zeta):
        u = 1 - abs(zeta) ** 2
        val = abs(1 - zeta) ** g2 * u ** (-b)
        if log_delta:
            val = val * (-_log(u)) ** log_delta
        return val

    return psi


# ---------------------------------------------------------------------------
# the operator


def potential(zeta: complex, params: PdeParams) -> float:
    p, m, sigma = params.p, params.m, params.sigma
    w = 1 / (1 - zeta)
    v = (p / m) * (2 * (m - 1) * w.real - 2 * m * (w * w).real + 2)
    # sigma only enters the m = 1 equation
    return v - (1 + sigma) * p if m == 1 else v


def _richardson(values: list):
    # values[j] used step h / 2**j; error expansion in even powers of h
    table = list(values)
    for level in range(1, len(table)):
        factor = 4**level
        table = [(factor * table[j + 1] - table[j]) / (factor - 1) for j in range(len(table) - 1)]
    return table[0]


def _polar_residual(F, rho, phi, h, levels, kappa, params, expj, sin):
    def at(r, t):
        return F(r * expj(t))

    f0 = at(rho, phi)
    fr, fphi, fphiphi = [], [], []
    for j in range(levels + 1):
        step = h / 2**j
        fp, fm = at(rho, phi + step), at(rho, phi - step)
        fr.append((at(rho + step, phi) - at(rho - step, phi)) / (2 * step))
        fphi.append((fp - fm) / (2 * step))
        fphiphi.append((fp - 2 * f0 + fm) / (step * step))
    fr, fphi, fphiphi = _richardson(fr), _richardson(fphi), _richardson(fphiphi)
    zeta = rho * expj(phi)
    D = abs(1 - zeta) ** 2
    return (
        kappa / 2 * fphiphi
        + (rho * rho - 1) / D * rho * fr
        - 2 * rho * sin(phi) / D * fphi
        + potential(zeta, params) * f0
    )


def apply_operator(F: Callable[[complex], complex], zeta: complex, params: PdeParams,
                   h: float = 1e-3, levels: int = 1, dps: int | None = None,
                   min_distance: float = 1e-4) -> complex:
    """Finite-difference P_m(D)[F] at ``zeta`` in polar coordinates (rho, phi).

    Central differences with steps h, h/2, ..., h/2**levels, combined by
    Richardson extrapolation. The step is capped at 1/8 of the distance to
    the nearest of 0, 1 and the unit circle. Arithmetic is ``np.longdouble``
    unless ``dps`` is given, in which case mpmath at ``dps`` digits is used
    (``F`` then receives ``mpmath.mpc`` arguments).
    """
    zeta = complex(zeta)
    dist = min(abs(zeta), 1 - abs(zeta), abs(1 - zeta))
    if dist < min_distance:
        raise DomainError(
            f"zeta={zeta:.6g} is within {min_distance:g} of a singular point "
            f"(|zeta|={abs(zeta):.3g}, 1-|zeta|={1 - abs(zeta):.3g}, |1-zeta|={abs(1 - zeta):.3g})"
        )
    step = min(h, dist / 8)
    if dps is None:
        one_i = np.clongdouble(1j)
        res = _polar_residual(
            F, np.longdouble(abs(zeta)), np.longdouble(cmath.phase(zeta)), np.longdouble(step), levels,
            np.longdouble(params.kappa), params, lambda t: np.exp(one_i * t), np.sin,
        )
        return complex(res)
    with mpmath.workdps(dps):
        res = _polar_residual(
            F, mpmath.mpf(abs(zeta)), mpmath.mpf(cmath.phase(zeta)), mpmath.mpf(step), levels,
            mpmath.mpf(params.kappa), params, mpmath.expj, mpmath.sin,
        )
        return complex(res)


PDE_CHECK_PAIRS = ((1, 6), (1, 2), (2, 4), (3, 6), (3, 10 / 3), (4, 8), (4, 3))


def disk_grid(npts: int = 100, r_min: float = 0.3, r_max: float = 0.9) -> np.ndarray:
    """Polar grid in z with about ``npts`` points, angles offset so none lies on the real axis."""
    nr = max(1, int(round(math.sqrt(npts))))
    nt = max(1, npts // nr)
    radii = np.linspace(r_min, r_max, nr)
    angles = (np.arange(nt) + 0.5) * 2 * np.pi / nt - np.pi
    return (radii[:, None] * np.exp(1j * angles)[None, :]).ravel()


class ResidualReport(NamedTuple):
    kappa: float
    m: int
    p: float
    points: np.ndarray  # z values
    residuals: np.ndarray  # |P_m(D)[F]| at zeta = z^m
    values: np.ndarray  # F(zeta)

    @property
    def max_abs(self) -> float:
        return float(np.max(self.residuals))

    @property
    def max_rel(self) -> float:
        return float(np.max(self.residuals / self.values))


def closed_form_residuals(kappa: float, m: int = 1, grid: int = 100, dps: int | None = 30,
                          h: float = 1e-6, levels: int = 2) -> ResidualReport:
    """Finite-difference residual of the explicit solution on :func:`disk_grid`.

    The default runs the stencil at 30 digits: at |z| = 0.9 the solution for
    small kappa reaches ~1e4 while its scale of variation is ~0.1, so an
    absolute residual of 1e-8 is out of reach of any double or long double
    stencil.
    """
    F = closed_form_modulus(kappa, m)
    _, _, p = closed_form_exponents(kappa, m)
    params = PdeParams(p, kappa, -1, m)
    pts = disk_grid(grid)
    res = np.array([abs(apply_operator(F, z**m, params, h=h, levels=levels, dps=dps)) for z in pts])
    vals = np.array([float(F(complex(z) ** m)) for z in pts])
    return ResidualReport(kappa, m, p, pts, res, vals)


def action_on_power_law(ansatz: PowerLawAnsatz, zeta: complex, params: PdeParams) -> float:
    """P_m(D)[psi] / psi in closed form."""
    g, b = ansatz.gamma, ansatz.beta
    p, kappa, m, sigma = params.p, params.kappa, params.m, params.sigma
    zeta = complex(zeta)
    x = abs(1 - zeta) ** 2
    zz = abs(zeta) ** 2
    u = 1 - zz
    A = A_m(g, p, kappa, m)
    C = C_of(g, p, kappa)
    val = ((kappa * g * g - 2 * b) * zz - A * (u - x) + C * (u * (u / x + 1) - 2)) / x
    if m == 1:
        val -= (1 + sigma) * p
    return val


def action_on_power_law_log(ansatz: PowerLawAnsatz, zeta: complex, params: PdeParams, delta: float) -> float:
    """P(D)[psi * l_delta] / (psi * l_delta) with l_delta = (-log(1 - |zeta|^2))^delta."""
    zeta = complex(zeta)
    zz = abs(zeta) ** 2
    x = abs(1 - zeta) ** 2
    return action_on_power_law(ansatz, zeta, params) - 2 * delta * zz / (x * -math.log(1 - zz))


# ---------------------------------------------------------------------------
# boundary problem on the unit circle


def hyp2f1_series(a, b, c, z, tol: float = 1e-14, max_terms: int = 2_000_000) -> float:
    """Gauss series for 2F1(a, b; c; z), 0 <= z < 1, stopped once the tail bound is below ``tol``."""
    if c <= 0 and float(c).is_integer():
        raise DegenerateParametersError(f"2F1 parameter c={c} is a nonpositive integer")
    if not 0 <= z < 1:
        raise DomainError("series evaluation needs 0 <= z < 1")
    total = 1.0
    term = 1.0
    n = 0
    while n < max_terms:
        ratio = (a + n) * (b + n) / ((c + n) * (n + 1)) * z
        term *= ratio
        total += term
        n += 1
        if term == 0.0:
            return total
        # once the ratio bound is below one, the remaining tail is geometric
        rho = max(abs((a + n) * (b + n) / ((c + n) * (n + 1))) * z, z)
        if rho < 1 and abs(term) * rho / (1 - rho) < tol * max(1.0, abs(total)):
            return total
    raise DomainError(f"2F1 series did not converge in {max_terms} terms")


@dataclass(frozen=True)
class BoundaryParams:
    gamma: float
    p: float
    kappa: float
    sigma: int
    a: float
    b: float
    c: float
    a_dual: float
    b_dual: float
    c_dual: float
    gamma_dual: float
    C0: float
    A_sigma: float
    beta: float
    extra: dict = field(default_factory=dict, compare=False)


def _gamma_checked(v, name):
    if v <= 0 and float(v).is_integer():
        raise DegenerateParametersError(f"degenerate parameters: Gamma pole at {name}={v}")
    return special.gamma(v)


def boundary_params(gamma, p, kappa, sigma: int = -1) -> BoundaryParams:
    disc = 1 - 2 * sigma * kappa * p
    if disc < 0:
        raise DomainError("complex hypergeometric parameters (1 - 2 sigma kappa p < 0) are not supported")
    gp = (1 + math.sqrt(disc)) / kappa
    gm = (1 - math.sqrt(disc)) / kappa
    a = gamma - gp
    b = gamma - gm
    c = 0.5 + a + b
    ad, bd = 0.5 - b, 0.5 - a
    cd = 1.5 - a - b
    C0 = (
        _gamma_checked(c, "c") * _gamma_checked(ad, "a'") * _gamma_checked(bd, "b'")
        * special.rgamma(a) * special.rgamma(b) * special.rgamma(cd)
    )
    return BoundaryParams(
        gamma=gamma, p=p, kappa=kappa, sigma=sigma, a=a, b=b, c=c,
        a_dual=ad, b_dual=bd, c_dual=cd, gamma_dual=gamma + 0.5 - a - b, C0=C0,
        A_sigma=A_sigma(gamma, p, kappa, sigma), beta=beta_of_gamma(gamma, p, kappa),
    )


def boundary_g0_at_4(bp: BoundaryParams) -> float:
    """g_0(4) = sqrt(pi) Gamma(1/2+a+b) / (Gamma(1/2+a) Gamma(1/2+b)) (1 - tan(pi a) tan(pi b))."""
    a, b = bp.a, bp.b
    return (
        math.sqrt(math.pi) * _gamma_checked(0.5 + a + b, "1/2+a+b")
        * special.rgamma(0.5 + a) * special.rgamma(0.5 + b)
        * (1 - math.tan(math.pi * a) * math.tan(math.pi * b))
    )


SERIES_EDGE = 3.96


def _g0_series(x, bp: BoundaryParams, tol: float = 1e-14):
    z = x / 4
    first = hyp2f1_series(bp.a, bp.b, bp.c, z, tol)
    if bp.C0 == 0:
        return first
    if z == 0:
        if 0.5 - bp.a - bp.b > 0:
            return first
        raise DomainError("g0 diverges at x=0 when 1/2 - a - b <= 0")
    return first - bp.C0 * z ** (0.5 - bp.a - bp.b) * hyp2f1_series(bp.a_dual, bp.b_dual, bp.c_dual, z, tol)


def _g0_near_4(x, bp: BoundaryParams, tol: float = 1e-17):
    # regular power series in y = 4 - x, scaled by the closed-form value at x = 4
    kappa = bp.kappa
    K1 = kappa / 2 + kappa * bp.gamma - 1
    y = 4 - x
    coeff, total, n = 1.0, 1.0, 0
    while n < 400:
        coeff *= (K1 * n + kappa / 2 * n * (n - 1) - bp.A_sigma) / (kappa * (n + 1) * (2 * n + 1))
        n += 1
        term = coeff * y**n
        total += term
        if abs(term) < tol:
            break
    return boundary_g0_at_4(bp) * total


def _boundary_g(x, bp: BoundaryParams, normalized: bool, tol_series: float, tol_near: float):
    g0 = _g0_series(x, bp, tol_series) if x <= SERIES_EDGE else _g0_near_4(x, bp, tol_near)
    if normalized:
        return g0
    if x == 0:
        return g0 if bp.gamma == 0 else 0.0 * g0
    return (x / 4) ** bp.gamma * g0


def boundary_g(x: float, gamma, p, kappa, sigma: int = -1, normalized: bool = False) -> float:
    """g(x) = (x/4)^gamma g_0(x) on [0, 4]; ``normalized=True`` returns g_0.

    Below x = 3.96 both Gauss series are summed directly. Above it g_0 is
    expanded in powers of 4 - x around its closed-form value at x = 4, which
    avoids the slowly converging series near the unit argument.
    """
    if not 0 <= x <= 4:
        raise DomainError("boundary_g is defined for x in [0, 4]")
    bp = boundary_params(gamma, p, kappa, sigma)
    return _boundary_g(x, bp, normalized, 1e-14, 1e-17)


def boundary_ode_residual(x: float, gamma, p, kappa, sigma: int = -1, h: float = 1e-2,
                          dps: int | None = None) -> float:
    """Residual of the boundary ODE for g with beta = beta(gamma), by 6th-order central differences.

    With ``dps`` the series and the stencil run in mpmath at that precision;
    in double precision the 1e-14 series accuracy divided by h^2 limits the
    residual to about 1e-8.
    """
    bp = boundary_params(gamma, p, kappa, sigma)
    if not 3 * h < x < 4 - 3 * h:
        raise DomainError("stencil leaves [0, 4]")

    def residual(x, h, g):
        f = [g(x + k * h) for k in range(-3, 4)]
        d1 = (-f[0] + 9 * f[1] - 45 * f[2] + 45 * f[4] - 9 * f[5] + f[6]) / (60 * h)
        d2 = (2 * f[0] - 27 * f[1] + 270 * f[2] - 490 * f[3] + 270 * f[4] - 27 * f[5] + 2 * f[6]) / (180 * h * h)
        return (
            (p * (2 - sigma * x) - 2 * bp.beta) * f[3]
            + (kappa / 2 * (2 - x) - (4 - x)) * x * d1
            + kappa / 2 * (4 - x) * x * x * d2
        )

    if dps is None:
        return float(residual(x, h, lambda t: _boundary_g(t, bp, False, 1e-14, 1e-17)))
    with mpmath.workdps(dps):
        tol = mpmath.mpf(10) ** (5 - dps)
        return float(residual(mpmath.mpf(x), mpmath.mpf(h), lambda t: _boundary_g(t, bp, False, tol, tol)))


class PositivityReport(NamedTuple):
    positive: bool
    min_value: float
    reason: str


def boundary_positivity(p, kappa, sigma: int = -1, npts: int = 401) -> PositivityReport:
    """Whether the boundary solution built on gamma_0(p) is positive on [0, 4]."""
    g0 = gamma0_pm(p, kappa, -1)
    try:
        bp = boundary_params(g0, p, kappa, sigma)
    except DegenerateParametersError as exc:
        return PositivityReport(False, float("nan"), str(exc))
    if 0.5 - bp.a - bp.b < 0:
        return PositivityReport(False, float("nan"), "unbounded at x=0 (1/2 - a - b < 0)")
    xs = np.linspace(0.0, 4.0, npts)
    vals = [boundary_g(x, g0, p, kappa, sigma, normalized=True) for x in xs]
    lo = float(min(vals))
    if lo <= 0:
        return PositivityReport(False, lo, "sign loss on [0, 4]")
    return PositivityReport(True, lo, "positive")


# ---------------------------------------------------------------------------
# transition detection


def half_minus_b0(p, kappa, sigma: int = -1) -> float:
    """1/2 - b_0(p) with b_0 = gamma_0(p) - gamma^sigma_-(p)."""
    disc = 1 - 2 * sigma * kappa * p
    if disc < 0:
        raise DomainError("complex gamma^sigma branch")
    return 0.5 - gamma0_pm(p, kappa, -1) + (1 - math.sqrt(disc)) / kappa


def transition_from_b0(kappa: float, xtol: float = 1e-13) -> float:
    """Root of 1/2 - b_0(p) for sigma = -1, by bisection."""
    if kappa <= 0:
        raise DomainError("kappa must be positive")
    lo, hi = 0.0, (4 + kappa) ** 2 / (8 * kappa)

    def f(p):
        return half_minus_b0(p, kappa, -1)

    if not f(lo) > 0 > f(hi):
        raise BracketError(f"no sign change of 1/2 - b0 on [{lo}, {hi}] for kappa={kappa}")
    return optimize.bisect(f, lo, hi, xtol=xtol, rtol=4 * np.finfo(float).eps, maxiter=400)


# ---------------------------------------------------------------------------
# sign regions of the log-modified power laws


@dataclass
class SignRegionReport:
    branch: str
    p: float
    kappa: float
    delta: float
    expected_sign: int  # +1 supersolution, -1 subsolution, 0 exact solution
    n_inside: int
    n_annulus: int
    failures: list
    max_abs_ratio: float

    @property
    def holds(self) -> bool:
        return not self.failures

    @property
    def pattern(self) -> str:
        return {1: "supersolution", -1: "subsolution", 0: "exact solution"}[self.expected_sign]


def sign_region_samples(n_inside: int = 400, n_annulus: int = 400, seed: int = 0,
                        annulus: tuple = (0.95, 0.999)):
    """Deterministic sample points inside D_1/2 and in an annulus r0 <= r <= r1 outside it."""
    rng = np.random.default_rng(seed)
    inside = []
    while len(inside) < n_inside:
        # D_1/2 is the disk of radius 1/2 centred at 1/2
        r = 0.5 * math.sqrt(rng.uniform(0.0, 1.0))
        t = rng.uniform(0.0, 2 * math.pi)
        z = 0.5 + r * cmath.exp(1j * t)
        x = abs(1 - z) ** 2
        u = 1 - abs(z) ** 2
        if abs(z) > 1e-3 and x > 1e-6 and u - x > 1e-12:
            inside.append(z)
    outer = []
    while len(outer) < n_annulus:
        r = rng.uniform(*annulus)
        t = rng.uniform(-math.pi, math.pi)
        z = r * cmath.exp(1j * t)
        if 1 - abs(z) ** 2 - abs(1 - z) ** 2 < -1e-12:
            outer.append(z)
    return inside, outer


def sign_regions_check(branch: str, p: float, kappa: float, delta: float | None = None,
                       n_inside: int = 400, n_annulus: int = 400, seed: int = 0,
                       exact_tol: float = 1e-10, annulus: tuple = (0.95, 0.999)) -> SignRegionReport:
    """Sample the sign of P(D)[psi_pm l_delta] against the expected sub/supersolution pattern.

    ``delta=None`` picks |delta| = 1 with the sign that makes the logarithmic
    term share the sign of C(gamma) inside D_1/2.
    """
    if branch not in ("plus", "minus"):
        raise ValueError("branch must be 'plus' or 'minus'")
    sign = 1 if branch == "plus" else -1
    gamma = gamma_pm(p, kappa, 1, sign)
    beta = beta_of_gamma(gamma, p, kappa)
    C = C_of(gamma, p, kappa)
    params = PdeParams(p, kappa, -1, 1)
    ansatz = PowerLawAnsatz(gamma, beta)
    inside, outer = sign_region_samples(n_inside, n_annulus, seed, annulus)
    exact = abs(C) < 1e-12
    expected = 0 if exact else (1 if C > 0 else -1)
    if delta is None:
        delta = 0.0 if exact else -float(expected)
    failures = []
    worst = 0.0
    for z in inside + outer:
        val = action_on_power_law_log(ansatz, z, params, delta)
        worst = max(worst, abs(val))
        if exact:
            if abs(val) > exact_tol:
                failures.append((z, val))
        elif val * expected <= 0:
            failures.append((z, val))
    return SignRegionReport(branch, p, kappa, delta, expected, len(inside), len(outer), failures, worst)


# ---------------------------------------------------------------------------
# coefficient series from the explicit solutions


def lambda_coeffs(alpha, count: int) -> list:
    """Taylor coefficients of (1 - x)^alpha; exact for rational alpha."""
    alpha = Fraction(alpha) if isinstance(alpha, (int, Fraction)) else alpha
    out = [Fraction(1) if isinstance(alpha, Fraction) else 1.0]
    for k in range(1, count):
        out.append(out[-1] * (k - 1 - alpha) / k)
    return out


def _series_kappa_kind(kappa, m):
    k = Fraction(kappa) if isinstance(kappa, (int, Fraction)) else Fraction(kappa).limit_denominator(10**6)
    if k == 2 * m:
        return "2m"
    if k == Fraction(2 * (m + 2), m):
        return "autre"
    return None


def series_coefficients(kappa, m: int, count: int) -> dict:
    """k -> E|a_{mk+1}|^2 (exact) at the two kappa values where p_m(kappa) = 2."""
    if count > 200:
        raise DomainError("count must be at most 200")
    kind = _series_kappa_kind(kappa, m)
    if kind is None:
        raise DomainError(
            f"no closed-form series at kappa={kappa}, m={m}; only kappa = 2m or 2(m+2)/m. "
            "Use the Monte Carlo estimator instead."
        )
    out = {}
    if kind == "2m":
        la = lambda_coeffs(Fraction(2, m), count)
        lb = lambda_coeffs(Fraction(-4, m), count)
        for k in range(count):
            s = sum(la[j] ** 2 * abs(lb[k - j]) for j in range(k + 1))
            out[k] = s / (m * k + 1) ** 2
    else:
        prod = Fraction(1)
        for k in range(count):
            out[k] = prod / ((m * k + 1) * Fraction(m) ** k * math.factorial(k))
            prod *= k * m + 2
    return out


def taylor_diagonal(kappa: float, m: int, count: int, radius: float = 0.7, grid: int = 128) -> np.ndarray:
    """Diagonal Taylor coefficients c_kk of E|h'|^2 in (zeta, conj zeta), by a 2-torus FFT.

    ``c_kk = (mk+1)^2 E|a_{mk+1}|^2``; the two variables are treated as
    independent so the coefficients come out of a plain 2D DFT.
    """
    alpha, beta, p = closed_form_exponents(kappa, m)
    if not math.isclose(p, 2.0, rel_tol=1e-12):
        raise DomainError("the explicit solution is E|h'|^2 only when p_m(kappa) = 2")
    t = 2 * np.pi * np.arange(grid) / grid
    z1 = radius * np.exp(1j * t)[:, None]
    z2 = radius * np.exp(1j * t)[None, :]
    F = (1 - z1) ** alpha * (1 - z2) ** alpha * (1 - z1 * z2) ** (-beta)
    coeffs = np.fft.fft2(F) / grid**2
    k = np.arange(count)
    return (coeffs[k, k] / radius ** (2 * k)).real


# ---------------------------------------------------------------------------
# integral means


class IntegralMeansFit(NamedTuple):
    slope: float
    intercept: float
    condition_number: float
    radii: np.ndarray
    means: np.ndarray
    expected_beta: float


def integral_mean(F: Callable[[complex], float], r: float) -> float:
    """(1/2pi) int_0^2pi F(r e^{i theta}) d theta by adaptive quadrature."""
    from scipy import integrate

    val, _ = integrate.quad(lambda t: F(r * cmath.exp(1j * t)), -math.pi, math.pi,
                            points=[0.0], limit=400, epsabs=0.0, epsrel=1e-11)
    return val / (2 * math.pi)


def fit_radii(npts: int = 40, r_min: float = 0.9, r_max: float = 0.999) -> np.ndarray:
    """Radii log-spaced in 1 - r."""
    return 1 - np.logspace(math.log10(1 - r_min), math.log10(1 - r_max), npts)


def integral_means_estimate(kappa: float, m: int = 1, p: float | None = None,
                            radii=None, F: Callable[[complex], float] | None = None) -> IntegralMeansFit:
    """Slope of log int E|h'(r e^{it})|^p dt against -log(1 - r)."""
    if F is None:
        pm = spectra.p_m_kappa(kappa, m)
        if p is not None and not math.isclose(p, pm, rel_tol=1e-12):
            raise DomainError("explicit solution only at p = p_m(kappa); supply F for other p")
        p = pm
        alpha, beta, _ = closed_form_exponents(kappa, m)

        def F(z):
            zeta = z**m
            return abs(1 - zeta) ** (2 * alpha) / (1 - abs(zeta) ** 2) ** beta

    radii = fit_radii() if radii is None else np.asarray(radii, dtype=float)
    means = np.array([integral_mean(F, r) for r in radii])
    X = np.column_stack([-np.log(1 - radii), np.ones_like(radii)])
    coef, *_ = np.linalg.lstsq(X, np.log(means), rcond=None)
    expected = spectra.whole_plane_spectrum(p, kappa, m).value
    return IntegralMeansFit(float(coef[0]), float(coef[1]), float(np.linalg.cond(X)), radii, means, expected)


# exact integral means sum n^2 E|a_n|^2 r^{2(n-1)} = num(x) / (1 - x)^k with x = r^2
# (x = r^4 for the odd m = 2 family); entries are (num coefficients, k, power of r)
COROLLARY_MEANS = {
    (0, 1): ([1, 11, 11, 1], 5, 2),
    (2, 1): ([1, 4, 1], 4, 2),
    (6, 1): ([1, 1], 3, 2),
    (4, 2): ([1, 1], 2, 4),
}


def corollary_means(kappa, m: int = 1, r: float | None = None):
    """Exact (1/2pi) int E|h'(r e^{it})|^2 dt for (kappa, m) in {(0,1), (2,1), (6,1), (4,2)}.

    Returns ``(num, k, power)`` meaning num(x)/(1 - x)^k with x = r**power,
    or its value when ``r`` is given.
    """
    key = (int(kappa), m) if float(kappa).is_integer() else None
    if key not in COROLLARY_MEANS:
        raise DomainError("exact integral means are tabulated for (kappa, m) in (0,1), (2,1), (6,1), (4,2)")
    num, k, power = COROLLARY_MEANS[key]
    if r is None:
        return num, k, power
    x = np.asarray(r, dtype=float) ** power
    return np.polyval(num[::-1], x) / (1 - x) ** k


# ---------------------------------------------------------------------------
# generator of the driving process on finite Fourier sums


def generator_action(symbol, coeffs: dict) -> dict:
    """Apply the rotation generator -eta(j - l) to sum c_{jl} z^j conj(z)^l."""
    return {jl: -symbol.eta(jl[0] - jl[1]) * c for jl, c in coeffs.items()}


def brownian_generator_action(kappa, coeffs: dict) -> dict:
    """(kappa/2) d^2/dtheta^2 on the same Fourier sum."""
    return {jl: -Fraction(kappa) * (jl[0] - jl[1]) ** 2 / 2 * c for jl, c in coeffs.items()}


def lle_transfer_check(symbol, kappa) -> bool:
    """The generator of ``symbol`` and of sqrt(kappa) B agree on (1 - z)(1 - conj z)."""
    modes = {(0, 0): 1, (1, 0): -1, (0, 1): -1, (1, 1): 1}
    return generator_action(symbol, modes) == brownian_generator_action(kappa, modes)
