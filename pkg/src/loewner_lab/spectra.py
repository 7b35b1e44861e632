"""Average integral means spectra of whole-plane SLE and their transition points."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import NamedTuple

from .errors import DomainError


class Regime(str, enum.Enum):
    TIP = "tip"
    BULK = "bulk_beta0"
    LINEAR = "linear_beta0hat"
    UNBOUNDED = "unbounded_Bm"


EXACT = "exact"
CONJECTURED = "conjectured-exact"


@dataclass(frozen=True)
class SpectrumQuery:
    p: float
    kappa: float
    m: int = 1

    def __post_init__(self):
        if self.kappa < 0:
            raise DomainError("kappa must be nonnegative")
        if int(self.m) != self.m or self.m < 1:
            raise DomainError("m must be a positive integer")


@dataclass(frozen=True)
class SpectrumValue:
    value: float
    regime: Regime
    transitions: dict = field(default_factory=dict)
    status: str = EXACT


class BulkSpectrum(NamedTuple):
    gamma0: float
    beta0: float
    beta0_hat: float
    beta0_bar: float
    p0_star: float


class TransitionPoints(NamedTuple):
    p_star: float
    p_m_star: float
    p_m_2star: float | None  # only meaningful for m >= 4 and kappa >= kappa_m
    kappa_m: float | None  # defined for m >= 4
    p_kappa: float
    p_m_kappa: float
    p0_star: float
    p_tip: float


# ---------------------------------------------------------------------------
# pieces


def gamma0(p: float, kappa: float) -> float:
    disc = (4 + kappa) ** 2 - 8 * kappa * p
    if disc < 0:
        raise DomainError(f"beyond beta0 analyticity: p={p} > (4+kappa)^2/(8 kappa)")
    return (4 + kappa - math.sqrt(disc)) / (2 * kappa)


def beta0(p: float, kappa: float) -> float:
    if kappa == 0:
        return 0.0 if p >= -1 else -p - 1.0
    return -p + (4 + kappa) * gamma0(p, kappa) / 2


def beta0_hat(p: float, kappa: float) -> float:
    return p - (4 + kappa) ** 2 / (16 * kappa)


def p0_star(kappa: float) -> float:
    return 3 * (4 + kappa) ** 2 / (32 * kappa)


def beta_tip(p: float, kappa: float) -> float:
    return -p - 1 + kappa * gamma0(p, kappa) / 2


def B_m(p: float, kappa: float, m: int = 1) -> float:
    """Spectrum of the unbounded part of the m-fold map."""
    arg = 1 + 2 * kappa * p / m
    if arg < 0:
        raise DomainError("B_m undefined for 1 + 2 kappa p / m < 0")
    return (1 + 2 / m) * p - 0.5 - 0.5 * math.sqrt(arg)


def bulk_spectrum(p: float, kappa: float) -> BulkSpectrum:
    if kappa <= 0:
        raise DomainError("bulk spectrum needs kappa > 0")
    g = gamma0(p, kappa)
    b0 = -p + (4 + kappa) * g / 2
    bh = beta0_hat(p, kappa)
    ps = p0_star(kappa)
    return BulkSpectrum(g, b0, bh, b0 if p <= ps else bh, ps)


# ---------------------------------------------------------------------------
# transition points


def p_star(kappa: float) -> float:
    r = math.sqrt(2 * (4 + kappa) ** 2 + 4)
    return ((4 + kappa) ** 2 - 4 - 2 * r) / (16 * kappa)


def p_m_star(kappa: float, m: int) -> float:
    if m == 1:  # same float as p_star, so ties resolve identically
        return p_star(kappa)
    r = math.sqrt((m + 1) * (4 + kappa) ** 2 + 4 * m * m)
    return m / (8 * kappa * (m + 1) ** 2) * (r - 2 * m - 4) * (r + 2 * m)


def kappa_m(m: int) -> float | None:
    return 4 * (m + 3) / (m - 3) if m >= 4 else None


def p_m_2star(kappa: float, m: int) -> float:
    return m * (kappa * kappa - 16) / (32 * kappa)


def p_kappa(kappa: float) -> float:
    return (6 + kappa) * (2 + kappa) / (8 * kappa)


def p_m_kappa(kappa: float, m: int) -> float:
    return m * (2 * m + 4 + kappa) * (2 + kappa) / (2 * (m + 1) ** 2 * kappa)


def p_tip(kappa: float) -> float:
    return -1 - 3 * kappa / 8


def transition_points(kappa: float, m: int = 1) -> TransitionPoints:
    if kappa <= 0:
        raise DomainError("transition points need kappa > 0")
    km = kappa_m(m)
    has_second = km is not None and kappa >= km
    return TransitionPoints(
        p_star=p_star(kappa),
        p_m_star=p_m_star(kappa, m),
        p_m_2star=p_m_2star(kappa, m) if has_second else None,
        kappa_m=km,
        p_kappa=p_kappa(kappa),
        p_m_kappa=p_m_kappa(kappa, m),
        p0_star=p0_star(kappa),
        p_tip=p_tip(kappa),
    )


def _uses_linear_piece(kappa: float, m: int) -> bool:
    km = kappa_m(m)
    return km is not None and kappa > km


# ---------------------------------------------------------------------------
# the full spectrum


def whole_plane_spectrum(q, kappa: float | None = None, m: int = 1) -> SpectrumValue:
    """beta_m(p, kappa); accepts a SpectrumQuery or ``(p, kappa, m)``."""
    if not isinstance(q, SpectrumQuery):
        q = SpectrumQuery(float(q), float(kappa), m)
    p, kappa, m = q.p, q.kappa, q.m
    if kappa == 0:
        return _koebe_spectrum(p, m)
    tp = transition_points(kappa, m)
    trans = {"p_tip": tp.p_tip}
    if p < tp.p_tip:
        return SpectrumValue(beta_tip(p, kappa), Regime.TIP, trans)
    if _uses_linear_piece(kappa, m):
        trans.update(p0_star=tp.p0_star, p_m_2star=tp.p_m_2star)
        if p < tp.p0_star:
            return SpectrumValue(beta0(p, kappa), Regime.BULK, trans)
        if p < tp.p_m_2star:
            return SpectrumValue(beta0_hat(p, kappa), Regime.LINEAR, trans)
    else:
        trans["p_m_star"] = tp.p_m_star
        if p < tp.p_m_star:
            return SpectrumValue(beta0(p, kappa), Regime.BULK, trans)
    trans["p_m_kappa"] = tp.p_m_kappa
    exact_point = math.isclose(p, tp.p_m_kappa, rel_tol=1e-12, abs_tol=1e-12)
    return SpectrumValue(B_m(p, kappa, m), Regime.UNBOUNDED, trans, EXACT if exact_point else CONJECTURED)


def _koebe_spectrum(p: float, m: int) -> SpectrumValue:
    # kappa -> 0 limit: max{0, (1+2/m)p - 1, -p - 1}
    trans = {"p_tip": -1.0, "p_m_star": m / (m + 2)}
    if p < -1:
        return SpectrumValue(-p - 1.0, Regime.TIP, trans)
    if p < m / (m + 2):
        return SpectrumValue(0.0, Regime.BULK, trans)
    return SpectrumValue((1 + 2 / m) * p - 1.0, Regime.UNBOUNDED, trans)


def beta2_closed(kappa: float) -> float:
    """beta(2, kappa) for the whole-plane map while p=2 lies past the transition."""
    return (11 - math.sqrt(1 + 4 * kappa)) / 2


# ---------------------------------------------------------------------------
# packing spectrum and its inverse


def s_min(kappa: float) -> float:
    return -((4 - kappa) ** 2) / (16 * kappa)


def p_min(kappa: float) -> float:
    return (kappa - 4) * (kappa + 4) / (32 * kappa)


def packing(p: float, kappa: float, m: int = 1) -> float:
    """s_m(p) = s(p/m) with s(p) = 2p + 1/2 - sqrt(1 + 2 kappa p)/2."""
    x = p / m
    arg = 1 + 2 * kappa * x
    if arg < 0:
        raise DomainError("packing spectrum undefined for 1 + 2 kappa p/m < 0")
    return 2 * x + 0.5 - 0.5 * math.sqrt(arg)


def _root(s: float, kappa: float) -> float:
    disc = (4 - kappa) ** 2 + 16 * kappa * s
    if s < s_min(kappa) or disc < 0:
        raise DomainError(f"below branch point: s={s} < s_min={s_min(kappa)}")
    return math.sqrt(max(disc, 0.0))


def u_inverse(s: float, kappa: float) -> float:
    return (kappa - 4 + _root(s, kappa)) / (2 * kappa)


def packing_inverse(s: float, kappa: float, m: int = 1) -> float:
    """p_m(s) = m p(s), physical branch."""
    return m * (s / 2 + (kappa - 4 + _root(s, kappa)) / 16)


def nu(s: float, kappa: float) -> float:
    """Radial derivative exponent, written through U^-1."""
    return s / 2 + kappa / 8 * u_inverse(s, kappa)


def q_exponent(s: float, kappa: float) -> float:
    return u_inverse(s, kappa)


class PackingValues(NamedTuple):
    s_m: float | None
    p_m: float | None
    u_inverse: float | None
    nu: float | None
    q: float | None
    s_min: float
    p_min: float


def packing_and_inverse(kappa: float, m: int = 1, p: float | None = None, s: float | None = None) -> PackingValues:
    if kappa <= 0:
        raise DomainError("packing spectra need kappa > 0")
    sm = packing(p, kappa, m) if p is not None else None
    if s is not None:
        return PackingValues(sm, packing_inverse(s, kappa, m), u_inverse(s, kappa), nu(s, kappa),
                             q_exponent(s, kappa), s_min(kappa), p_min(kappa))
    return PackingValues(sm, None, None, None, None, s_min(kappa), p_min(kappa))


# ---------------------------------------------------------------------------
# universal bound


class BoundValue(NamedTuple):
    value: float
    asserted: bool  # False below the validity threshold p >= 2m/(m+4)


def universal_bounds(p: float, m: int = 1) -> BoundValue:
    value = (m + 2) / m * p - 1
    return BoundValue(value, p >= 2 * m / (m + 4))
