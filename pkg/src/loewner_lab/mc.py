"""Monte Carlo estimates of coefficient moments from simulated driving processes.

Each sample draws a driving path L on a uniform grid, then integrates the
coefficient recursion backwards from the horizon T. Sample ``i`` uses its own
Philox stream keyed by ``(seed, i)``, so results do not depend on how samples
are split across threads.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import _kernels
from .levy import LevySymbol, parse_number

DEFAULT_DT = 2.0**-9
HORIZON_PAD = 12  # T = n_max + 12: the integrands decay like e^{-s}
MIN_SAMPLES = 100

BROWNIAN = "brownian"
STABLE = "stable"
POISSON = "poisson"
COMPOSITE = "composite"

FAMILY_F = "f"  # whole-plane map, a_n
FAMILY_H = "h"  # oddified map, b_{2n+1}


@dataclass(frozen=True)
class Driver:
    """Driving process L_t.

    ``turns`` sets the Poisson jump size 2*pi*turns; the default full turn
    leaves exp(i L_t) unchanged by a jump.
    """

    kind: str
    kappa: float = 0.0
    alpha: float = 2.0
    lam: float = 0.0
    turns: float = 1.0

    def __post_init__(self):
        if self.kind not in (BROWNIAN, STABLE, POISSON, COMPOSITE):
            raise ValueError(f"unknown driver kind {self.kind!r}")
        if self.kappa < 0 or self.lam < 0:
            raise ValueError("kappa and lambda must be nonnegative")
        if self.kind == STABLE and not 0 < self.alpha <= 2:
            raise ValueError("stable index alpha must lie in (0, 2]")
        if self.kind in (POISSON, COMPOSITE) and self.turns == 0:
            raise ValueError("jump size must be nonzero")

    @classmethod
    def brownian(cls, kappa) -> "Driver":
        return cls(BROWNIAN, kappa=kappa)

    @classmethod
    def stable(cls, alpha, kappa) -> "Driver":
        return cls(STABLE, kappa=kappa, alpha=alpha)

    @classmethod
    def poisson_bernoulli(cls, lam, turns=1) -> "Driver":
        return cls(POISSON, lam=lam, turns=turns)

    @classmethod
    def composite(cls, kappa, lam, turns=1) -> "Driver":
        return cls(COMPOSITE, kappa=kappa, lam=lam, turns=turns)

    def symbol(self) -> LevySymbol:
        """The Levy symbol eta_k of this driver."""
        if self.kind == BROWNIAN:
            return LevySymbol.sle(self.kappa)
        if self.kind == STABLE:
            return LevySymbol.stable(self.alpha, self.kappa)
        kappa = self.kappa if self.kind == COMPOSITE else 0
        return LevySymbol.brownian_plus_poisson(kappa, self.lam, self.turns)

    def spec(self) -> str:
        f = _fmt
        if self.kind == BROWNIAN:
            return f"brownian:{f(self.kappa)}"
        if self.kind == STABLE:
            return f"stable:{f(self.alpha)}:{f(self.kappa)}"
        tail = "" if self.turns == 1 else f":{f(self.turns)}"
        if self.kind == POISSON:
            return f"poisson:{f(self.lam)}{tail}"
        return f"composite:{f(self.kappa)}:{f(self.lam)}{tail}"


def _fmt(x) -> str:
    x = float(x)
    return str(int(x)) if x.is_integer() else repr(x)


def parse_driver(text: str) -> Driver:
    """``brownian:6``, ``koebe``, ``stable:1.5:2``, ``poisson:0.5[:turns]``, ``composite:6:0.5[:turns]``."""
    parts = text.strip().split(":")
    head, args = parts[0].lower(), [float(parse_number(a)) for a in parts[1:]]
    try:
        if head == "koebe" and not args:
            return Driver.brownian(0.0)
        if head in ("brownian", "sle") and len(args) == 1:
            return Driver.brownian(args[0])
        if head == "stable" and len(args) == 2:
            return Driver.stable(*args)
        if head in ("poisson", "poisson_bernoulli") and len(args) in (1, 2):
            return Driver.poisson_bernoulli(*args)
        if head == "composite" and len(args) in (2, 3):
            return Driver.composite(*args)
    except ValueError as exc:
        raise ValueError(f"bad driver spec {text!r}: {exc}") from None
    raise ValueError(f"bad driver spec {text!r}")


@dataclass(frozen=True)
class SamplePath:
    dt: float
    values: np.ndarray  # L at t_i = i * dt, L_0 = 0

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.values.size) * self.dt

    @property
    def horizon(self) -> float:
        return (self.values.size - 1) * self.dt

    @property
    def X(self) -> np.ndarray:
        return np.exp(-self.times - 1j * self.values)


def sample_rng(seed: int, index: int) -> np.random.Generator:
    """Counter-based stream for sample ``index``."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(index,))))


def _stable_standard(rng: np.random.Generator, alpha: float, size: int) -> np.ndarray:
    # Chambers-Mallows-Stuck, symmetric case: E exp(i k X) = exp(-|k|^alpha)
    V = rng.uniform(-math.pi / 2, math.pi / 2, size)
    W = rng.exponential(1.0, size)
    if alpha == 1:
        return np.tan(V)
    return np.sin(alpha * V) / np.cos(V) ** (1 / alpha) * (np.cos((1 - alpha) * V) / W) ** ((1 - alpha) / alpha)


def _poisson_jumps(rng: np.random.Generator, lam: float, turns: float, dt: float, size: int) -> np.ndarray:
    counts = rng.poisson(lam * dt, size)
    ups = rng.binomial(counts, 0.5)
    return (2 * ups - counts) * (2 * math.pi * turns)


def increments(driver: Driver, rng: np.random.Generator, dt: float, size: int) -> np.ndarray:
    """``size`` independent increments of L over steps of length ``dt``."""
    k = driver.kind
    if k == BROWNIAN:
        if driver.kappa == 0:
            return np.zeros(size)
        return rng.standard_normal(size) * math.sqrt(driver.kappa * dt)
    if k == STABLE:
        return _stable_standard(rng, driver.alpha, size) * (driver.kappa * dt / 2) ** (1 / driver.alpha)
    if k == POISSON:
        return _poisson_jumps(rng, driver.lam, driver.turns, dt, size)
    gauss = rng.standard_normal(size) * math.sqrt(driver.kappa * dt)
    return gauss + _poisson_jumps(rng, driver.lam, driver.turns, dt, size)


def _grid_size(T: float, dt: float) -> int:
    if T <= 0 or dt <= 0:
        raise ValueError("T and dt must be positive")
    return int(round(T / dt))


def sample_path(driver: Driver, T: float, dt: float, seed: int, index: int = 0) -> SamplePath:
    steps = _grid_size(T, dt)
    inc = increments(driver, sample_rng(seed, index), dt, steps)
    values = np.empty(steps + 1)
    values[0] = 0.0
    np.cumsum(inc, out=values[1:])
    return SamplePath(dt, values)


def coefficients_one_path(path: SamplePath, n_max: int, family: str = FAMILY_F) -> dict:
    """a_2..a_{n_max} (family f) or b_3..b_{2 n_max + 1} keyed by n (family h)."""
    whole = _whole_plane(family)
    row = _kernels.integrate_coefficients(path.values[None, :], path.dt, n_max, whole)[0]
    start = 2 if whole else 1
    return {n: complex(row[n]) for n in range(start, n_max + 1)}


def _whole_plane(family: str) -> bool:
    if family not in (FAMILY_F, FAMILY_H):
        raise ValueError("family must be 'f' or 'h'")
    return family == FAMILY_F


def coefficient_label(n: int, family: str) -> str:
    return f"a_{n}" if family == FAMILY_F else f"b_{2 * n + 1}"


@dataclass(frozen=True)
class McEstimate:
    n: int
    quantity: str  # "mean" for E(c_n), "abs2" for E|c_n|^2
    mean: complex | float
    stderr: float
    samples: int
    seed: int
    config: dict = field(default_factory=dict, compare=False)


@dataclass
class MomentTable:
    family: str
    estimates: list
    config: dict

    def get(self, n: int, quantity: str = "abs2") -> McEstimate:
        for e in self.estimates:
            if e.n == n and e.quantity == quantity:
                return e
        raise KeyError((n, quantity))

    def ns(self) -> list:
        return sorted({e.n for e in self.estimates})


def default_workers() -> int:
    env = os.environ.get("LOEWNER_LAB_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def simulate_coefficients(driver: Driver, n_max: int, samples: int, seed: int, family: str = FAMILY_F,
                          T: float | None = None, dt: float = DEFAULT_DT, workers: int | None = None,
                          batch: int = 256) -> np.ndarray:
    """Coefficient array [samples, n_max + 1], row i from sample stream i."""
    whole = _whole_plane(family)
    T = float(n_max + HORIZON_PAD) if T is None else float(T)
    steps = _grid_size(T, dt)
    out = np.empty((samples, n_max + 1), dtype=np.complex128)

    def run(start: int) -> None:
        stop = min(start + batch, samples)
        L = np.empty((stop - start, steps + 1))
        L[:, 0] = 0.0
        for row, i in enumerate(range(start, stop)):
            np.cumsum(increments(driver, sample_rng(seed, i), dt, steps), out=L[row, 1:])
        out[start:stop] = _kernels.integrate_coefficients(L, dt, n_max, whole)

    starts = range(0, samples, batch)
    workers = default_workers() if workers is None else max(1, int(workers))
    if workers == 1:
        for s in starts:
            run(s)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(run, starts))
    return out


def estimate_moments(driver: Driver, n_max: int, samples: int, seed: int, family: str = FAMILY_F,
                     T: float | None = None, dt: float = DEFAULT_DT, workers: int | None = None) -> MomentTable:
    """E(c_n) and E|c_n|^2 with standard errors, for n = 2..n_max (f) or 1..n_max (h)."""
    if samples < MIN_SAMPLES:
        raise ValueError(f"need at least {MIN_SAMPLES} samples")
    T = float(n_max + HORIZON_PAD) if T is None else float(T)
    coeffs = simulate_coefficients(driver, n_max, samples, seed, family, T, dt, workers)
    config = {
        "driver": driver.spec(),
        "n_max": n_max,
        "samples": samples,
        "seed": seed,
        "family": family,
        "T": T,
        "dt": dt,
        "backend": _kernels.backend_name(),
    }
    root = math.sqrt(samples)
    start = 2 if family == FAMILY_F else 1
    estimates = []
    for n in range(start, n_max + 1):
        c = coeffs[:, n]
        a2 = np.abs(c) ** 2
        estimates.append(McEstimate(n, "mean", complex(np.mean(c)), float(np.std(c) / root), samples, seed, config))
        estimates.append(McEstimate(n, "abs2", float(np.mean(a2)), float(np.std(a2) / root), samples, seed, config))
    return MomentTable(family, estimates, config)


def koebe_coefficients(n_max: int, family: str = FAMILY_F, dt: float = 2.0**-14, T: float | None = None) -> dict:
    """Coefficients for the deterministic driver L = 0.

    Uses a finer step than the random runs: the path is smooth, so the
    trapezoid error (order dt^2) is the only error left.
    """
    T = float(n_max + HORIZON_PAD + 8) if T is None else float(T)
    path = SamplePath(dt, np.zeros(_grid_size(T, dt) + 1))
    return coefficients_one_path(path, n_max, family)


def config_dict(table: MomentTable) -> dict:
    return dict(table.config)


def estimate_to_dict(e: McEstimate) -> dict:
    d = asdict(e)
    d.pop("config")
    if isinstance(e.mean, complex):
        d["mean"] = [e.mean.real, e.mean.imag]
    return d
