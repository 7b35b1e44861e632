"""Hot loops: level-pair DP and backward coefficient integration.

Each kernel has a numba version and a plain numpy version with identical
arithmetic. ``LOEWNER_LAB_NUMBA=0`` forces the numpy path; it is also used
when numba is not importable.
"""

from __future__ import annotations

import math
import os

import numpy as np

from .errors import ResonanceError

RESONANCE_TOL = 1e-13

try:  # pragma: no cover - import guard
    import numba

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    numba = None
    _HAVE_NUMBA = False


def numba_enabled() -> bool:
    return _HAVE_NUMBA and os.environ.get("LOEWNER_LAB_NUMBA", "1").strip().lower() not in ("0", "false", "no", "off")


def backend_name() -> str:
    return "numba" if numba_enabled() else "numpy"


# ---------------------------------------------------------------------------
# level DP


def _level_dp_py(whole_plane: bool, etas: np.ndarray, n_max: int):
    lo = 1 if whole_plane else 0
    shift = -2.0 if whole_plane else 0.0
    size = n_max + 1
    V = np.zeros((size, size))
    V[lo, lo] = 1.0
    ks = np.arange(size, dtype=np.float64)
    w = -2.0 * ks if whole_plane else -(2.0 * ks + 1.0)
    for s in range(2 * lo + 1, 2 * n_max + 1):
        for kl in range(max(lo, s - n_max), min(n_max, s - lo) + 1):
            kr = s - kl
            acc = np.dot(w[lo:kl], V[lo:kl, kr]) + np.dot(w[lo:kr], V[kl, lo:kr])
            f = kl + kr + shift + etas[abs(kl - kr)]
            if abs(f) < RESONANCE_TOL:
                return V.diagonal().copy(), kl, kr
            V[kl, kr] = acc / f
    return V.diagonal().copy(), -1, -1


def _level_dp_nb_impl(whole_plane, etas, n_max):
    lo = 1 if whole_plane else 0
    shift = -2.0 if whole_plane else 0.0
    size = n_max + 1
    V = np.zeros((size, size))
    V[lo, lo] = 1.0
    for s in range(2 * lo + 1, 2 * n_max + 1):
        for kl in range(max(lo, s - n_max), min(n_max, s - lo) + 1):
            kr = s - kl
            acc = 0.0
            for kp in range(lo, kl):
                w = -2.0 * kp if whole_plane else -(2.0 * kp + 1.0)
                acc += w * V[kp, kr]
            for kp in range(lo, kr):
                w = -2.0 * kp if whole_plane else -(2.0 * kp + 1.0)
                acc += w * V[kl, kp]
            f = kl + kr + shift + etas[abs(kl - kr)]
            if abs(f) < RESONANCE_TOL:
                return np.diag(V).copy(), kl, kr
            V[kl, kr] = acc / f
    return np.diag(V).copy(), -1, -1


def level_dp(whole_plane: bool, etas, n_max: int) -> np.ndarray:
    """Diagonal V(n, n) of the level-pair recursion."""
    etas = np.ascontiguousarray(etas, dtype=np.float64)
    if numba_enabled():
        diag, kl, kr = _level_dp_nb(whole_plane, etas, n_max)
    else:
        diag, kl, kr = _level_dp_py(whole_plane, etas, n_max)
    if kl >= 0:
        raise ResonanceError(f"resonant denominator at level pair ({kl}, {kr})")
    return diag


# ---------------------------------------------------------------------------
# coefficient integration along a driving path
#
# u_n(t) = -2 int_t^T sum_{k<n} k X^{n-k} u_k ds   (u_1 = 1)
# w_n(t) = -  int_t^T sum_{k<n} (2k+1) X^{n-k} w_k ds   (w_0 = 1)
# with X_s = exp(-s - i L_s), trapezoid rule backwards from T. The integrand
# G_n = sum_{k<n} c_k X^{n-k} u_k obeys G_n = X (G_{n-1} + c_{n-1} u_{n-1}),
# so each time step costs O(n_max).


def _integrate_nb_impl(L, dt, n_max, whole_plane, out):
    nsamp, npts = L.shape
    lo = 1 if whole_plane else 0
    half_dt = 0.5 * dt
    size = n_max + 1
    decay = np.exp(-dt * np.arange(npts))
    u = np.zeros(size, dtype=np.complex128)
    g_next = np.zeros(size, dtype=np.complex128)
    for s in range(nsamp):
        u[:] = 0.0
        g_next[:] = 0.0
        u[lo] = 1.0
        for i in range(npts - 1, -1, -1):
            x = complex(decay[i] * math.cos(L[s, i]), -decay[i] * math.sin(L[s, i]))
            g = 0.0j
            for n in range(lo + 1, size):
                c = 2.0 * (n - 1) if whole_plane else 2.0 * n - 1.0
                g = x * (g + c * u[n - 1])
                if i < npts - 1:
                    u[n] -= half_dt * (g + g_next[n])
                g_next[n] = g
        for n in range(size):
            out[s, n] = u[n]


def _integrate_py(L, dt, n_max, whole_plane):
    nsamp, npts = L.shape
    lo = 1 if whole_plane else 0
    size = n_max + 1
    u = np.zeros((size, nsamp), dtype=np.complex128)
    u[lo] = 1.0
    g_next = np.zeros((size, nsamp), dtype=np.complex128)
    decay = np.exp(-dt * np.arange(npts))
    for i in range(npts - 1, -1, -1):
        x = decay[i] * (np.cos(L[:, i]) - 1j * np.sin(L[:, i]))
        g = np.zeros(nsamp, dtype=np.complex128)
        for n in range(lo + 1, size):
            c = 2.0 * (n - 1) if whole_plane else 2.0 * n - 1.0
            g = x * (g + c * u[n - 1])
            if i < npts - 1:
                u[n] -= 0.5 * dt * (g + g_next[n])
            g_next[n] = g
    return u.T.copy()


if _HAVE_NUMBA:  # pragma: no branch
    _level_dp_nb = numba.njit(cache=True, nogil=True)(_level_dp_nb_impl)
    _integrate_nb = numba.njit(cache=True, nogil=True)(_integrate_nb_impl)
else:  # pragma: no cover
    _level_dp_nb = _level_dp_nb_impl
    _integrate_nb = _integrate_nb_impl


def integrate_coefficients(L: np.ndarray, dt: float, n_max: int, whole_plane: bool) -> np.ndarray:
    """Coefficients at time 0 for each row of ``L`` (shape samples x grid points).

    Column ``n`` holds a_n (whole plane) or b_{2n+1} (odd family).
    """
    L = np.ascontiguousarray(L, dtype=np.float64)
    if L.ndim == 1:
        L = L[None, :]
    if numba_enabled():
        out = np.zeros((L.shape[0], n_max + 1), dtype=np.complex128)
        _integrate_nb(L, float(dt), int(n_max), bool(whole_plane), out)
        return out
    return _integrate_py(L, float(dt), int(n_max), bool(whole_plane))
