"""CUSUM process, its integrals, and the scaling functions tau / tau-tilde.

All routines take the time index on axis 0. A 1-D input is a single
component of length ``n``; a 2-D input of shape ``(n, d)`` is a panel and is
processed column by column in one vectorised pass.

The CUSUM path of a component is stored on the left endpoints ``j / n`` for
``j = 0, ..., n - 1``. Since the process is piecewise constant on
``[j/n, (j+1)/n)``, every integral below is evaluated in closed form.
"""

from __future__ import annotations

import numba
import numpy as np

from .errors import InvalidInputError

__all__ = [
    "compensated_cumsum",
    "cusum_path",
    "integral_squared",
    "m_hat_squared",
    "tau",
    "tau_tilde",
    "bridge_kernel",
    "kernel_segment_weights",
    "integral_cusum_kernel",
]


@numba.njit(cache=True)
def _neumaier_cumsum_2d(x):
    n, m = x.shape
    out = np.empty((n, m))
    s = np.zeros(m)
    c = np.zeros(m)
    for i in range(n):
        for j in range(m):
            v = x[i, j]
            t = s[j] + v
            if abs(s[j]) >= abs(v):
                c[j] += (s[j] - t) + v
            else:
                c[j] += (v - t) + s[j]
            s[j] = t
            out[i, j] = s[j] + c[j]
    return out


def compensated_cumsum(x: np.ndarray) -> np.ndarray:
    """Prefix sums along axis 0 with Neumaier compensation.

    Summation runs strictly left to right, so the ``j``-th output equals a
    fresh compensated summation of ``x[0], ..., x[j]``.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 1:
        return _neumaier_cumsum_2d(np.ascontiguousarray(x[:, None]))[:, 0]
    shape = x.shape
    flat = np.ascontiguousarray(x.reshape(shape[0], -1))
    return _neumaier_cumsum_2d(flat).reshape(shape)


def _as_series(z) -> np.ndarray:
    z = np.asarray(z, dtype=np.float64)
    if z.ndim not in (1, 2):
        raise InvalidInputError(f"expected a 1-D or 2-D array, got ndim={z.ndim}")
    if z.shape[0] < 4:
        raise InvalidInputError(f"need at least 4 observations, got n={z.shape[0]}")
    if not np.all(np.isfinite(z)):
        raise InvalidInputError("series contains non-finite values")
    return z


def cusum_path(z) -> np.ndarray:
    """CUSUM path ``u_j = S_j / n - j S_n / n**2`` for ``j = 0, ..., n-1``.

    ``S_j`` is the sum of the first ``j`` observations (``S_0 = 0``).
    Prefix sums are taken left to right with Neumaier compensation over the
    series anchored at its first value, ``z - z[0]``.

    Parameters
    ----------
    z : array_like, shape (n,) or (n, d)
        Observations, time on axis 0. Requires ``n >= 4``.

    Returns
    -------
    ndarray
        Path values with the same shape as ``z``.
    """
    return _cusum_unchecked(_as_series(z))


def _cusum_unchecked(z: np.ndarray) -> np.ndarray:
    # time on axis 0, any number of trailing axes. The path is shift
    # invariant, so sums run over z - z[0]: constant series give exact zeros
    # and cancellation is reduced for series with a large common level.
    n = z.shape[0]
    prefix = compensated_cumsum(z - z[0])
    partial = np.zeros_like(z)
    partial[1:] = prefix[:-1]
    total = prefix[-1]
    j = np.arange(n, dtype=np.float64).reshape((n,) + (1,) * (z.ndim - 1))
    return partial / n - (j * total) / (n * n)


def integral_squared(u: np.ndarray) -> np.ndarray | float:
    """Exact integral of the squared step path over [0, 1]."""
    u = np.asarray(u, dtype=np.float64)
    return np.sum(u * u, axis=0) / u.shape[0]


def _check_open_unit(t, name: str = "t"):
    t = np.asarray(t, dtype=np.float64)
    if np.any(~(t > 0.0)) or np.any(~(t < 1.0)):
        raise InvalidInputError(f"{name} must lie strictly inside (0, 1)")
    return t


def m_hat_squared(u: np.ndarray, t_hat) -> np.ndarray | float:
    """Scaled integrated squared CUSUM ``3 / (t(1-t))**2 * int U**2``."""
    t_hat = _check_open_unit(t_hat, "t_hat")
    out = 3.0 / (t_hat * (1.0 - t_hat)) ** 2 * integral_squared(u)
    return out[()] if np.ndim(out) == 0 else out


def tau(t) -> np.ndarray | float:
    """Normalising function ``2 sqrt(1 + 2t(1-t)) / (sqrt(5) t (1-t))``."""
    t = _check_open_unit(t)
    v = t * (1.0 - t)
    out = 2.0 * np.sqrt(1.0 + 2.0 * v) / (np.sqrt(5.0) * v)
    return out[()] if np.ndim(out) == 0 else out


def bridge_kernel(s, t):
    """Brownian bridge covariance ``min(s, t) - s t``."""
    s = np.asarray(s, dtype=np.float64)
    t = np.asarray(t, dtype=np.float64)
    out = np.minimum(s, t) - s * t
    return out[()] if np.ndim(out) == 0 else out


def _kernel_antiderivative(s, t):
    # F(s) = int_0^s k(x, t) dx
    below = 0.5 * s * s * (1.0 - t)
    above = 0.5 * t * t * (1.0 - t) + t * ((s - t) - 0.5 * (s * s - t * t))
    return np.where(s <= t, below, above)


def kernel_segment_weights(n: int, t) -> np.ndarray:
    """Integrals of ``k(., t)`` over the grid cells ``[j/n, (j+1)/n)``.

    Returns shape ``(n,)`` for scalar ``t`` and ``(n, d)`` for a vector of
    ``d`` locations. The cell containing ``t`` is handled by the piecewise
    antiderivative, so the result is exact up to rounding.
    """
    t = np.asarray(t, dtype=np.float64)
    grid = np.arange(n + 1, dtype=np.float64) / n
    if t.ndim == 1:
        grid = grid[:, None]
    F = _kernel_antiderivative(grid, t)
    return np.diff(F, axis=0)


def integral_cusum_kernel(u: np.ndarray, t) -> np.ndarray | float:
    """Exact ``int_0^1 U(s) k(s, t) ds`` for a step path ``u``.

    ``t`` is a scalar or, for a 2-D path of shape ``(n, d)``, a length ``d``
    vector of per-column locations.
    """
    u = np.asarray(u, dtype=np.float64)
    t = np.asarray(t, dtype=np.float64)
    w = kernel_segment_weights(u.shape[0], t)
    if u.ndim == 2 and w.ndim == 1:
        w = w[:, None]
    out = np.sum(u * w, axis=0)
    return out[()] if np.ndim(out) == 0 else out


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)


def _gauss_legendre(a, b, panels: int = 8):
    """Composite 16-point Gauss-Legendre nodes/weights on ``[a, b]``.

    ``a`` and ``b`` may be arrays of equal shape; nodes are appended on a new
    trailing axis.
    """
    a = np.asarray(a, dtype=np.float64)[..., None]
    b = np.asarray(b, dtype=np.float64)[..., None]
    edges = a + (b - a) * np.linspace(0.0, 1.0, panels + 1)
    lo, hi = edges[..., :-1, None], edges[..., 1:, None]
    half = 0.5 * (hi - lo)
    nodes = (lo + hi) * 0.5 + half * _GL_NODES
    weights = half * _GL_WEIGHTS
    shape = nodes.shape[:-2] + (-1,)
    return nodes.reshape(shape), np.broadcast_to(weights, nodes.shape).reshape(shape)


def _kernel_triple_integral(t: float, t2: float) -> float:
    # int int k(s1, t) k(s2, t2) k(s1, s2) ds1 ds2, split at every kink so
    # each piece is a low degree polynomial integrated exactly
    outer_breaks = np.unique([0.0, t, t2, 1.0])
    x, wx = [], []
    for lo, hi in zip(outer_breaks[:-1], outer_breaks[1:]):
        nodes, weights = _gauss_legendre(lo, hi)
        x.append(nodes)
        wx.append(weights)
    x = np.concatenate(x)
    wx = np.concatenate(wx)

    lo_k, hi_k = np.minimum(x, t2), np.maximum(x, t2)
    inner_nodes, inner_weights = [], []
    for a, b in ((np.zeros_like(x), lo_k), (lo_k, hi_k), (hi_k, np.ones_like(x))):
        nodes, weights = _gauss_legendre(a, b)
        inner_nodes.append(nodes)
        inner_weights.append(weights)
    y = np.concatenate(inner_nodes, axis=1)
    wy = np.concatenate(inner_weights, axis=1)
    inner = np.sum(wy * bridge_kernel(y, t2) * bridge_kernel(x[:, None], y), axis=1)
    return float(np.sum(wx * bridge_kernel(x, t) * inner))


def tau_tilde(t: float, t2: float) -> float:
    """Cross scaling function ``36 / (t(1-t) t2(1-t2))**2 * triple kernel integral``.

    Evaluated by deterministic composite Gauss-Legendre quadrature whose
    panel edges include every kink of the integrand. Intended as a test
    oracle; ``tau_tilde(t, t) == tau(t)**2`` up to rounding.
    """
    _check_open_unit(t, "t")
    _check_open_unit(t2, "t2")
    scale = 36.0 / (t * (1.0 - t) * t2 * (1.0 - t2)) ** 2
    return scale * _kernel_triple_integral(float(t), float(t2))
