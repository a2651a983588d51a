"""Change point location by argmax |CUSUM| and block-aligned jump estimates."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .cusum import cusum_path, _as_series
from .errors import DegenerateSplitError, InvalidInputError

__all__ = [
    "ChangePointEstimate",
    "JumpEstimate",
    "search_window",
    "estimate_changepoint",
    "argmax_cusum",
    "block_limits",
    "estimate_jump",
    "jump_panel",
]

# absorbs representation error in products like n * 0.05
_EPS = 1e-9


@dataclass(frozen=True)
class ChangePointEstimate:
    t_hat: float
    k_hat: int
    abs_cusum: float


@dataclass(frozen=True)
class JumpEstimate:
    delta_mu_hat: float
    l_minus: int
    l_plus: int
    mean_before: float
    mean_after: float


def search_window(n: int, t_min: float) -> tuple[int, int]:
    """Closed index window ``ceil(n t_min) .. floor(n (1 - t_min))``."""
    if not 0.0 < t_min < 0.5:
        raise InvalidInputError(f"t_min must lie in (0, 1/2), got {t_min}")
    lo = max(math.ceil(n * t_min - _EPS), 1)
    hi = min(math.floor(n * (1.0 - t_min) + _EPS), n - 1)
    if lo > hi:
        raise InvalidInputError(f"empty search window for n={n}, t_min={t_min}")
    return lo, hi


def argmax_cusum(u: np.ndarray, t_min: float) -> tuple[np.ndarray, np.ndarray]:
    """Per-column argmax of ``|u_k|`` over the search window.

    Parameters
    ----------
    u : ndarray, shape (n,) or (n, d)
        CUSUM path as returned by :func:`cusum_path`.
    t_min : float
        Boundary fraction.

    Returns
    -------
    k_hat : ndarray of int
        Maximising index; ties go to the smallest index.
    abs_cusum : ndarray
        ``|sum_{j<=k} z_j - (k/n) sum_j z_j|`` at ``k_hat``, i.e. ``n |u_k|``.
    """
    n = u.shape[0]
    lo, hi = search_window(n, t_min)
    window = np.abs(u[lo : hi + 1])
    idx = np.argmax(window, axis=0)
    k_hat = idx + lo
    abs_cusum = n * np.take_along_axis(window, np.expand_dims(idx, 0), axis=0)[0]
    return k_hat, abs_cusum


def estimate_changepoint(z, t_min: float = 0.05) -> ChangePointEstimate:
    """Estimate the relative change location of one component.

    >>> estimate_changepoint([0, 0, 0, 1, 1, 1], t_min=1 / 6).k_hat
    3
    """
    z = _as_series(z)
    if z.ndim != 1:
        raise InvalidInputError("estimate_changepoint expects a single component")
    n = z.shape[0]
    if n * t_min < 1.0 - _EPS:
        raise InvalidInputError(f"n * t_min must be at least 1 (n={n}, t_min={t_min})")
    k_hat, abs_cusum = argmax_cusum(cusum_path(z), t_min)
    k = int(k_hat)
    return ChangePointEstimate(t_hat=k / n, k_hat=k, abs_cusum=float(abs_cusum))


def block_limits(k_hat, K: int) -> tuple[np.ndarray, np.ndarray]:
    """Last block index before and first after the estimated change.

    ``l_minus = sup{l : lK + K/2 <= k_hat}`` and
    ``l_plus = inf{l : lK - K/2 >= k_hat}``, evaluated in integer arithmetic
    as ``2lK + K <= 2 k_hat`` and ``2lK - K >= 2 k_hat``.

    >>> block_limits(47, 10)
    (4, 6)
    """
    k = np.asarray(k_hat, dtype=np.int64)
    l_minus = np.floor_divide(2 * k - K, 2 * K)
    l_plus = -np.floor_divide(-(2 * k + K), 2 * K)
    if l_minus.ndim == 0:
        return int(l_minus), int(l_plus)
    return l_minus, l_plus


def _check_blocks(n: int, K: int):
    if K < 1:
        raise InvalidInputError(f"block length must be positive, got {K}")
    if n % K:
        raise InvalidInputError(f"n={n} is not divisible by block length K={K}")


def jump_panel(Z: np.ndarray, k_hat: np.ndarray, K: int):
    """Vectorised jump estimates for a panel.

    Returns ``(delta_mu_hat, l_minus, l_plus, mean_before, mean_after)`` as
    arrays of length ``d``. Raises :class:`DegenerateSplitError` naming the
    first component that has no full block on one side of its change.
    """
    n, d = Z.shape
    _check_blocks(n, K)
    L = n // K
    l_minus, l_plus = block_limits(k_hat, K)
    bad = np.flatnonzero((l_minus < 1) | (l_plus > L - 1))
    if bad.size:
        h = int(bad[0])
        raise DegenerateSplitError(
            f"no full block of length {K} on both sides of k_hat={int(k_hat[h])} (n={n})",
            component=h,
        )
    cols = np.arange(d)
    prefix = np.vstack([np.zeros(d), np.cumsum(Z, axis=0)])
    end_before = K * l_minus
    start_after = K * l_plus
    mean_before = prefix[end_before, cols] / end_before
    mean_after = (prefix[n, cols] - prefix[start_after, cols]) / (n - start_after)
    return mean_before - mean_after, l_minus, l_plus, mean_before, mean_after


def estimate_jump(z, t_hat: float, K: int) -> JumpEstimate:
    """Block-aligned estimate of the signed jump ``mean_before - mean_after``.

    ``t_hat`` is the relative change location; ``t_hat * n`` is rounded to
    the nearest integer index.
    """
    z = _as_series(z)
    if z.ndim != 1:
        raise InvalidInputError("estimate_jump expects a single component")
    n = z.shape[0]
    k_hat = np.array([round(t_hat * n)])
    delta, lm, lp, mb, ma = jump_panel(z[:, None], k_hat, K)
    return JumpEstimate(
        delta_mu_hat=float(delta[0]),
        l_minus=int(lm[0]),
        l_plus=int(lp[0]),
        mean_before=float(mb[0]),
        mean_after=float(ma[0]),
    )
