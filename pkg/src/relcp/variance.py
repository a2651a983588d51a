"""Long-run variance estimation on split samples around a change point."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numba
import numpy as np

from .config import EstimationConfig
from .cusum import _as_series
from .errors import DegenerateSplitError, InvalidInputError

__all__ = [
    "SplitSpec",
    "VarianceEstimate",
    "split_samples",
    "cube_root_bandwidth",
    "bartlett_lrv",
    "sigma_hat",
    "sigma_hat_panel",
]

_EPS = 1e-9


@dataclass(frozen=True)
class SplitSpec:
    """One-based inclusive index ranges ``1..end_before`` and ``start_after..n``."""

    end_before: int
    start_after: int
    n: int
    S: float

    @property
    def before(self) -> slice:
        return slice(0, self.end_before)

    @property
    def after(self) -> slice:
        return slice(self.start_after - 1, self.n)


@dataclass(frozen=True)
class VarianceEstimate:
    sigma_hat: float
    sigma1_sq: float
    sigma2_sq: float
    truncated: bool


def _split_lengths(n: int, t_hat, S: float, t_min: float):
    t_hat = np.asarray(t_hat, dtype=np.float64)
    len_before = np.floor(n * np.maximum(S * t_hat, t_min) + _EPS).astype(np.int64)
    len_after = np.floor(n * np.maximum(S * (1.0 - t_hat), t_min) + _EPS).astype(np.int64)
    return len_before, len_after


def split_samples(n: int, t_hat: float, S: float, t_min: float) -> SplitSpec:
    """Index ranges of the two variance samples.

    >>> split_samples(100, 0.5, 0.9, 0.05)
    SplitSpec(end_before=45, start_after=56, n=100, S=0.9)
    """
    if not 0.0 < S < 1.0:
        raise InvalidInputError(f"S must lie in (0, 1), got {S}")
    if not 0.0 < t_min < 0.5:
        raise InvalidInputError(f"t_min must lie in (0, 1/2), got {t_min}")
    lb, la = _split_lengths(n, t_hat, S, t_min)
    end_before, start_after = int(lb), n - int(la) + 1
    if end_before < 1 or start_after > n:
        raise DegenerateSplitError(f"empty split sample for n={n}, t_hat={t_hat}")
    return SplitSpec(end_before=end_before, start_after=start_after, n=n, S=S)


def cube_root_bandwidth(m):
    """``floor(m ** (1/3))`` computed exactly for integer ``m``."""
    m = np.asarray(m, dtype=np.int64)
    b = np.floor(np.cbrt(m.astype(np.float64))).astype(np.int64)
    b = np.where(b**3 > m, b - 1, b)
    b = np.where((b + 1) ** 3 <= m, b + 1, b)
    return int(b) if b.ndim == 0 else b


def bartlett_lrv(x, bandwidth: int) -> float:
    """Bartlett-weighted long-run variance of one sample.

    ``phi(0) + 2 * sum_{j=1}^{bandwidth} (1 - j / bandwidth) phi(j)`` with
    centred autocovariances normalised by the sample length ``m``. The
    result can be negative for pathological inputs; callers clamp.
    """
    x = np.asarray(x, dtype=np.float64)
    m = x.shape[0]
    if m < 2:
        raise InvalidInputError(f"need at least 2 observations, got {m}")
    if not 0 <= bandwidth < m:
        raise InvalidInputError(f"bandwidth must lie in [0, {m}), got {bandwidth}")
    xc = x - x.mean()
    lrv = xc @ xc / m
    for j in range(1, bandwidth):
        lrv += 2.0 * (1.0 - j / bandwidth) * (xc[j:] @ xc[:-j]) / m
    return float(lrv)


@numba.njit(cache=True)
def _bartlett_ranges(Zt, start, stop, beta):
    # Zt is (d, n); column h uses rows start[h]:stop[h]
    d = Zt.shape[0]
    out = np.empty(d)
    for h in range(d):
        x = Zt[h, start[h] : stop[h]]
        m = x.shape[0]
        xc = x - x.mean()
        lrv = 0.0
        for i in range(m):
            lrv += xc[i] * xc[i]
        b = beta[h]
        for j in range(1, b):
            acc = 0.0
            for i in range(m - j):
                acc += xc[i] * xc[i + j]
            lrv += 2.0 * (1.0 - j / b) * acc
        out[h] = lrv / m
    return out


def _bandwidths(m: np.ndarray, cfg: EstimationConfig) -> np.ndarray:
    if cfg.bandwidth is None:
        return cube_root_bandwidth(m)
    return np.minimum(np.full_like(m, cfg.bandwidth), m - 1)


def sigma_hat_panel(Z: np.ndarray, k_hat: np.ndarray, cfg: EstimationConfig):
    """Vectorised long-run standard deviations for all columns of a panel.

    Returns
    -------
    sigma : ndarray, shape (d,)
        Clamped long-run standard deviation per column.
    sigma1_sq, sigma2_sq : ndarray, shape (d,)
        Unclamped split estimates.
    truncated : ndarray of bool
    """
    n, d = Z.shape
    t_hat = np.asarray(k_hat) / n
    len_before, len_after = _split_lengths(n, t_hat, cfg.separation, cfg.t_min)
    bad = np.flatnonzero((len_before < 2) | (len_after < 2))
    if bad.size:
        raise DegenerateSplitError("variance split sample shorter than 2", component=int(bad[0]))
    Zt = np.ascontiguousarray(Z.T)
    zeros = np.zeros(d, dtype=np.int64)
    full = np.full(d, n, dtype=np.int64)
    s1 = _bartlett_ranges(Zt, zeros, len_before, _bandwidths(len_before, cfg))
    s2 = _bartlett_ranges(Zt, n - len_after, full, _bandwidths(len_after, cfg))
    combined = np.maximum(s1, s2) if cfg.combine == "max" else 0.5 * (s1 + s2)
    clamped = np.clip(combined, cfg.s_minus_sq, cfg.s_plus_sq)
    truncated = (combined < cfg.s_minus_sq) | (combined > cfg.s_plus_sq)
    return np.sqrt(clamped), s1, s2, truncated


def sigma_hat(z, t_hat: float, cfg: EstimationConfig | None = None) -> VarianceEstimate:
    """Long-run standard deviation of one component, split at ``t_hat``."""
    cfg = cfg or EstimationConfig()
    z = _as_series(z)
    if z.ndim != 1:
        raise InvalidInputError("sigma_hat expects a single component")
    n = z.shape[0]
    spec = split_samples(n, t_hat, cfg.separation, cfg.t_min)
    estimates = []
    for part in (z[spec.before], z[spec.after]):
        m = part.shape[0]
        if m < 2:
            raise DegenerateSplitError("variance split sample shorter than 2")
        beta = cube_root_bandwidth(m) if cfg.bandwidth is None else min(cfg.bandwidth, m - 1)
        estimates.append(bartlett_lrv(part, beta))
    s1, s2 = estimates
    combined = max(s1, s2) if cfg.combine == "max" else 0.5 * (s1 + s2)
    clamped = min(cfg.s_plus_sq, max(cfg.s_minus_sq, combined))
    return VarianceEstimate(
        sigma_hat=math.sqrt(clamped),
        sigma1_sq=s1,
        sigma2_sq=s2,
        truncated=clamped != combined,
    )
