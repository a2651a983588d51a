"""Component statistics, the max statistic and its Gumbel calibration."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .changepoint import argmax_cusum
from .config import EstimationConfig
from .cusum import cusum_path, integral_squared, tau, _as_series
from .errors import InvalidInputError
from .variance import sigma_hat_panel

__all__ = [
    "ComponentStat",
    "PanelStats",
    "TestReport",
    "scaling_sequences",
    "gumbel_quantile",
    "gumbel_cdf",
    "as_thresholds",
    "as_panel",
    "panel_statistics",
    "component_statistic",
    "max_statistic",
    "relevant_set",
    "asymptotic_test",
]

ALPHA_MAX_GUARANTEED = 1.0 - math.exp(-1.0)


@dataclass(frozen=True)
class ComponentStat:
    t_stat: float
    m_hat_sq: float
    t_hat: float
    sigma_hat: float
    tau_hat: float
    bias_correction: float
    delta: float
    k_hat: int


@dataclass(frozen=True)
class PanelStats:
    """Per-component estimates for a whole panel, stored column-wise."""

    n: int
    t_stat: np.ndarray
    m_hat_sq: np.ndarray
    k_hat: np.ndarray
    t_hat: np.ndarray
    sigma_hat: np.ndarray
    tau_hat: np.ndarray
    bias_correction: np.ndarray
    deltas: np.ndarray
    abs_cusum: np.ndarray

    @property
    def d(self) -> int:
        return self.t_stat.shape[0]

    def component(self, h: int) -> ComponentStat:
        return ComponentStat(
            t_stat=float(self.t_stat[h]),
            m_hat_sq=float(self.m_hat_sq[h]),
            t_hat=float(self.t_hat[h]),
            sigma_hat=float(self.sigma_hat[h]),
            tau_hat=float(self.tau_hat[h]),
            bias_correction=float(self.bias_correction[h]),
            delta=float(self.deltas[h]),
            k_hat=int(self.k_hat[h]),
        )


@dataclass(frozen=True)
class TestReport:
    statistic: float
    critical_value: float
    alpha: float
    method: str
    reject: bool
    relevant_set: tuple[int, ...]
    stats: PanelStats = field(repr=False)
    a_d: float
    b_d: float

    @property
    def per_component(self) -> list[ComponentStat]:
        return [self.stats.component(h) for h in range(self.stats.d)]


def scaling_sequences(d: int) -> tuple[float, float]:
    """Centering and scaling for the maximum of ``d`` statistics.

    ``a_d = sqrt(2 log d)`` and ``b_d = a_d - log(4 pi log d) / (2 a_d)``.
    """
    if d < 2:
        raise InvalidInputError(f"need d >= 2 components, got {d}")
    a = math.sqrt(2.0 * math.log(d))
    b = a - math.log(4.0 * math.pi * math.log(d)) / (2.0 * a)
    return a, b


def gumbel_quantile(alpha: float) -> float:
    """Upper ``alpha`` quantile ``-log(-log(1 - alpha))`` of the Gumbel law."""
    if not 0.0 < alpha < 1.0:
        raise InvalidInputError(f"alpha must lie in (0, 1), got {alpha}")
    return -math.log(-math.log1p(-alpha))


def gumbel_cdf(x):
    return np.exp(-np.exp(-np.asarray(x, dtype=np.float64)))


def as_thresholds(deltas, d: int) -> np.ndarray:
    """Broadcast a scalar threshold or validate a length ``d`` vector."""
    arr = np.asarray(deltas, dtype=np.float64)
    if arr.ndim == 0:
        arr = np.full(d, float(arr))
    if arr.shape != (d,):
        raise InvalidInputError(f"expected {d} thresholds, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0.0):
        raise InvalidInputError("thresholds must be finite and strictly positive")
    return arr


def as_panel(panel) -> np.ndarray:
    Z = _as_series(panel)
    if Z.ndim != 2:
        raise InvalidInputError("panel must be a 2-D array of shape (n, d)")
    return Z


def panel_statistics(panel, deltas, cfg: EstimationConfig | None = None) -> PanelStats:
    """Estimate change locations, variances and normalised statistics.

    Every component is handled in the same vectorised pass; a failure in
    any component raises instead of dropping it.
    """
    cfg = cfg or EstimationConfig()
    Z = as_panel(panel)
    n, d = Z.shape
    deltas = as_thresholds(deltas, d)
    u = cusum_path(Z)
    k_hat, abs_cusum = argmax_cusum(u, cfg.t_min)
    t_hat = k_hat / n
    v = t_hat * (1.0 - t_hat)
    m_sq = 3.0 / v**2 * integral_squared(u)
    sigma, *_ = sigma_hat_panel(Z, k_hat, cfg)
    tau_hat = tau(t_hat)
    root_n = math.sqrt(n)
    t_stat = root_n / (tau_hat * sigma * deltas) * (m_sq - deltas**2)
    if cfg.bias_correction:
        bias = sigma / (2.0 * root_n * v**2 * tau_hat * deltas)
    else:
        bias = np.zeros(d)
    return PanelStats(
        n=n,
        t_stat=t_stat - bias,
        m_hat_sq=m_sq,
        k_hat=k_hat,
        t_hat=t_hat,
        sigma_hat=sigma,
        tau_hat=tau_hat,
        bias_correction=bias,
        deltas=deltas,
        abs_cusum=abs_cusum,
    )


def component_statistic(z, delta: float, cfg: EstimationConfig | None = None) -> ComponentStat:
    """Normalised statistic of a single component."""
    z = _as_series(z)
    if z.ndim != 1:
        raise InvalidInputError("component_statistic expects a single component")
    return panel_statistics(z[:, None], delta, cfg).component(0)


def max_statistic(panel, deltas, cfg: EstimationConfig | None = None):
    """``a_d (max_h T_h - b_d)`` together with the component statistics.

    Returns
    -------
    statistic : float
    stats : PanelStats
    a_d, b_d : float
    """
    stats = panel_statistics(panel, deltas, cfg)
    a_d, b_d = scaling_sequences(stats.d)
    return a_d * (float(np.max(stats.t_stat)) - b_d), stats, a_d, b_d


def relevant_set(t_stat, critical: float, a_d: float, b_d: float) -> tuple[int, ...]:
    """Indices whose statistic exceeds ``critical / a_d + b_d``."""
    t_stat = np.asarray(t_stat, dtype=np.float64)
    return tuple(int(h) for h in np.flatnonzero(t_stat > critical / a_d + b_d))


def asymptotic_test(
    panel, deltas, alpha: float = 0.05, cfg: EstimationConfig | None = None
) -> TestReport:
    """Relevant change test calibrated by the Gumbel limit.

    Rejects when the max statistic exceeds the ``1 - alpha`` Gumbel quantile.
    Levels above ``1 - 1/e`` are allowed but carry no level guarantee.
    """
    g = gumbel_quantile(alpha)
    if alpha > ALPHA_MAX_GUARANTEED:
        warnings.warn(
            f"alpha={alpha} exceeds 1 - 1/e; the level guarantee does not apply",
            stacklevel=2,
        )
    statistic, stats, a_d, b_d = max_statistic(panel, deltas, cfg)
    return TestReport(
        statistic=statistic,
        critical_value=g,
        alpha=alpha,
        method="asymptotic",
        reject=bool(statistic > g),
        relevant_set=relevant_set(stats.t_stat, g, a_d, b_d),
        stats=stats,
        a_d=a_d,
        b_d=b_d,
    )
