"""Multiplier block bootstrap calibration of the max statistic.

Data dependent quantities (change locations, long-run variances, jump
estimates and the mean corrected sample) are computed once per panel.
Replicates differ only through the Gaussian block multipliers, which are
drawn from the substream ``(seed, replicate)`` so each replicate can be
recomputed on its own.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, asdict, replace
from typing import Literal

import numpy as np

from . import seeding
from .asymptotic import (
    PanelStats,
    TestReport,
    as_panel,
    max_statistic,
    relevant_set,
    scaling_sequences,
)
from .changepoint import jump_panel
from .config import EstimationConfig
from .cusum import _cusum_unchecked, _as_series, kernel_segment_weights, tau
from .errors import ConfigurationError, DegenerateMultiplierError, InvalidInputError

__all__ = [
    "BootstrapConfig",
    "BootstrapEstimates",
    "BootstrapReport",
    "draw_multipliers",
    "mean_corrected",
    "block_sums",
    "bootstrap_cusum",
    "prepare_estimates",
    "bootstrap_statistics",
    "bootstrap_statistic",
    "bootstrap_max",
    "bootstrap_test",
]

JUMP_THRESHOLD_EXPONENT = -0.25

# elements of the (n, replicates, d) work array processed at once
_CHUNK_ELEMENTS = 4_000_000


@dataclass(frozen=True)
class BootstrapConfig:
    """Settings of the multiplier block bootstrap.

    Parameters
    ----------
    K : int
        Block length; the sample size must be a multiple of ``K``.
    replicates : int
        Number of bootstrap replicates (at least 100).
    seed : int
        Root seed of the multiplier streams.
    bias_correction : bool
        Add the squared-path term mimicking the nonnegative part of the
        statistic.
    s_hat_form : {"squared", "linear"}
        ``"squared"`` scales by ``mean(xi**2) * sigma**2``; ``"linear"``
        uses ``mean(xi**2) * sigma``.
    """

    K: int
    replicates: int = 500
    seed: int = 0
    bias_correction: bool = True
    s_hat_form: Literal["squared", "linear"] = "squared"

    def __post_init__(self):
        if self.K < 1:
            raise ConfigurationError(f"block length K must be positive, got {self.K}")
        if self.replicates < 100:
            raise ConfigurationError(f"need at least 100 replicates, got {self.replicates}")
        if self.s_hat_form not in ("squared", "linear"):
            raise ConfigurationError(f"unknown s_hat_form {self.s_hat_form!r}")

    def blocks(self, n: int) -> int:
        if n % self.K:
            raise ConfigurationError(f"n={n} is not a multiple of K={self.K}")
        L = n // self.K
        if L < 2:
            raise ConfigurationError(f"need at least 2 blocks, got L={L}")
        return L

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class BootstrapEstimates:
    """Read-only snapshot shared by all replicates."""

    K: int
    z_hat: np.ndarray  # (n, d) mean corrected sample
    t_hat: np.ndarray
    sigma_hat: np.ndarray
    delta_mu_hat: np.ndarray
    l_minus: np.ndarray
    l_plus: np.ndarray
    deltas: np.ndarray
    fired: np.ndarray  # |delta_mu_hat| > n ** -1/4

    @property
    def n(self) -> int:
        return self.z_hat.shape[0]

    @property
    def d(self) -> int:
        return self.z_hat.shape[1]


@dataclass(frozen=True)
class BootstrapReport(TestReport):
    replicate_stats: np.ndarray = field(default=None, repr=False)
    config: BootstrapConfig = None
    estimates: BootstrapEstimates = field(default=None, repr=False)

    @property
    def g_star(self) -> float:
        return self.critical_value


def draw_multipliers(seed: int, replicates, L: int) -> np.ndarray:
    """Gaussian multipliers, one row of length ``L`` per replicate index."""
    idx = range(replicates) if isinstance(replicates, int) else replicates
    return np.stack(
        [seeding.substream(seed, seeding.MULTIPLIER, r).standard_normal(L) for r in idx]
    )


def _mean_corrected_panel(Z: np.ndarray, k_hat: np.ndarray, K: int):
    delta, l_minus, l_plus, mean_before, mean_after = jump_panel(Z, k_hat, K)
    n = Z.shape[0]
    rows = np.arange(n)[:, None]
    before = rows < K * l_minus
    after = rows >= K * l_plus
    z_hat = np.where(before, Z - mean_before, 0.0) + np.where(after, Z - mean_after, 0.0)
    return z_hat, delta, l_minus, l_plus


def mean_corrected(z, t_hat: float, K: int) -> np.ndarray:
    """Centre each side of the change by its own block-aligned mean.

    Observations between the block limits are set to zero.
    """
    z = _as_series(z)
    if z.ndim != 1:
        raise InvalidInputError("mean_corrected expects a single component")
    k_hat = np.array([round(t_hat * z.shape[0])])
    return _mean_corrected_panel(z[:, None], k_hat, K)[0][:, 0]


def block_sums(z_hat, K: int, k: int | None = None) -> np.ndarray:
    """Block sums ``V_l(k) = sum_{j in block l, j <= k} z_hat_j``.

    ``k`` is a one-based index; ``None`` means ``k = n``.
    """
    z_hat = np.asarray(z_hat, dtype=np.float64)
    n = z_hat.shape[0]
    if n % K:
        raise InvalidInputError(f"n={n} is not a multiple of K={K}")
    if k is not None:
        z_hat = np.where(np.arange(n) < k, z_hat, 0.0)
    return z_hat.reshape(n // K, K).sum(axis=1)


def bootstrap_cusum(z_hat, xi, K: int) -> np.ndarray:
    """Multiplier CUSUM path on the grid ``j / n``.

    The path equals the ordinary CUSUM of the series whose block ``l`` is
    multiplied by ``xi[l]``, since the multiplier partial sums
    ``sum_l xi_l V_l(j)`` are its prefix sums.
    """
    z_hat = np.asarray(z_hat, dtype=np.float64)
    xi = np.asarray(xi, dtype=np.float64)
    n = z_hat.shape[0]
    if xi.shape != (n // K,) or n % K:
        raise InvalidInputError("multiplier length must equal the number of blocks")
    w = z_hat * np.repeat(xi, K)
    return _cusum_unchecked(w)


def prepare_estimates(
    panel, deltas, K: int, cfg: EstimationConfig | None = None
) -> tuple[float, PanelStats, BootstrapEstimates]:
    """Compute the test statistic and the data snapshot used by the replicates.

    The component statistics are left without the bias subtraction of the
    asymptotic test; the bootstrap side carries the correction instead.
    """
    cfg = replace(cfg or EstimationConfig(), bias_correction=False)
    Z = as_panel(panel)
    n = Z.shape[0]
    if n % K:
        raise ConfigurationError(f"n={n} is not a multiple of K={K}")
    statistic, stats, _, _ = max_statistic(Z, deltas, cfg)
    z_hat, delta_mu, l_minus, l_plus = _mean_corrected_panel(Z, stats.k_hat, K)
    est = BootstrapEstimates(
        K=K,
        z_hat=z_hat,
        t_hat=stats.t_hat,
        sigma_hat=stats.sigma_hat,
        delta_mu_hat=delta_mu,
        l_minus=l_minus,
        l_plus=l_plus,
        deltas=stats.deltas,
        fired=np.abs(delta_mu) > n**JUMP_THRESHOLD_EXPONENT,
    )
    return statistic, stats, est


def bootstrap_statistics(
    est: BootstrapEstimates,
    xi: np.ndarray,
    b_d: float,
    bias_correction: bool = True,
    s_hat_form: str = "squared",
) -> np.ndarray:
    """Component bootstrap statistics for a batch of multiplier draws.

    Parameters
    ----------
    est : BootstrapEstimates
    xi : ndarray, shape (R, L)
        One multiplier vector per row.
    b_d : float
        Value assigned to components whose jump estimate is below the
        ``n ** -1/4`` threshold.

    Returns
    -------
    ndarray, shape (R, d)
    """
    xi = np.atleast_2d(np.asarray(xi, dtype=np.float64))
    R, L = xi.shape
    n, K = est.n, est.K
    if L * K != n:
        raise InvalidInputError(f"expected {n // K} multipliers per replicate, got {L}")
    mean_sq = np.mean(xi * xi, axis=1)
    if np.any(mean_sq == 0.0):
        raise DegenerateMultiplierError("all multipliers of a replicate are zero")

    out = np.full((R, est.d), b_d)
    cols = np.flatnonzero(est.fired)
    if cols.size == 0:
        return out

    t = est.t_hat[cols]
    v = t * (1.0 - t)
    sigma = est.sigma_hat[cols]
    spread = sigma**2 if s_hat_form == "squared" else sigma
    s_hat = np.sqrt(mean_sq[:, None] * spread)  # (R, c)
    root_n = math.sqrt(n)
    scale = 6.0 * root_n / (tau(t) * v**2)
    weights = kernel_segment_weights(n, t)  # (n, c)
    z_hat = est.z_hat[:, cols]
    xi_rep = np.repeat(xi, K, axis=1)  # (R, n)

    step = max(1, _CHUNK_ELEMENTS // (n * cols.size))
    for r0 in range(0, R, step):
        r1 = min(R, r0 + step)
        w = z_hat[:, None, :] * xi_rep[r0:r1].T[:, :, None]  # (n, r, c)
        u = _cusum_unchecked(w)
        linear = np.einsum("nrc,nc->rc", u, weights)
        b = scale * linear
        if bias_correction:
            sq = np.einsum("nrc,nrc->rc", u, u) / n
            b = b + 0.5 * scale * sq / est.deltas[cols]
        out[r0:r1, cols] = b / s_hat[r0:r1]
    return out


def bootstrap_statistic(
    z,
    xi,
    cfg: BootstrapConfig,
    t_hat: float,
    sigma_hat: float,
    delta: float,
    b_d: float,
) -> float:
    """Bootstrap statistic of one component for one multiplier draw."""
    z = _as_series(z)
    n = z.shape[0]
    k_hat = np.array([round(t_hat * n)])
    z_hat, delta_mu, lm, lp = _mean_corrected_panel(z[:, None], k_hat, cfg.K)
    est = BootstrapEstimates(
        K=cfg.K,
        z_hat=z_hat,
        t_hat=np.array([k_hat[0] / n]),
        sigma_hat=np.array([sigma_hat]),
        delta_mu_hat=delta_mu,
        l_minus=lm,
        l_plus=lp,
        deltas=np.array([delta]),
        fired=np.abs(delta_mu) > n**JUMP_THRESHOLD_EXPONENT,
    )
    return float(
        bootstrap_statistics(est, xi, b_d, cfg.bias_correction, cfg.s_hat_form)[0, 0]
    )


def bootstrap_max(
    est: BootstrapEstimates,
    xi: np.ndarray,
    bias_correction: bool = True,
    s_hat_form: str = "squared",
) -> np.ndarray:
    """Normalised maximum ``a_d (max_h B_h - b_d)`` for each multiplier row."""
    a_d, b_d = scaling_sequences(est.d)
    B = bootstrap_statistics(est, xi, b_d, bias_correction, s_hat_form)
    return a_d * (np.max(B, axis=1) - b_d)


def bootstrap_test(
    panel,
    deltas,
    alpha: float = 0.05,
    boot: BootstrapConfig | None = None,
    cfg: EstimationConfig | None = None,
) -> BootstrapReport:
    """Relevant change test with bootstrap critical value.

    The critical value is the type-7 empirical ``1 - alpha`` quantile of the
    replicate maxima; components with ``a_d (T_h - b_d)`` above it form the
    relevant set.
    """
    if not 0.0 < alpha < 1.0:
        raise InvalidInputError(f"alpha must lie in (0, 1), got {alpha}")
    if boot is None:
        raise ConfigurationError("the bootstrap test needs an explicit block length K")
    cfg = cfg or EstimationConfig()
    Z = as_panel(panel)
    L = boot.blocks(Z.shape[0])
    statistic, stats, est = prepare_estimates(Z, deltas, boot.K, cfg)
    a_d, b_d = scaling_sequences(stats.d)
    xi = draw_multipliers(boot.seed, boot.replicates, L)
    reps = bootstrap_max(est, xi, boot.bias_correction, boot.s_hat_form)
    g_star = float(np.quantile(reps, 1.0 - alpha))
    return BootstrapReport(
        statistic=statistic,
        critical_value=g_star,
        alpha=alpha,
        method="bootstrap",
        reject=bool(statistic > g_star),
        relevant_set=relevant_set(stats.t_stat, g_star, a_d, b_d),
        stats=stats,
        a_d=a_d,
        b_d=b_d,
        replicate_stats=reps,
        config=boot,
        estimates=est,
    )
