"""Estimation settings shared by the asymptotic and the bootstrap test."""

from __future__ import annotations

from dataclasses import dataclass, asdict
from typing import Literal

from .errors import ConfigurationError

Combine = Literal["max", "average"]


@dataclass(frozen=True)
class EstimationConfig:
    """Tuning constants for change point, variance and statistic estimation.

    Parameters
    ----------
    t_min : float
        Boundary fraction excluded from the change point search window.
    separation : float
        Separation constant ``S`` in (0, 1) controlling how far the two
        variance split samples stay away from the estimated change.
    bandwidth : int or None
        Bartlett bandwidth. ``None`` uses ``floor(m ** (1/3))`` where ``m``
        is the length of the split sample.
    s_minus_sq, s_plus_sq : float
        Clamp interval for the squared long-run standard deviation.
    combine : {"max", "average"}
        How the two split variances are merged.
    bias_correction : bool
        Subtract the finite sample bias term from each component statistic.
    """

    t_min: float = 0.05
    separation: float = 0.9
    bandwidth: int | None = None
    s_minus_sq: float = 1e-4
    s_plus_sq: float = 1e4
    combine: Combine = "max"
    bias_correction: bool = True

    def __post_init__(self):
        if not 0.0 < self.t_min < 0.5:
            raise ConfigurationError(f"t_min must lie in (0, 1/2), got {self.t_min}")
        if not 0.0 < self.separation < 1.0:
            raise ConfigurationError(
                f"separation must lie in (0, 1), got {self.separation}"
            )
        if self.bandwidth is not None and self.bandwidth < 0:
            raise ConfigurationError("bandwidth must be nonnegative")
        if not 0.0 < self.s_minus_sq <= self.s_plus_sq:
            raise ConfigurationError("need 0 < s_minus_sq <= s_plus_sq")
        if self.combine not in ("max", "average"):
            raise ConfigurationError(f"unknown combine rule {self.combine!r}")

    def to_dict(self) -> dict:
        return asdict(self)
