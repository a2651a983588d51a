"""Seeded innovation models (I)-(IV) and mean shift injection.

Each column is drawn from its own random substream keyed by ``(seed, h)``,
so changing ``d`` never reshuffles the other columns.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, asdict

import numpy as np
from scipy.signal import lfilter

from . import seeding
from .errors import InvalidInputError

__all__ = [
    "MODELS",
    "BURN_IN",
    "SimScenario",
    "gen_innovations",
    "inject_shifts",
    "simulate_panel",
    "ma_iii_coefficients",
    "ma_iv_coefficients",
    "arma_iii_filter",
    "model_iv_variance",
]

MODELS = ("I", "II", "III", "IV")
BURN_IN = 200

ARMA_III_AR = (1.0, -0.2, 0.3)
ARMA_III_MA = (-0.4, 0.8)


def ma_iii_coefficients() -> np.ndarray:
    """MA(19) filter ``1, 1/1**3, 1/2**3, ..., 1/19**3`` driving model (III)."""
    return np.concatenate([[1.0], np.arange(1, 20, dtype=np.float64) ** -3])


def ma_iv_coefficients() -> np.ndarray:
    """MA(29) filter ``1, 0.1/1**3, ..., 0.1/29**3`` of model (IV)."""
    return np.concatenate([[1.0], 0.1 * np.arange(1, 30, dtype=np.float64) ** -3])


def model_iv_variance() -> float:
    """Exact marginal variance of model (IV)."""
    return float(np.sum(ma_iv_coefficients() ** 2))


def arma_iii_filter(y: np.ndarray) -> np.ndarray:
    """Run ``X_j = 0.2 X_{j-1} - 0.3 X_{j-2} - 0.4 Y_j + 0.8 Y_{j-1}`` from rest."""
    return lfilter(ARMA_III_MA, ARMA_III_AR, y, axis=0)


def _column_draws(model: str, length: int, d: int, seed: int) -> np.ndarray:
    out = np.empty((length, d))
    for h in range(d):
        rng = seeding.substream(seed, seeding.DATA, h)
        if model == "II":
            out[:, h] = rng.standard_exponential(length)
        else:
            out[:, h] = rng.standard_normal(length)
    return out


def gen_innovations(
    model: str, n: int, d: int, seed: int, burn_in: int = BURN_IN, return_y: bool = False
):
    """Draw an ``(n, d)`` panel of centred innovations.

    Parameters
    ----------
    model : {"I", "II", "III", "IV"}
        (I) standard normal, (II) ``Exp(1) - 1``, (III) ARMA(2, 1) driven by
        an MA(19) of Gaussian noise, (IV) Gaussian MA(29).
    n, d : int
        Sample size and dimension.
    seed : int
        Root seed; column ``h`` uses substream ``(seed, h)``.
    burn_in : int
        Discarded warm-up length for the dependent models.
    return_y : bool
        For model (III) also return the retained MA(19) driving stream,
        including one leading value, as a second array of shape ``(n + 1, d)``.
    """
    if model not in MODELS:
        raise InvalidInputError(f"unknown model {model!r}; expected one of {MODELS}")
    if n < 2 or d < 1:
        raise InvalidInputError(f"invalid sizes n={n}, d={d}")
    if model == "I":
        return _column_draws(model, n, d, seed)
    if model == "II":
        return _column_draws(model, n, d, seed) - 1.0
    if model == "III":
        ma = ma_iii_coefficients()
        eps = _column_draws(model, n + burn_in + len(ma) - 1, d, seed)
        y = lfilter(ma, [1.0], eps, axis=0)[len(ma) - 1 :]
        x = arma_iii_filter(y)[burn_in:]
        if return_y:
            return x, y[burn_in - 1 :]
        return x
    ma = ma_iv_coefficients()
    eps = _column_draws(model, n + burn_in + len(ma) - 1, d, seed)
    return lfilter(ma, [1.0], eps, axis=0)[len(ma) - 1 + burn_in :]


def _break_rows(n: int, t) -> np.ndarray:
    t = np.asarray(t, dtype=np.float64)
    if np.any(~(t > 0.0)) or np.any(~(t < 1.0)):
        raise InvalidInputError("change locations must lie in (0, 1)")
    return np.floor(n * t + 1e-9).astype(np.int64)


def inject_shifts(x: np.ndarray, mu, t=0.5) -> np.ndarray:
    """Add ``mu`` to every observation after ``floor(n t_h)`` in column ``h``.

    ``mu`` and ``t`` may be scalars or length ``d`` vectors.
    """
    x = np.asarray(x, dtype=np.float64)
    n, d = x.shape
    k = np.broadcast_to(_break_rows(n, t), (d,))
    mu = np.broadcast_to(np.asarray(mu, dtype=np.float64), (d,))
    after = np.arange(n)[:, None] >= k
    return x + after * mu


@dataclass(frozen=True)
class SimScenario:
    """One simulation cell.

    ``mu`` is the common post-break shift, so ``|delta mu_h| = |mu|`` for
    every component; ``t`` and ``deltas`` may be scalars or length ``d``
    tuples.
    """

    model: str
    n: int
    d: int
    mu: float
    t: float | tuple[float, ...] = 0.5
    deltas: float | tuple[float, ...] = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.model not in MODELS:
            raise InvalidInputError(f"unknown model {self.model!r}")
        if self.n < 2 or self.d < 2:
            raise InvalidInputError("n and d must be at least 2")
        t = np.asarray(self.t, dtype=np.float64)
        if t.ndim and t.shape != (self.d,):
            raise InvalidInputError(f"expected {self.d} change locations")
        if np.any(~(t > 0.0)) or np.any(~(t < 1.0)):
            raise InvalidInputError("change locations must lie in (0, 1)")

    def to_dict(self) -> dict:
        return asdict(self)


def simulate_panel(scenario: SimScenario, run: int = 0) -> np.ndarray:
    """Panel for one Monte-Carlo run; run ``r`` uses seed ``(scenario.seed, r)``."""
    run_seed = seeding.derive_seed(scenario.seed, seeding.RUN, run)
    x = gen_innovations(scenario.model, scenario.n, scenario.d, run_seed)
    return inject_shifts(x, scenario.mu, scenario.t)
