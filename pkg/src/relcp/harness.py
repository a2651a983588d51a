"""Monte-Carlo rejection rates and power curves."""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace, asdict
from typing import Literal

import numpy as np

from . import seeding
from .asymptotic import asymptotic_test
from .bootstrap import BootstrapConfig, bootstrap_test
from .config import EstimationConfig
from .datagen import SimScenario, simulate_panel
from .errors import ConfigurationError, DegenerateSplitError

__all__ = ["Method", "ExperimentResult", "rejection_rate", "power_curve", "run_once"]

MIN_RUNS = 50


@dataclass(frozen=True)
class Method:
    """Which test a simulation cell runs.

    ``kind="bootstrap"`` needs the block length ``K``; ``replicates`` is the
    number of bootstrap draws per run.
    """

    kind: Literal["asymptotic", "bootstrap"] = "asymptotic"
    K: int | None = None
    replicates: int = 200
    alpha: float = 0.05
    config: EstimationConfig = EstimationConfig()

    def __post_init__(self):
        if self.kind not in ("asymptotic", "bootstrap"):
            raise ConfigurationError(f"unknown method {self.kind!r}")
        if self.kind == "bootstrap":
            if self.K is None:
                raise ConfigurationError("bootstrap method needs a block length K")
            BootstrapConfig(self.K, self.replicates)
        if not 0.0 < self.alpha < 1.0:
            raise ConfigurationError(f"alpha must lie in (0, 1), got {self.alpha}")

    @classmethod
    def asymptotic(cls, alpha: float = 0.05, config: EstimationConfig | None = None):
        return cls("asymptotic", alpha=alpha, config=config or EstimationConfig())

    @classmethod
    def bootstrap(
        cls,
        K: int,
        replicates: int = 200,
        alpha: float = 0.05,
        config: EstimationConfig | None = None,
    ):
        return cls("bootstrap", K, replicates, alpha, config or EstimationConfig())

    def label(self) -> str:
        if self.kind == "asymptotic":
            return "asymptotic"
        return f"bootstrap(K={self.K}, B={self.replicates})"

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class ExperimentResult:
    """Rejection rate of one simulation cell.

    ``failed_runs`` counts runs whose estimates were degenerate (for example
    an empty block range around the change); such runs count as
    non-rejections.
    """

    scenario: SimScenario
    method: Method
    runs: int
    rejections: int
    rejection_rate: float
    mc_stderr: float
    wall_time: float
    seed: int
    failed_runs: int = 0

    def to_dict(self) -> dict:
        out = asdict(self)
        out["method"]["label"] = self.method.label()
        return out


def run_once(scenario: SimScenario, method: Method, seed: int, run: int) -> int:
    """Outcome of run ``run``: 1 reject, 0 accept, -1 degenerate."""
    panel = simulate_panel(replace(scenario, seed=seed), run)
    try:
        if method.kind == "asymptotic":
            report = asymptotic_test(panel, scenario.deltas, method.alpha, method.config)
        else:
            boot = BootstrapConfig(
                method.K,
                method.replicates,
                seed=seeding.derive_seed(seed, seeding.MULTIPLIER, run),
            )
            report = bootstrap_test(panel, scenario.deltas, method.alpha, boot, method.config)
    except DegenerateSplitError:
        return -1
    return int(report.reject)


def _run_chunk(args) -> list[int]:
    scenario, method, seed, indices = args
    return [run_once(scenario, method, seed, r) for r in indices]


def _default_workers() -> int:
    return max(1, os.cpu_count() or 1)


def rejection_rate(
    scenario: SimScenario,
    method: Method,
    runs: int,
    seed: int | None = None,
    workers: int | None = 1,
) -> ExperimentResult:
    """Fraction of seeded runs in which ``method`` rejects.

    Run ``r`` draws its data from ``(seed, r)`` and its multipliers from an
    independent stream of the same pair, so the outcome is identical for any
    number of ``workers``. ``seed`` defaults to ``scenario.seed``; ``workers``
    of ``None`` uses every available CPU.
    """
    if runs < MIN_RUNS:
        raise ConfigurationError(f"need at least {MIN_RUNS} runs, got {runs}")
    seed = scenario.seed if seed is None else int(seed)
    workers = _default_workers() if workers is None else int(workers)
    if workers < 1:
        raise ConfigurationError("workers must be positive")
    start = time.perf_counter()
    if workers == 1:
        outcomes = [run_once(scenario, method, seed, r) for r in range(runs)]
    else:
        chunks = [
            (scenario, method, seed, list(idx))
            for idx in np.array_split(np.arange(runs), workers * 4)
            if len(idx)
        ]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = [o for part in pool.map(_run_chunk, chunks) for o in part]
    outcomes = np.asarray(outcomes)
    rejections = int(np.sum(outcomes == 1))
    p = rejections / runs
    return ExperimentResult(
        scenario=replace(scenario, seed=seed),
        method=method,
        runs=runs,
        rejections=rejections,
        rejection_rate=p,
        mc_stderr=math.sqrt(p * (1.0 - p) / runs),
        wall_time=time.perf_counter() - start,
        seed=seed,
        failed_runs=int(np.sum(outcomes < 0)),
    )


def power_curve(
    scenario: SimScenario,
    mu_grid,
    method: Method,
    runs: int,
    seed: int | None = None,
    workers: int | None = 1,
) -> list[ExperimentResult]:
    """One :func:`rejection_rate` per shift in ``mu_grid``, in grid order."""
    grid = [float(m) for m in mu_grid]
    if not grid:
        raise ConfigurationError("mu grid must be nonempty")
    return [
        rejection_rate(replace(scenario, mu=mu), method, runs, seed, workers) for mu in grid
    ]
