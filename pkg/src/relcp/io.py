"""CSV panel ingestion, detection requests and JSON / CSV reporting."""

from __future__ import annotations

import csv
import json
import math
import os
import tempfile
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Literal

import numpy as np

from .asymptotic import asymptotic_test
from .bootstrap import BootstrapConfig, bootstrap_test
from .config import EstimationConfig
from .errors import ConfigurationError, DegenerateSplitError, InvalidInputError, RelcpError

__all__ = [
    "SCHEMA_VERSION",
    "ParseError",
    "PanelSeries",
    "DetectRequest",
    "load_panel_csv",
    "write_panel_csv",
    "load_deltas",
    "run_detect",
    "report_to_json",
    "write_text_atomic",
    "write_json",
    "emit_plot_data",
]

SCHEMA_VERSION = "1.0"


class ParseError(InvalidInputError):
    """Malformed CSV input; ``row`` is the 1-based file line, ``column`` 1-based."""

    def __init__(self, message: str, row: int | None = None, column: int | None = None):
        self.row = row
        self.column = column
        where = []
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column {column}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)


@dataclass(frozen=True)
class PanelSeries:
    """An ``(n, d)`` panel with one label per column."""

    values: np.ndarray
    labels: tuple[str, ...]

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def d(self) -> int:
        return self.values.shape[1]


def load_panel_csv(path) -> PanelSeries:
    """Read a panel whose first row holds the column labels."""
    path = Path(path)
    with path.open(newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ParseError("file is empty")
    labels = tuple(c.strip() for c in rows[0])
    d = len(labels)
    data = []
    for line, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != d:
            raise ParseError(f"expected {d} cells, found {len(row)}", row=line)
        values = []
        for col, cell in enumerate(row, start=1):
            try:
                v = float(cell)
            except ValueError:
                raise ParseError(
                    f"non-numeric cell {cell!r} in column {labels[col - 1]!r}", line, col
                ) from None
            if not math.isfinite(v):
                raise ParseError(f"non-finite cell {cell!r}", line, col)
            values.append(v)
        data.append(values)
    if d < 2:
        raise InvalidInputError(f"need at least 2 columns, got {d}")
    if len(data) < 4:
        raise InvalidInputError(f"need at least 4 observations, got {len(data)}")
    return PanelSeries(np.asarray(data, dtype=np.float64), labels)


def write_text_atomic(path, text: str) -> None:
    """Write ``text`` so that ``path`` is either complete or untouched."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_panel_csv(panel: PanelSeries, path) -> None:
    """Write a panel with shortest round-trip decimals."""
    lines = [",".join(panel.labels)]
    lines += [",".join(repr(float(v)) for v in row) for row in panel.values]
    write_text_atomic(path, "\n".join(lines) + "\n")


def load_deltas(path, d: int) -> np.ndarray:
    """Per-column thresholds from a file of ``d`` numbers (commas or newlines)."""
    text = Path(path).read_text()
    cells = [c for c in text.replace(",", " ").split() if c]
    try:
        values = np.array([float(c) for c in cells])
    except ValueError as exc:
        raise ConfigurationError(f"thresholds file {path}: {exc}") from None
    if values.shape[0] != d:
        raise ConfigurationError(
            f"thresholds file {path} has {values.shape[0]} values, panel has {d} columns"
        )
    if not np.all(np.isfinite(values)) or np.any(values <= 0):
        raise ConfigurationError("thresholds must be finite and strictly positive")
    return values


@dataclass(frozen=True)
class DetectRequest:
    """Everything needed to reproduce one detection run.

    Exactly one of ``delta`` (scalar broadcast) and ``deltas_path`` (one
    value per column) must be given.
    """

    input_path: str
    delta: float | None = None
    deltas_path: str | None = None
    alpha: float = 0.05
    method: Literal["asymptotic", "bootstrap"] = "asymptotic"
    K: int | None = None
    replicates: int = 500
    seed: int = 0
    config: EstimationConfig = field(default_factory=EstimationConfig)
    output_path: str | None = None

    def __post_init__(self):
        if (self.delta is None) == (self.deltas_path is None):
            raise ConfigurationError("give exactly one of a scalar delta or a thresholds file")
        if self.method not in ("asymptotic", "bootstrap"):
            raise ConfigurationError(f"unknown method {self.method!r}")
        if self.method == "bootstrap" and self.K is None:
            raise ConfigurationError("the bootstrap method needs an explicit block length K")
        if not 0.0 < self.alpha < 1.0:
            raise ConfigurationError(f"alpha must lie in (0, 1), got {self.alpha}")


def _labelled(exc: RelcpError, labels) -> RelcpError:
    comp = getattr(exc, "component", None)
    if comp is None or not 0 <= comp < len(labels):
        return exc
    return type(exc)(f"column {labels[comp]!r}: {exc}")


def _version() -> str:
    from . import __version__

    return __version__


def run_detect(req: DetectRequest) -> dict:
    """Run the requested test on a CSV panel and build the report document."""
    start = time.perf_counter()
    panel = load_panel_csv(req.input_path)
    if req.deltas_path is not None:
        deltas = load_deltas(req.deltas_path, panel.d)
    else:
        deltas = np.full(panel.d, float(req.delta))
    boot = None
    try:
        if req.method == "bootstrap":
            boot = BootstrapConfig(req.K, req.replicates, seed=req.seed)
            boot.blocks(panel.n)
            report = bootstrap_test(panel.values, deltas, req.alpha, boot, req.config)
        else:
            report = asymptotic_test(panel.values, deltas, req.alpha, req.config)
    except DegenerateSplitError as exc:
        raise _labelled(exc, panel.labels) from exc

    s = report.stats
    components = [
        {
            "label": panel.labels[h],
            "t_stat": float(s.t_stat[h]),
            "m_hat_sq": float(s.m_hat_sq[h]),
            "t_hat": float(s.t_hat[h]),
            "change_index": int(s.k_hat[h]),
            "sigma_hat": float(s.sigma_hat[h]),
            "tau_hat": float(s.tau_hat[h]),
            "bias_correction": float(s.bias_correction[h]),
            "delta": float(s.deltas[h]),
        }
        for h in range(s.d)
    ]
    doc = {
        "schema_version": SCHEMA_VERSION,
        "tool": {"name": "relcp", "version": _version()},
        "method": report.method,
        "statistic": float(report.statistic),
        "critical_value": float(report.critical_value),
        "alpha": report.alpha,
        "reject": report.reject,
        "a_d": report.a_d,
        "b_d": report.b_d,
        "n": panel.n,
        "d": panel.d,
        "relevant_set": [panel.labels[h] for h in report.relevant_set],
        "relevant_indices": list(report.relevant_set),
        "components": components,
        "config": {
            "input_path": str(req.input_path),
            "deltas": [float(v) for v in deltas],
            "deltas_path": req.deltas_path,
            "alpha": req.alpha,
            "method": req.method,
            "K": req.K,
            "replicates": req.replicates if boot else None,
            "seed": req.seed if boot else None,
            "estimation": req.config.to_dict(),
            "output_path": req.output_path,
        },
    }
    if boot is not None:
        est = report.estimates
        doc["bootstrap"] = {
            "g_star": report.g_star,
            "replicates": boot.replicates,
            "K": boot.K,
            "seed": boot.seed,
            "delta_mu_hat": [float(v) for v in est.delta_mu_hat],
            "jump_indicator": [bool(v) for v in est.fired],
        }
    doc["timing"] = {"wall_seconds": time.perf_counter() - start}
    return doc


def report_to_json(doc: dict) -> str:
    """Serialise with shortest round-trip floats; non-finite values are refused."""
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def write_json(doc: dict, path) -> None:
    write_text_atomic(path, report_to_json(doc))


def emit_plot_data(curve, path) -> None:
    """CSV with columns ``mu, rejection_rate, mc_stderr, runs`` in grid order."""
    curve = list(curve)
    if not curve:
        raise InvalidInputError("power curve is empty")
    lines = ["mu,rejection_rate,mc_stderr,runs"]
    for res in curve:
        lines.append(
            f"{float(res.scenario.mu)!r},{float(res.rejection_rate)!r},"
            f"{float(res.mc_stderr)!r},{int(res.runs)}"
        )
    write_text_atomic(path, "\n".join(lines) + "\n")
