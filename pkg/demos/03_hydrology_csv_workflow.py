"""CSV workflow on a panel shaped like yearly river flow records.

Rows are years, columns are calendar days. The synthetic flows are skewed
and a block of spring days gets wetter partway through the record. The
script writes the CSV, runs the command line tool on it and reads back the
JSON report.
"""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

import numpy as np

from relcp.io import PanelSeries, write_panel_csv

rng = np.random.default_rng(3)
years, days = 120, 365
flows = rng.gamma(4.0, 25.0, (years, days))
flows[70:, 80:110] += 60.0

work = Path(tempfile.mkdtemp())
csv_path = work / "flows.csv"
write_panel_csv(PanelSeries(flows, tuple(f"day{i}" for i in range(1, days + 1))), csv_path)

# the threshold is on the raw scale: a change of 30 flow units matters
report_path = work / "report.json"
cmd = [sys.executable, "-m", "relcp", "detect", str(csv_path), "--delta", "30", "-o", str(report_path)]
subprocess.run(cmd, check=True)

report = json.loads(report_path.read_text())
print(f"reject: {report['reject']}  statistic {report['statistic']:.2f}  critical value {report['critical_value']:.2f}")
print(f"{len(report['relevant_set'])} relevant days:", ", ".join(report["relevant_set"]))
years_hit = sorted({c["change_index"] for c in report["components"] if c["label"] in report["relevant_set"]})
print("estimated change rows:", years_hit)
