"""Rejection rate as the true shift crosses the threshold.

Every component of a 100 x 100 panel shifts by mu and the threshold is 1.
Below 1 the test should rarely reject, above 1 it should reject more and
more often. The curve is written as CSV for plotting.

Usage: python demos/02_power_curve.py [runs] [workers]
"""

import sys
from pathlib import Path

from relcp import Method, SimScenario, emit_plot_data, power_curve

runs = int(sys.argv[1]) if len(sys.argv) > 1 else 200
workers = int(sys.argv[2]) if len(sys.argv) > 2 else 1

scenario = SimScenario("I", n=100, d=100, mu=1.0, seed=11)
grid = [0.8, 0.9, 1.0, 1.1, 1.2, 1.3]
curve = power_curve(scenario, grid, Method.bootstrap(K=1, replicates=200), runs, workers=workers)

print(f"{'mu':>5} {'rate':>7} {'stderr':>7}")
for res in curve:
    print(f"{res.scenario.mu:5.2f} {res.rejection_rate:7.3f} {res.mc_stderr:7.3f}")

out = Path("power_curve.csv")
emit_plot_data(curve, out)
print(f"\nplot data written to {out.resolve()}")
