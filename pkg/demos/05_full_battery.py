"""Run the complete forensic battery and print the text report.

Equivalent to:  cometforensics analyze data/reconstructed_sham.csv --seed 42
"""

import sys

from cometforensics import SimulationConfig, emit_report, has_severe_flags, run_battery
from cometforensics.fixtures import reconstructed_sham_dataset

dataset = reconstructed_sham_dataset()
cfg = SimulationConfig(n_points=12, cells_per_slide=500, seed=42, replicates=100)
report = run_battery(dataset, cfg, alpha=0.05)

sys.stdout.write(emit_report(report, "text").decode())

print(f"\nexit-code contract would return: {2 if has_severe_flags(report) else 0}")
