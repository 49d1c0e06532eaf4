"""Replay the honest-sampling null model and compare it to the table.

The pooled population is randomly re-sampled without replacement, 500
cells per slide, which is the lowest-variance way honest data could ever
be produced (no biology, no handling, no scorer error).  Even this floor
varies several times more than the reported table.

Writes fig1.csv / fig2.csv plot data next to this script; renders PNGs
when matplotlib is importable.
"""

import os

from cometforensics import SimulationConfig, emit_plot_data, run_battery
from cometforensics.fixtures import reconstructed_sham_dataset

dataset = reconstructed_sham_dataset()
cfg = SimulationConfig(n_points=12, cells_per_slide=500, seed=42, replicates=100)
report = run_battery(dataset, cfg)
sim = report.simulation

print(f"reported:   intra CV {100 * report.dispersion.intra_cv:.1f}%, "
      f"inter CV {100 * report.dispersion.inter_cv:.1f}%")
print(f"simulated:  intra CV {100 * sim.sim_intra_cv:.1f}%, "
      f"inter CV {100 * sim.sim_inter_cv:.1f}%, tail-factor mean {sim.sim_tf_mean:.2f}")

print("\nper-category slide-count variance (reported vs simulated median):")
for c, name in enumerate(sim.fig2_data.categories):
    t = sim.per_category_variance_tests[c]
    print(
        f"  {name}: {sim.fig2_data.reported[c]:8.3f} vs {sim.fig2_data.simulated[c]:8.3f}"
        f"   F={t.statistic:7.2f}  p={t.p_value:.2e}"
    )

out_dir = os.path.dirname(os.path.abspath(__file__))
paths = emit_plot_data(report, out_dir)
print("\nwrote: " + ", ".join(paths))

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    print("matplotlib not available; skipping PNG rendering")
else:
    f1 = sim.fig1_data
    x = range(1, len(f1.labels) + 1)
    fig, ax = plt.subplots(figsize=(8, 4))
    ax.plot(x, f1.reported_a, "o-", color="tab:blue", label="reported")
    ax.plot(x, f1.reported_b, "o--", color="tab:blue", alpha=0.6)
    ax.plot(x, f1.simulated_a, "s-", color="tab:red", label="simulated")
    ax.plot(x, f1.simulated_b, "s--", color="tab:red", alpha=0.6)
    ax.set_xlabel("duplicate point")
    ax.set_ylabel("tail factor")
    ax.set_title("reported vs simulated tail factors (both slides)")
    ax.legend()
    fig.tight_layout()
    fig.savefig(os.path.join(out_dir, "fig1.png"), dpi=120)

    fig, ax = plt.subplots(figsize=(6, 4))
    cats = [c for c in sim.fig2_data.categories if c in "ABCD"]
    idx = range(len(cats))
    rep = sim.fig2_data.reported[: len(cats)]
    simv = sim.fig2_data.simulated[: len(cats)]
    ax.bar([i - 0.18 for i in idx], rep, width=0.36, label="reported", color="tab:blue")
    ax.bar([i + 0.18 for i in idx], simv, width=0.36, label="simulated", color="tab:red")
    ax.set_xticks(list(idx), cats)
    ax.set_yscale("log")
    ax.set_ylabel("slide-count variance (log scale)")
    ax.set_title("per-category variance, reported vs simulated")
    ax.legend()
    fig.tight_layout()
    fig.savefig(os.path.join(out_dir, "fig2.png"), dpi=120)
    print("wrote: fig1.png, fig2.png")
