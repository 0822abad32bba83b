#!/usr/bin/env python3
# Generated by wpd_lab plot. Renders Monte Carlo estimates with confidence intervals from montecarlo.csv.
import csv
import os
import sys
from collections import defaultdict

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

HERE = os.path.dirname(os.path.abspath(__file__))
CSV_PATH = os.path.join(HERE, "montecarlo.csv")


def load(path):
    with open(path, newline="") as fh:
        lines = [line for line in fh if not line.startswith("#")]
    return list(csv.DictReader(lines))


rows = load(CSV_PATH)
out = sys.argv[1] if len(sys.argv) > 1 else os.path.splitext(CSV_PATH)[0] + ".png"

fig, ax = plt.subplots(figsize=(5, 3.5))
for branch, marker in (("H", "o"), ("V", "s"), ("D", "^")):
    rs = [r for r in rows if r["branch"] == branch]
    t = [float(r["theta1_deg"]) for r in rs]
    est = [float(r["estimate"]) for r in rs]
    lo = [e - float(r["ci_low"]) for e, r in zip(est, rs)]
    hi = [float(r["ci_high"]) - e for e, r in zip(est, rs)]
    label = "D" if branch == "D" else "L (%s branch)" % branch
    ax.errorbar(t, est, yerr=[lo, hi], fmt=marker, capsize=3, label=label)
ax.set_xlabel("theta1 [deg]")
ax.legend()
fig.tight_layout()
fig.savefig(out, dpi=150)
