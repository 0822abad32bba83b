#include <string>

#include "wpd/cli/scenarios.hpp"
#include "wpd/errors.hpp"

namespace wpd::cli {

namespace {

constexpr const char* kPrelude = R"py(#!/usr/bin/env python3
# Generated by wpd_lab plot. Renders {TITLE} from {CSV}.
import csv
import os
import sys
from collections import defaultdict

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

HERE = os.path.dirname(os.path.abspath(__file__))
CSV_PATH = os.path.join(HERE, "{CSV}")


def load(path):
    with open(path, newline="") as fh:
        lines = [line for line in fh if not line.startswith("#")]
    return list(csv.DictReader(lines))


rows = load(CSV_PATH)
out = sys.argv[1] if len(sys.argv) > 1 else os.path.splitext(CSV_PATH)[0] + ".png"
)py";

constexpr const char* kSweep = R"py(
groups = defaultdict(list)
for r in rows:
    groups[(r["case"], r["s1"], r["s2"], r["s3"])].append(r)

fig, axes = plt.subplots(1, len(groups), figsize=(4 * len(groups), 3.5), squeeze=False)
for ax, (key, rs) in zip(axes[0], groups.items()):
    t = [float(r["theta1_deg"]) for r in rs]
    for col, label in (("V", "V"), ("Dc", "D_c"), ("D", "D")):
        ax.plot(t, [float(r[col]) for r in rs], label=label)
    ax.set_title("case %s  s=(%s, %s, %s)" % key)
    ax.set_xlabel("theta1 [deg]")
    ax.set_ylim(-0.02, 1.02)
    ax.legend()
fig.tight_layout()
fig.savefig(out, dpi=150)
)py";

constexpr const char* kErasure = R"py(
groups = defaultdict(list)
for r in rows:
    groups[r["theta1_deg"]].append(r)

fig, axes = plt.subplots(1, len(groups), figsize=(5 * len(groups), 3.5), squeeze=False)
for ax, (theta, rs) in zip(axes[0], groups.items()):
    phi = [float(r["phi_rad"]) for r in rs]
    for col in ("p_out1", "p_apd10", "p_apd11"):
        ax.plot(phi, [float(r[col]) for r in rs], label=col)
    ax.set_title("theta1 = %s deg" % theta)
    ax.set_xlabel("phi [rad]")
    ax.legend()
fig.tight_layout()
fig.savefig(out, dpi=150)
)py";

constexpr const char* kMonteCarlo = R"py(
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
)py";

constexpr const char* kWpdVerify = R"py(
t = [float(r["theta1_deg"]) for r in rows]
fig, ax = plt.subplots(figsize=(5, 3.5))
for name, marker in (("V", "o"), ("D", "s")):
    est = [float(r[name + "_hat"]) for r in rows]
    lo = [e - float(r[name + "_ci_low"]) for e, r in zip(est, rows)]
    hi = [float(r[name + "_ci_high"]) - e for e, r in zip(est, rows)]
    ax.errorbar(t, est, yerr=[lo, hi], fmt=marker, capsize=3, label=name + " (MC)")
    ax.plot(t, [float(r[name + "_true"]) for r in rows], "--", label=name + " (theory)")
ax.plot(t, [float(r["V2_plus_D2"]) for r in rows], "k.", label="V^2 + D^2")
ax.set_xlabel("theta1 [deg]")
ax.set_ylim(-0.05, 1.1)
ax.legend()
fig.tight_layout()
fig.savefig(out, dpi=150)
)py";

void replace_all(std::string& s, const std::string& from, const std::string& to) {
  for (std::size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size()))
    s.replace(pos, from.size(), to);
}

}  // namespace

PlotKind parse_plot_kind(std::string_view name) {
  if (name == "sweep") return PlotKind::sweep;
  if (name == "erasure") return PlotKind::erasure;
  if (name == "montecarlo") return PlotKind::montecarlo;
  if (name == "wpd-verify") return PlotKind::wpd_verify;
  throw ConfigError("field 'kind': unknown plot kind '" + std::string(name) + "'");
}

std::string emit_plot_script(PlotKind kind, const std::string& csv_relpath) {
  std::string script = kPrelude;
  std::string title;
  switch (kind) {
    case PlotKind::sweep:
      title = "V, D_c and D against theta1";
      script += kSweep;
      break;
    case PlotKind::erasure:
      title = "erasure fringes";
      script += kErasure;
      break;
    case PlotKind::montecarlo:
      title = "Monte Carlo estimates with confidence intervals";
      script += kMonteCarlo;
      break;
    case PlotKind::wpd_verify:
      title = "measured V and D against theory";
      script += kWpdVerify;
      break;
  }
  replace_all(script, "{TITLE}", title);
  replace_all(script, "{CSV}", csv_relpath);
  return script;
}

}  // namespace wpd::cli
