#pragma once

#include <fstream>
#include <string>

#include "ktp/util.hpp"

namespace ktp {

// Static companion script; byte-identical on every emission.
inline void write_plot_script(const std::string& path) {
    static const char* script = R"PY(#!/usr/bin/env python3
"""Plot the CSV outputs living next to this script.

Produces, where the inputs exist:
  profiles.png   species densities and mixture velocity at the final time
                 (kinetic solid, reference dashed)
  distances.png  L1 distances against the reference vs eps (from compare.csv)
"""
import csv
import os
import sys

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

here = os.path.dirname(os.path.abspath(__file__))


def read_csv(name):
    path = os.path.join(here, name)
    if not os.path.exists(path):
        return None
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    for row in rows:
        for k, v in row.items():
            row[k] = float(v)
    return rows


def final_time_rows(rows):
    tmax = max(r["t"] for r in rows)
    return [r for r in rows if r["t"] == tmax], tmax


def plot_profiles():
    kin = read_csv("macro_kinetic.csv")
    if kin is None:
        return
    ref = read_csv("macro_euler.csv")
    kin_rows, tmax = final_time_rows(kin)
    fig, axes = plt.subplots(1, 3, figsize=(13, 4))
    for ax, key, label in zip(axes, ("n1", "n2", "u"), ("n1", "n2", "u")):
        ax.plot([r["x"] for r in kin_rows], [r[key] for r in kin_rows],
                "-", lw=1.2, label="kinetic")
        if ref is not None:
            ref_rows, _ = final_time_rows(ref)
            ax.plot([r["x"] for r in ref_rows], [r[key] for r in ref_rows],
                    "--", lw=1.2, label="reference")
        ax.set_xlabel("x")
        ax.set_title(f"{label} at t={tmax:g}")
        ax.legend()
    fig.tight_layout()
    fig.savefig(os.path.join(here, "profiles.png"), dpi=150)
    print("wrote profiles.png")


def plot_distances():
    rows = read_csv("compare.csv")
    if rows is None:
        return
    tmax = max(r["t"] for r in rows)
    rows = [r for r in rows if r["t"] == tmax]
    rows.sort(key=lambda r: r["eps"])
    if len(rows) < 2:
        return
    eps = [r["eps"] for r in rows]
    fig, ax = plt.subplots(figsize=(5, 4))
    for key in ("l1_n1", "l1_n2", "l1_mom", "l1_momflux", "rel_entropy"):
        ax.loglog(eps, [max(r[key], 1e-300) for r in rows], "o-", label=key)
    ax.set_xlabel("eps")
    ax.set_ylabel(f"distance at t={tmax:g}")
    ax.legend()
    fig.tight_layout()
    fig.savefig(os.path.join(here, "distances.png"), dpi=150)
    print("wrote distances.png")


if __name__ == "__main__":
    plot_profiles()
    plot_distances()
    print("done")
)PY";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw NumericError("cannot open output file: " + path);
    out << script;
}

}  // namespace ktp
