#!/usr/bin/env python3
"""Plot wealthsim CSV bundles: P(w), Q(w) and the tax-sweep curves."""

import argparse
import csv
import os
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def read_csv(path):
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        rows = [row for row in reader]
    return {key: [float(row[key]) for row in rows] for key in reader.fieldnames}


def plot_run(run_dir, axes):
    pw = read_csv(os.path.join(run_dir, "pw.csv"))
    qw = read_csv(os.path.join(run_dir, "qw.csv"))

    ax = axes[0]
    ax.plot(pw["w_bin_center"], pw["density"], lw=1)
    ax.set_xlabel("w")
    ax.set_ylabel("P(w)")
    ax.set_title("wealth distribution")

    ax = axes[1]
    w = [x for x, q in zip(qw["w"], qw["Q"]) if q > 0]
    q = [q for q in qw["Q"] if q > 0]
    ax.semilogy(w, q, lw=1)
    ax.set_xlabel("w")
    ax.set_ylabel("Q(w)")
    ax.set_title("complementary cumulative")


def plot_sweep(sweep_dir, axes):
    sw = read_csv(os.path.join(sweep_dir, "sweep.csv"))

    ax = axes[0]
    ax.plot(sw["f"], sw["w_m"], "o-", ms=3)
    ax.set_xlabel("f")
    ax.set_ylabel("w_m")
    ax.set_title("modal wealth vs tax rate")

    ax = axes[1]
    pairs = [(f, s) for f, s in zip(sw["f"], sw["lognormal_slope"])
             if s == s]  # drop nan
    if pairs:
        ax.plot([p[0] for p in pairs], [p[1] for p in pairs], "o-", ms=3)
    ax.set_xlabel("f")
    ax.set_ylabel("log-normal plot slope")
    ax.set_title("CCDF probability-plot slope vs tax rate")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--run", help="directory with pw.csv/qw.csv")
    parser.add_argument("--sweep", help="directory with sweep.csv")
    parser.add_argument("--save", default=".", help="output directory for PNGs")
    args = parser.parse_args()
    if not args.run and not args.sweep:
        parser.error("need --run and/or --sweep")

    os.makedirs(args.save, exist_ok=True)
    if args.run:
        fig, axes = plt.subplots(1, 2, figsize=(9, 3.5), tight_layout=True)
        plot_run(args.run, axes)
        out = os.path.join(args.save, "distribution.png")
        fig.savefig(out, dpi=150)
        print(out)
    if args.sweep:
        fig, axes = plt.subplots(1, 2, figsize=(9, 3.5), tight_layout=True)
        plot_sweep(args.sweep, axes)
        out = os.path.join(args.save, "sweep.png")
        fig.savefig(out, dpi=150)
        print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
