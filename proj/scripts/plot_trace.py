#!/usr/bin/env python3
"""Plot a trace written by `mhfseg segment --trace` with optional label overlays."""

import argparse
import csv

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def read_trace(path):
    with open(path, newline="") as f:
        rows = list(csv.DictReader(f, delimiter="\t"))
    return {k: [float(r[k]) for r in rows] for k in rows[0]}


def read_labels(path):
    out = []
    with open(path) as f:
        for line in f:
            start, end, label = line.rstrip("\n").split("\t")
            out.append((float(start), float(end), label))
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("trace")
    ap.add_argument("-o", "--output", default="trace.png")
    ap.add_argument("--labels", help="label file; segment starts are drawn as vertical lines")
    ap.add_argument("--truth", help="reference label file, drawn dashed")
    args = ap.parse_args()

    tr = read_trace(args.trace)
    fig, (ax_v, ax_e) = plt.subplots(2, 1, sharex=True, figsize=(10, 5))
    ax_v.plot(tr["time_s"], tr["v"], label="v", lw=0.8)
    ax_v.plot(tr["time_s"], tr["v_normalized"], label="normalized", lw=0.8)
    ax_v.legend(loc="upper right")
    ax_e.plot(tr["time_s"], tr["energy"], color="C2", lw=0.8)
    ax_e.set_ylabel("energy")
    ax_e.set_xlabel("time (s)")

    if args.labels:
        for start, end, label in read_labels(args.labels):
            if start > 0 and (start == end or label.startswith("L")):
                ax_v.axvline(start, color="k" if label == "mark" else "r", lw=0.6)
    if args.truth:
        for start, _, _ in read_labels(args.truth):
            if start > 0:
                ax_v.axvline(start, color="gray", ls="--", lw=0.6)

    fig.tight_layout()
    fig.savefig(args.output, dpi=120)


if __name__ == "__main__":
    main()
