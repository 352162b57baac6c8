#!/usr/bin/env python3
"""Rebuild data/mushroom.csv and data/votes.csv from redistributed UCI copies.

The UCI repository itself is not always reachable, so the two datasets are
extracted from packages on PyPI:

  mushroom  keel-ds (wheel)      keel_ds/data/balanced/raw/mushroom.dat
  votes     Orange 2.7.8 (sdist) Orange-2.7.8/Orange/datasets/voting.tab

The KEEL mushroom copy omits the 2480 rows whose stalk-root is missing, so it
has 5644 instances instead of 8124.

Usage:
  pip download --no-deps keel-ds -d /tmp/uci
  curl -o /tmp/uci/Orange-2.7.8.tar.gz <Orange 2.7.8 sdist url>
  python3 tools/prepare_uci_data.py /tmp/uci data/
"""

import argparse
import csv
import glob
import os
import tarfile
import zipfile

MUSHROOM_COLUMNS = [
    "cap-shape", "cap-surface", "cap-color", "bruises", "odor",
    "gill-attachment", "gill-spacing", "gill-size", "gill-color",
    "stalk-shape", "stalk-root", "stalk-surface-above-ring",
    "stalk-surface-below-ring", "stalk-color-above-ring",
    "stalk-color-below-ring", "veil-type", "veil-color", "ring-number",
    "ring-type", "spore-print-color", "population", "habitat",
]


def write_mushroom(src_dir, out_dir):
    wheel = sorted(glob.glob(os.path.join(src_dir, "keel_ds-*.whl")))[-1]
    with zipfile.ZipFile(wheel) as z:
        text = z.read("keel_ds/data/balanced/raw/mushroom.dat").decode()
    rows = [line.split(",") for line in text.split()]
    with open(os.path.join(out_dir, "mushroom.csv"), "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["class"] + MUSHROOM_COLUMNS)
        for r in rows:
            assert len(r) == 23, r
            w.writerow([r[-1]] + r[:-1])
    return len(rows)


def write_votes(src_dir, out_dir):
    sdist = os.path.join(src_dir, "Orange-2.7.8.tar.gz")
    with tarfile.open(sdist) as t:
        member = t.extractfile("Orange-2.7.8/Orange/datasets/voting.tab")
        lines = member.read().decode().splitlines()
    header = lines[0].split("\t")
    body = [line.split("\t") for line in lines[3:] if line.strip()]
    with open(os.path.join(out_dir, "votes.csv"), "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        for r in body:
            r = r + [""] * (len(header) - len(r))
            w.writerow([v.strip() or "?" for v in r])
    return len(body)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("src_dir")
    ap.add_argument("out_dir")
    args = ap.parse_args()
    os.makedirs(args.out_dir, exist_ok=True)
    print("mushroom rows:", write_mushroom(args.src_dir, args.out_dir))
    print("votes rows:", write_votes(args.src_dir, args.out_dir))


if __name__ == "__main__":
    main()
