#!/usr/bin/env python3
"""Dump transmission-amplitude tables for every family to csv files.

Usage: python scripts/tabulate_amplitudes.py [output_dir]
"""
import pathlib
import sys

from defectchain.cli import main

TABLES = [
    (["amplitude", "--regime", "xxx", "--grid=-2:2:41"], "type1_xxx.csv"),
    (["amplitude", "--regime", "critical", "--mu", "0.7", "--grid=-2:2:41"],
     "type1_critical.csv"),
    (["amplitude", "--regime", "noncritical", "--eta", "0.5", "--grid=-2:2:41"],
     "type1_noncritical.csv"),
    (["amplitude", "--regime", "critical", "--mu", "0.7", "--family", "breather",
      "--breather-n", "1", "--grid=-2:2:41"], "breather_n1.csv"),
    (["amplitude", "--regime", "critical", "--mu", "0.7", "--family", "breather",
      "--breather-n", "2", "--grid=-2:2:41"], "breather_n2.csv"),
    (["amplitude", "--regime", "noncritical", "--eta", "0.5", "--family", "type2",
      "--spin", "1.0", "--grid=-2:2:41"], "type2_spin1.csv"),
]


def run(out_dir: pathlib.Path) -> int:
    out_dir.mkdir(parents=True, exist_ok=True)
    status = 0
    for args, name in TABLES:
        out = out_dir / name
        code = main(args + ["--out", str(out)])
        print(f"{name:24s} [{'ok' if code == 0 else 'FAILED'}]")
        status = max(status, code)
    return status


if __name__ == "__main__":
    target = pathlib.Path(sys.argv[1]) if len(sys.argv) > 1 else pathlib.Path("tables")
    sys.exit(run(target))
