#!/usr/bin/env python3
"""Run the verification suite in all three regimes and print a summary.

Usage: python scripts/run_verify_all.py [output_dir]
"""
import pathlib
import sys

from defectchain.cli import main

CONFIGS = [
    ["verify", "--regime", "xxx"],
    ["verify", "--regime", "critical", "--mu", "0.7"],
    ["verify", "--regime", "noncritical", "--eta", "0.4"],
]


def run(out_dir: pathlib.Path) -> int:
    out_dir.mkdir(parents=True, exist_ok=True)
    status = 0
    for args in CONFIGS:
        regime = args[2]
        out = out_dir / f"verify_{regime}.jsonl"
        code = main(args + ["--out", str(out)])
        marker = "ok" if code == 0 else "FAILED"
        print(f"{regime:12s} -> {out}  [{marker}]")
        status = max(status, code)
    return status


if __name__ == "__main__":
    target = pathlib.Path(sys.argv[1]) if len(sys.argv) > 1 else pathlib.Path("reports")
    sys.exit(run(target))
