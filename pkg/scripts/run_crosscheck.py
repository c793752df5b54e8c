#!/usr/bin/env python3
"""Run the seeded agreement batch and print a per-property summary table.

Usage: python3 scripts/run_crosscheck.py [models] [seed]
Writes crosscheck_report.jsonl and any divergence fixtures to ./divergences/.
"""

from __future__ import annotations

import sys
from collections import Counter

from opaq.crosscheck import run_crosscheck


def main() -> int:
    models = int(sys.argv[1]) if len(sys.argv) > 1 else 500
    seed = int(sys.argv[2]) if len(sys.argv) > 2 else 7
    result = run_crosscheck(
        models=models,
        max_states=5,
        ks=(0, 1, 2, 3),
        seed=seed,
        report_path="crosscheck_report.jsonl",
        fixtures_dir="divergences",
    )
    totals: Counter[str] = Counter()
    agreed: Counter[str] = Counter()
    for row in result.rows:
        totals[row["property"]] += 1
        agreed[row["property"]] += row["agree"]
    print(f"{'property':<12}{'checks':>8}{'agree':>8}{'rate':>9}")
    for prop in ("cs", "k-weak", "k-strong", "inf-weak", "inf-strong"):
        n, a = totals[prop], agreed[prop]
        print(f"{prop:<12}{n:>8}{a:>8}{a / n:>9.4f}")
    print(f"\nelapsed: {result.elapsed:.1f}s over {result.models} models")
    for path in result.divergence_fixtures:
        print(f"divergence fixture: {path}")
    for line in result.structural_failures:
        print(f"structural failure: {line}")
    return 0 if result.ok else 1


if __name__ == "__main__":
    sys.exit(main())
