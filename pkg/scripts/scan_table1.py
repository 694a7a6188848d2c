#!/usr/bin/env python3
"""Regenerate tests/fixtures/table1_scan.json.

Scans node counts 10..60, computing the incoherence parameter q for fold
depths 1..4 at each size, and records which single node count (if any)
reproduces all four reference values within the acceptance tolerance. The
acceptance suite pins its gate to this fixture.
"""

import json
import sys
from pathlib import Path

from foldnet.arch_graph import build_dag
from foldnet.cli import REFERENCE_Q
from foldnet.fold_schedule import build_schedule
from foldnet.metrics import incoherence

TOLERANCE = 0.005
SCAN_RANGE = (10, 60)
FALLBACK_NODES = 20
DEPTHS = (1, 2, 3, 4)


def q_at(nodes: int, t: int) -> float:
    return incoherence(build_dag(build_schedule(nodes - 2, t))).q


def main() -> int:
    lo, hi = SCAN_RANGE
    grid = {n: {t: q_at(n, t) for t in DEPTHS} for n in range(lo, hi + 1)}

    simultaneous = [
        n
        for n, qs in grid.items()
        if all(abs(qs[t] - REFERENCE_Q[t]) <= TOLERANCE for t in DEPTHS)
    ]
    per_depth_best = {}
    for t in DEPTHS:
        best = min(grid, key=lambda n: abs(grid[n][t] - REFERENCE_Q[t]))
        per_depth_best[str(t)] = {
            "nodes": best,
            "q": grid[best][t],
            "error": abs(grid[best][t] - REFERENCE_Q[t]),
        }

    q_fallback = grid[FALLBACK_NODES]
    monotone = all(
        q_fallback[a] < q_fallback[b] for a, b in zip(DEPTHS, DEPTHS[1:])
    )

    mismatch = None
    if not simultaneous:
        mismatch = (
            f"No node count in [{lo}, {hi}] reproduces all four reference q values "
            f"within ±{TOLERANCE} under the documented wiring rule. At "
            f"{FALLBACK_NODES} nodes the computed q matches the references for fold "
            "depths 1 and 2 (errors below 2e-4) but is 0.017 low at depth 3 and "
            "0.042 low at depth 4; computed q decreases beyond fold depth 2 at "
            "fixed node count, so the monotone ordering q(1)<q(2)<q(3)<q(4) "
            "expected by the fallback gate does not hold either. A modified rule "
            "whose warmup skips connect all the way back to the input (offset l "
            "instead of 1 for layers l below the fold depth) reproduces the "
            "depth-3 reference exactly (0.8950) and restores monotonicity at 20 "
            "nodes, but contradicts the documented unit-offset warmup and still "
            "leaves depth 4 at 0.9203 vs 0.9124."
        )

    fixture = {
        "description": (
            "Scan of the incoherence parameter q over node counts, used to pin "
            "the node count for the reference-value acceptance gate."
        ),
        "targets": {str(t): REFERENCE_Q[t] for t in DEPTHS},
        "tolerance": TOLERANCE,
        "scan_nodes": [lo, hi],
        "simultaneous_match_nodes": simultaneous[0] if simultaneous else None,
        "per_depth_best": per_depth_best,
        "pinned_nodes": simultaneous[0] if simultaneous else FALLBACK_NODES,
        "q_at_pinned_nodes": {
            str(t): grid[simultaneous[0] if simultaneous else FALLBACK_NODES][t]
            for t in DEPTHS
        },
        "monotone_at_pinned_nodes": monotone,
        "mismatch": mismatch,
    }

    out = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "table1_scan.json"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(fixture, indent=2) + "\n")
    print(f"wrote {out}")
    print(f"simultaneous match: {fixture['simultaneous_match_nodes']}")
    print(f"q at pinned nodes: {fixture['q_at_pinned_nodes']}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
