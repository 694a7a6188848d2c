"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run with `pytest tests/test_acceptance.py -s` to see every line. Two criteria
(reference-q reproduction and full pointwise CDF dominance) encode external
reference values that the documented wiring rule provably does not satisfy;
they are implemented faithfully and fail with exact diagnostics. The fixture
tests/fixtures/table1_scan.json documents the mismatch, per the gate's own
fallback instructions.
"""

import json
import math
import time
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from foldnet import kernels
from foldnet.arch_graph import ArchGraph, build_dag, complete_dag, load_graph, validate
from foldnet.cli import REFERENCE_Q, run
from foldnet.fold_schedule import build_schedule, skip_offset
from foldnet.metrics import incoherence, path_spectrum, trophic_levels

from oracles import dense_trophic_levels, dfs_path_counts, random_layered_dag

FIXTURE = Path(__file__).parent / "fixtures" / "table1_scan.json"


def _report(name, ok, detail=""):
    line = f"[{'PASS' if ok else 'FAIL'}] {name}" + (f": {detail}" if detail else "")
    print(line, flush=True)
    assert ok, line


def _q(nodes, t):
    return incoherence(build_dag(build_schedule(nodes - 2, t))).q


def test_criterion_table1_reference_reproduction():
    """q at the fixture-pinned node count vs the four reference values."""
    fixture = json.loads(FIXTURE.read_text())
    tolerance = fixture["tolerance"]
    targets = {int(k): v for k, v in fixture["targets"].items()}
    assert targets == REFERENCE_Q

    # re-run the scan live so the fixture can never go stale
    lo, hi = fixture["scan_nodes"]
    simultaneous = [
        n
        for n in range(lo, hi + 1)
        if all(abs(_q(n, t) - targets[t]) <= tolerance for t in (1, 2, 3, 4))
    ]
    assert (simultaneous[0] if simultaneous else None) == fixture["simultaneous_match_nodes"]

    start = time.perf_counter()
    pinned = fixture["pinned_nodes"]
    qs = {t: _q(pinned, t) for t in (1, 2, 3, 4)}
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0, f"q computation took {elapsed:.3f}s"
    for t in (1, 2, 3, 4):
        assert abs(qs[t] - fixture["q_at_pinned_nodes"][str(t)]) < 1e-12

    if simultaneous:
        bad = {t: qs[t] for t in qs if abs(qs[t] - targets[t]) > tolerance}
        _report(
            "table1-reference-reproduction",
            not bad,
            f"nodes={pinned} " + " ".join(f"q(t={t})={qs[t]:.4f}" for t in qs),
        )
    else:
        # fallback gate: mismatch documented in the fixture + monotone ordering
        assert fixture["mismatch"], "fixture must document the mismatch"
        monotone = qs[1] < qs[2] < qs[3] < qs[4]
        _report(
            "table1-reference-reproduction",
            monotone,
            f"no scan match; fallback monotonicity at nodes={pinned}: "
            + " ".join(f"q(t={t})={qs[t]:.4f}" for t in qs)
            + f" (targets {targets})",
        )


def test_criterion_fig5_cdf_dominance():
    """Pointwise CDF ordering at 20 nodes across fold depths."""
    start = time.perf_counter()
    nodes = 20
    spectra = {t: path_spectrum(build_dag(build_schedule(nodes - 2, t))) for t in (1, 2, 3, 4)}
    max_len = nodes - 1

    def cdf_fractions(sp):
        filled = dict(sp.counts)
        acc = Fraction(0)
        out = []
        for k in range(1, max_len + 1):
            acc += Fraction(filled.get(k, 0), sp.total)
            out.append(acc)
        return out

    cdfs = {t: cdf_fractions(spectra[t]) for t in spectra}
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0, f"spectra took {elapsed:.3f}s"

    problems = []
    for t in (2, 3, 4):
        below = [k + 1 for k in range(max_len) if cdfs[t][k] < cdfs[1][k]]
        if below:
            problems.append(f"CDF(t={t}) < CDF(t=1) at lengths {below}")
        if not cdfs[t][0] > cdfs[1][0]:
            problems.append(f"CDF(t={t}) not strictly above CDF(t=1) at length 1")
    for hi, lo in ((4, 3), (3, 2)):
        below = [k + 1 for k in range(max_len) if cdfs[hi][k] < cdfs[lo][k]]
        if below:
            problems.append(f"CDF(t={hi}) < CDF(t={lo}) at lengths {below}")
    _report("fig5-cdf-dominance", not problems, "; ".join(problems) or f"nodes={nodes}")


def test_criterion_complete_dag_binomial_law():
    """Exact binomial counts and power-of-two totals for every size 4..40."""
    for n in range(4, 41):
        sp = path_spectrum(complete_dag(n))
        expected = {k: math.comb(n - 2, k - 1) for k in range(1, n)}
        got = dict(sp.counts)
        if got != expected or sp.total != 2 ** (n - 2):
            _report("complete-dag-binomial-law", False, f"mismatch at n={n}")
    _report("complete-dag-binomial-law", True, "n=4..40 exact")


def test_criterion_trophic_identity_suite():
    """Mean gap identity, chain coherence, and the 4-node closed form."""
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(1000):
        rep = incoherence(random_layered_dag(rng))
        worst = max(worst, abs(rep.mean_distance - 1.0))
    chain = ArchGraph(num_nodes=6, edges=tuple((i, i + 1) for i in range(5)))
    chain_q = incoherence(chain).q
    q4 = incoherence(complete_dag(4)).q
    q4_err = abs(q4 - math.sqrt(23 / 18 - 1))
    ok = worst < 1e-9 and chain_q == 0.0 and q4_err < 1e-12
    _report(
        "trophic-identity-suite",
        ok,
        f"worst mean gap error {worst:.2e}, chain q {chain_q}, 4-node q error {q4_err:.2e}",
    )


def test_criterion_oracle_equivalence():
    """DP spectra vs exhaustive DFS; sweep levels vs dense linear solve."""
    for t in range(1, 6):
        for L in range(1, 11):  # node counts up to 12
            g = build_dag(build_schedule(L, t))
            if dict(path_spectrum(g).counts) != dfs_path_counts(g):
                _report("oracle-equivalence", False, f"spectrum mismatch t={t} L={L}")
    worst = 0.0
    for t in range(1, 6):
        for L in range(1, 49):  # node counts up to 50
            g = build_dag(build_schedule(L, t))
            err = float(np.max(np.abs(trophic_levels(g) - dense_trophic_levels(g))))
            worst = max(worst, err)
    ok = worst < 1e-10
    _report("oracle-equivalence", ok, f"worst level deviation {worst:.2e}")


def test_criterion_structural_regression(tmp_path):
    """Unit-fold equivalence, sweep validation, schedule bounds, file loop."""
    problems = []
    for L in range(1, 51):
        if build_dag(build_schedule(L, 1)).edges != complete_dag(L + 2).edges:
            problems.append(f"unit-fold mismatch at L={L}")
    for t in range(1, 9):
        for L in range(1, 65):
            if validate(build_dag(build_schedule(L, t))):
                problems.append(f"validation failure at t={t} L={L}")

    # schedule sweep: bounds, reach, and periodicity over the full grid
    max_l = 10**4
    for t in range(1, 65):
        offs = kernels.schedule_offsets(max_l + 2 * max(1, t - 1), t)
        layers = np.arange(1, len(offs) + 1)
        if offs.min() < 1 or offs.max() > max(1, 2 * (t - 1)):
            problems.append(f"offset bounds violated at t={t}")
        if np.any(layers - offs < 0):
            problems.append(f"offset reaches before input at t={t}")
        if t >= 2:
            period = 2 * (t - 1)
            body = offs[t - 1 : max_l]
            shifted = offs[t - 1 + period : max_l + period]
            if not np.array_equal(body, shifted):
                problems.append(f"periodicity broken at t={t}")
        if skip_offset(max_l, t) != int(offs[max_l - 1]):
            problems.append(f"scalar/kernel disagreement at t={t}")

    # every emitted file reloads and validates across the sweep grid
    for t in range(1, 9):
        for L in range(1, 65):
            out = tmp_path / f"g{t}-{L}.json"
            status = run(["gen", "--t", str(t), "--layers", str(L), "--out", str(out)])
            if status != 0 or validate(load_graph(str(out))):
                problems.append(f"file loop failure at t={t} L={L}")
    _report("structural-regression", not problems, "; ".join(problems[:5]))
