"""Structural signatures of an unrolled skip DAG.

Two families: trophic coherence (per-node levels from the in-neighbor mean
recursion, per-edge level gaps, and the incoherence parameter q = population
standard deviation of the gaps) and the exact source-to-sink path-length
spectrum with its CDF. Path counts are arbitrary-precision integers and CDFs
are accumulated as exact rationals; floats appear only at the output boundary.
"""

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import sqrt

import numpy as np

from . import kernels
from .arch_graph import ArchGraph, require_valid


def format_float(x: float) -> str:
    """17-significant-digit decimal form, enough to round-trip any float64."""
    return format(float(x), ".17g")


def trophic_levels(graph: ArchGraph) -> np.ndarray:
    """Per-node level: 1 for in-degree-0 nodes, else 1 + mean over in-neighbors.

    One forward substitution pass in index order solves the defining linear
    system exactly, because every in-neighbor of a node precedes it.
    """
    require_valid(graph)
    ptr, src = graph.in_csr
    return kernels.trophic_sweep(graph.num_nodes, ptr, src)


@dataclass(frozen=True)
class TrophicReport:
    """Levels, per-edge level gaps (aligned with graph.edges), and q."""

    levels: tuple[float, ...]
    distances: tuple[float, ...]
    mean_distance: float
    q: float


def incoherence(graph: ArchGraph) -> TrophicReport:
    """Full trophic report; q uses the population second moment of the gaps."""
    levels = trophic_levels(graph)
    eu, ev = graph.edge_arrays
    mean, second = kernels.distance_moments(levels, eu, ev)
    q = sqrt(max(second - 1.0, 0.0))
    distances = levels[ev] - levels[eu]
    return TrophicReport(
        levels=tuple(float(v) for v in levels),
        distances=tuple(float(d) for d in distances),
        mean_distance=float(mean),
        q=float(q),
    )


@dataclass(frozen=True)
class PathSpectrum:
    """Exact source-to-sink path counts keyed by edge length."""

    counts: tuple[tuple[int, int], ...]  # (length, count), ascending, counts > 0
    total: int

    def count(self, length: int) -> int:
        for k, c in self.counts:
            if k == length:
                return c
        return 0

    @property
    def lengths(self) -> tuple[int, ...]:
        return tuple(k for k, _ in self.counts)

    @property
    def max_length(self) -> int:
        return self.counts[-1][0]

    @property
    def cdf(self) -> tuple[tuple[int, float], ...]:
        return cdf(self)


def path_spectrum(graph: ArchGraph) -> PathSpectrum:
    """Count source-to-sink paths per edge length by dynamic programming.

    Per node, a dense list indexed by length accumulates big-integer counts
    from every in-neighbor shifted by one; equivalent to exhaustive path
    enumeration but polynomial. No overflow at any size: counts are Python
    integers.
    """
    require_valid(graph)
    n = graph.num_nodes
    ptr, src = graph.in_csr
    per_node: list[list[int]] = [[] for _ in range(n)]
    per_node[0] = [1]  # one empty path at the source
    for v in range(1, n):
        preds = src[ptr[v] : ptr[v + 1]]
        acc: list[int] = []
        for u in preds:
            lu = per_node[u]
            need = len(lu) + 1
            if len(acc) < need:
                acc.extend([0] * (need - len(acc)))
            for k, c in enumerate(lu):
                if c:
                    acc[k + 1] += c
        per_node[v] = acc
    sink = per_node[n - 1]
    counts = tuple((k, c) for k, c in enumerate(sink) if c)
    total = sum(c for _, c in counts)
    return PathSpectrum(counts=counts, total=total)


def cdf(spectrum: PathSpectrum) -> tuple[tuple[int, float], ...]:
    """Cumulative fraction of paths up to each support length.

    Accumulated as exact rationals and converted to float per point; the last
    value is exactly 1.0.
    """
    if not spectrum.counts:
        raise ValueError("empty spectrum has no CDF")
    acc = Fraction(0)
    out = []
    for k, c in spectrum.counts:
        acc += Fraction(c, spectrum.total)
        out.append((k, float(acc)))
    return tuple(out)


class Dominance(enum.Enum):
    YES = "yes"
    NO = "no"
    MIXED = "mixed"


@dataclass(frozen=True)
class DominanceReport:
    """Pointwise CDF comparison of two spectra over the union of lengths."""

    dominates: Dominance
    deltas: tuple[tuple[int, float], ...]  # (length, cdf_a - cdf_b)


def _cdf_fractions(spectrum: PathSpectrum, upto: int) -> list[Fraction]:
    filled = dict(spectrum.counts)
    acc = Fraction(0)
    out = []
    for k in range(1, upto + 1):
        if k in filled:
            acc += Fraction(filled[k], spectrum.total)
        out.append(acc)
    return out


def dominance_compare(a: PathSpectrum, b: PathSpectrum) -> DominanceReport:
    """YES iff a's CDF is pointwise >= b's with strict inequality somewhere.

    NO for the reversed relation; MIXED otherwise (including exact equality,
    so a spectrum never dominates itself). Deltas are reported for every
    length up to the longer support, computed exactly before conversion.
    """
    if not a.counts or not b.counts:
        raise ValueError("cannot compare empty spectra")
    upto = max(a.max_length, b.max_length)
    fa = _cdf_fractions(a, upto)
    fb = _cdf_fractions(b, upto)
    diffs = [x - y for x, y in zip(fa, fb)]
    any_pos = any(d > 0 for d in diffs)
    any_neg = any(d < 0 for d in diffs)
    if any_pos and not any_neg:
        verdict = Dominance.YES
    elif any_neg and not any_pos:
        verdict = Dominance.NO
    else:
        verdict = Dominance.MIXED
    deltas = tuple((k + 1, float(d)) for k, d in enumerate(diffs))
    return DominanceReport(dominates=verdict, deltas=deltas)


def receptive_diversity(graph: ArchGraph) -> tuple[int, ...]:
    """Per node, how many distinct source-to-node path lengths are realized.

    Same sweep as the spectrum with counts replaced by length sets, encoded
    as bitmasks (bit k set = some path of k edges reaches the node).
    """
    require_valid(graph)
    n = graph.num_nodes
    ptr, src = graph.in_csr
    masks = [0] * n
    masks[0] = 1
    for v in range(1, n):
        m = 0
        for u in src[ptr[v] : ptr[v + 1]]:
            m |= masks[u] << 1
        masks[v] = m
    return tuple(m.bit_count() for m in masks)


def metrics_json(graph: ArchGraph) -> str:
    """Combined metrics document; spectrum counts as decimal strings."""
    report = incoherence(graph)
    spectrum = path_spectrum(graph)
    levels = ", ".join(format_float(v) for v in report.levels)
    spec = ", ".join(f'"{k}": "{c}"' for k, c in spectrum.counts)
    cdf_pairs = ", ".join(f"[{k}, {format_float(f)}]" for k, f in cdf(spectrum))
    return (
        "{"
        f'"q": {format_float(report.q)}, '
        f'"mean_distance": {format_float(report.mean_distance)}, '
        f'"levels": [{levels}], '
        f'"spectrum": {{{spec}}}, '
        f'"cdf": [{cdf_pairs}]'
        "}\n"
    )


def cdf_csv(spectrum: PathSpectrum) -> str:
    """CSV with one row per support point: length,count,cdf."""
    lines = ["length,count,cdf"]
    for (k, c), (_, f) in zip(spectrum.counts, cdf(spectrum)):
        lines.append(f"{k},{c},{format_float(f)}")
    return "\n".join(lines) + "\n"
