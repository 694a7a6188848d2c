"""Directed acyclic graph image of a fold schedule.

Mapping rule: nodes are the non-linear block transforms (plus an explicit
source for the network input and a sink for the final aggregation); an edge
u -> v means the output of u is one additive term in the tensor consumed by v.
Unrolling the additive recursion makes every producer of a summed tensor an
explicit in-neighbor, which is why the one-step schedule maps to a complete
DAG.
"""

import json
import os
import tempfile
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import kernels
from .errors import FormatError
from .fold_schedule import FoldSchedule

GRAPH_FORMAT = "foldnet-graph/1"


@dataclass(frozen=True)
class SummationSet:
    """Producer nodes whose outputs sum to the running tensor after a layer."""

    layer: int
    members: frozenset[int]


def summation_set(schedule: FoldSchedule, layer: int) -> SummationSet:
    """Nodes whose outputs are summed to form the tensor after `layer`.

    Recursively, the tensor after layer l is layer l's own output plus the
    tensor after layer l - i(l); layer 0 is the bare input.
    """
    if not 0 <= layer <= schedule.num_layers:
        raise ValueError(f"layer {layer} outside 0..{schedule.num_layers}")
    members = set()
    l = layer
    while l > 0:
        members.add(l)
        l -= schedule.offsets[l - 1]
    members.add(0)
    return SummationSet(layer=layer, members=frozenset(members))


@dataclass(frozen=True)
class ArchGraph:
    """Immutable DAG with node 0 as source and node num_nodes - 1 as sink."""

    num_nodes: int
    edges: tuple[tuple[int, int], ...]
    fold_depth: int | None = None

    @property
    def num_layers(self) -> int:
        """Block count under the source/blocks/sink role convention."""
        return self.num_nodes - 2

    @property
    def source(self) -> int:
        return 0

    @property
    def sink(self) -> int:
        return self.num_nodes - 1

    @cached_property
    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        if self.edges:
            arr = np.asarray(self.edges, dtype=np.int64)
            return arr[:, 0].copy(), arr[:, 1].copy()
        empty = np.empty(0, dtype=np.int64)
        return empty, empty

    @cached_property
    def in_csr(self) -> tuple[np.ndarray, np.ndarray]:
        """(ptr, src): in-edge sources grouped by target node."""
        eu, ev = self.edge_arrays
        order = np.argsort(ev, kind="stable")
        src = eu[order]
        counts = np.bincount(ev, minlength=self.num_nodes) if len(ev) else np.zeros(
            self.num_nodes, dtype=np.int64
        )
        ptr = np.zeros(self.num_nodes + 1, dtype=np.int64)
        np.cumsum(counts, out=ptr[1:])
        return ptr, src

    def in_neighbors(self, v: int) -> np.ndarray:
        ptr, src = self.in_csr
        return src[ptr[v] : ptr[v + 1]]

    @cached_property
    def violations(self) -> tuple[str, ...]:
        return tuple(validate(self))


def _edges_from_arrays(eu, ev) -> tuple[tuple[int, int], ...]:
    return tuple((int(u), int(v)) for u, v in zip(eu, ev))


def build_dag(schedule: FoldSchedule) -> ArchGraph:
    """Unroll a fold schedule into its DAG (source + blocks + sink)."""
    offsets = np.asarray(schedule.offsets, dtype=np.int64)
    eu, ev = kernels.dag_edge_arrays(offsets)
    return ArchGraph(
        num_nodes=schedule.num_layers + 2,
        edges=_edges_from_arrays(eu, ev),
        fold_depth=schedule.fold_depth,
    )


def complete_dag(num_nodes: int) -> ArchGraph:
    """DAG with every forward pair connected: n*(n-1)/2 edges."""
    if num_nodes < 2:
        raise ValueError(f"num_nodes must be >= 2, got {num_nodes}")
    edges = tuple(
        (u, v) for u in range(num_nodes) for v in range(u + 1, num_nodes)
    )
    return ArchGraph(num_nodes=num_nodes, edges=edges)


def validate(graph: ArchGraph) -> list[str]:
    """Invariant violations by name; an empty list means the graph is valid."""
    out = []
    n = graph.num_nodes
    if n < 2:
        out.append("graph must have at least a source and a sink node")
        return out
    seen = set()
    ordered = True
    in_deg = [0] * n
    out_deg = [0] * n
    for u, v in graph.edges:
        if not (0 <= u < n and 0 <= v < n):
            out.append(f"edge ({u},{v}) references a node outside 0..{n - 1}")
            continue
        if u >= v:
            out.append(f"edge ({u},{v}) violates topological order")
            ordered = False
        if (u, v) in seen:
            out.append(f"edge ({u},{v}) appears more than once")
        seen.add((u, v))
        out_deg[u] += 1
        in_deg[v] += 1
    if in_deg[0] > 0:
        out.append("source has ingoing edges")
    if out_deg[n - 1] > 0:
        out.append("sink has outgoing edges")
    for v in range(1, n - 1):
        if in_deg[v] == 0:
            out.append(f"block node {v} has no in-edge")
        if out_deg[v] == 0:
            out.append(f"block node {v} has no out-edge")
    if ordered:
        adj_fwd = [[] for _ in range(n)]
        adj_bwd = [[] for _ in range(n)]
        for u, v in seen:
            adj_fwd[u].append(v)
            adj_bwd[v].append(u)
        from_source = _reachable(adj_fwd, 0, n)
        to_sink = _reachable(adj_bwd, n - 1, n)
        for v in range(n):
            if not (from_source[v] and to_sink[v]):
                out.append(f"node {v} not on any source-sink path")
    return out


def _reachable(adj, start, n):
    seen = [False] * n
    seen[start] = True
    stack = [start]
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if not seen[v]:
                seen[v] = True
                stack.append(v)
    return seen


def require_valid(graph: ArchGraph):
    """Raise if the graph fails validation (used by metric entry points)."""
    if graph.violations:
        raise ValueError(
            "graph failed validation: " + "; ".join(graph.violations)
        )


def graph_to_json(graph: ArchGraph) -> str:
    """Serialize to the foldnet-graph/1 format (deterministic byte output)."""
    edges = ",".join(f"[{u},{v}]" for u, v in graph.edges)
    fold = "null" if graph.fold_depth is None else str(graph.fold_depth)
    return (
        "{"
        f'"format": "{GRAPH_FORMAT}", '
        f'"num_layers": {graph.num_layers}, '
        f'"fold_depth": {fold}, '
        f'"nodes": {graph.num_nodes}, '
        f'"edges": [{edges}]'
        "}\n"
    )


_GRAPH_KEYS = {"format", "num_layers", "fold_depth", "nodes", "edges"}


def graph_from_json(text: str) -> ArchGraph:
    """Parse and validate a foldnet-graph/1 document; refuses invalid graphs."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise FormatError("top-level value must be an object")
    if doc.get("format") != GRAPH_FORMAT:
        raise FormatError(
            f"format must be {GRAPH_FORMAT!r}, got {doc.get('format')!r}"
        )
    unknown = set(doc) - _GRAPH_KEYS
    if unknown:
        raise FormatError(f"unknown fields: {sorted(unknown)}")
    missing = _GRAPH_KEYS - set(doc)
    if missing:
        raise FormatError(f"missing fields: {sorted(missing)}")
    nodes = doc["nodes"]
    num_layers = doc["num_layers"]
    fold_depth = doc["fold_depth"]
    if not isinstance(nodes, int) or isinstance(nodes, bool):
        raise FormatError("nodes: must be an integer")
    if not isinstance(num_layers, int) or isinstance(num_layers, bool):
        raise FormatError("num_layers: must be an integer")
    if num_layers != nodes - 2:
        raise FormatError(f"num_layers must equal nodes - 2 ({nodes - 2}), got {num_layers}")
    if fold_depth is not None and (
        not isinstance(fold_depth, int) or isinstance(fold_depth, bool) or fold_depth < 1
    ):
        raise FormatError("fold_depth: must be null or a positive integer")
    raw_edges = doc["edges"]
    if not isinstance(raw_edges, list):
        raise FormatError("edges: must be an array")
    pairs = set()
    for i, e in enumerate(raw_edges):
        if (
            not isinstance(e, list)
            or len(e) != 2
            or any(not isinstance(x, int) or isinstance(x, bool) for x in e)
        ):
            raise FormatError(f"edges[{i}]: must be a pair of integers")
        pairs.add((e[0], e[1]))  # duplicates collapse silently
    graph = ArchGraph(
        num_nodes=nodes, edges=tuple(sorted(pairs)), fold_depth=fold_depth
    )
    if graph.violations:
        raise FormatError(
            "graph fails validation: " + "; ".join(graph.violations)
        )
    return graph


def save_graph(graph: ArchGraph, path: str):
    write_atomic(path, graph_to_json(graph))


def load_graph(path: str) -> ArchGraph:
    with open(path, "r", encoding="utf-8") as fh:
        return graph_from_json(fh.read())


def write_atomic(path: str, text: str):
    """Write via temp file + rename so readers never observe partial output."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-foldnet-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
