"""Hot numeric kernels, JIT-compiled with numba when available.

Set FOLDNET_NUMBA=0 to force the pure-numpy/python fallback path. The same
function bodies run either way; numba only removes the interpreter from the
inner loops. Arbitrary-precision work (path counting) lives elsewhere and is
never JIT-compiled.
"""

import os

import numpy as np


def _numba_requested() -> bool:
    flag = os.environ.get("FOLDNET_NUMBA", "1").strip().lower()
    return flag not in ("0", "false", "off", "no")


JIT_ENABLED = False
if _numba_requested():
    try:
        from numba import njit as _njit

        JIT_ENABLED = True
    except ImportError:
        JIT_ENABLED = False

if not JIT_ENABLED:

    def _njit(*args, **kwargs):
        # identity decorator: fallback path keeps plain numpy semantics
        if args and callable(args[0]):
            return args[0]

        def wrap(func):
            return func

        return wrap


@_njit(cache=True)
def schedule_offsets(num_layers, fold_depth):
    """Skip offsets i(l) for l = 1..num_layers as an int64 array."""
    out = np.empty(num_layers, dtype=np.int64)
    t = fold_depth
    if t == 1:
        for j in range(num_layers):
            out[j] = 1
        return out
    period = 2 * (t - 1)
    for j in range(num_layers):
        l = j + 1
        if l < t:
            out[j] = 1
            continue
        r1 = l % period
        if 1 <= r1 <= t - 1:
            out[j] = 2 * r1
        else:
            out[j] = 2 * ((r1 + t - 1) % period)
    return out


@_njit(cache=True)
def summation_chain_lengths(offsets):
    """|S(l)| for l = 0..L, where S(l) = {l} ∪ S(l - i(l)) and S(0) = {0}."""
    L = offsets.shape[0]
    sizes = np.empty(L + 1, dtype=np.int64)
    sizes[0] = 1
    for l in range(1, L + 1):
        sizes[l] = sizes[l - offsets[l - 1]] + 1
    return sizes


@_njit(cache=True)
def dag_edge_arrays(offsets):
    """Unrolled edge arrays (u, v) for the fold-schedule DAG, lexicographically sorted.

    Nodes: 0 = source, 1..L = blocks, L+1 = sink. Block l receives an edge
    from every member of S(l-1); the sink receives one from every member of
    S(L). Membership chains are walked via parent pointers, so no sets are
    materialized.
    """
    L = offsets.shape[0]
    sizes = summation_chain_lengths(offsets)
    m = sizes[L]
    for l in range(1, L + 1):
        m += sizes[l - 1]
    eu = np.empty(m, dtype=np.int64)
    ev = np.empty(m, dtype=np.int64)
    pos = 0
    for v in range(1, L + 2):
        # consumers: block v reads x_{v-1}; the sink (v = L+1) reads x_L
        w = v - 1 if v <= L else L
        while True:
            eu[pos] = w
            ev[pos] = v
            pos += 1
            if w == 0:
                break
            w = w - offsets[w - 1]
    keys = eu * np.int64(L + 2) + ev
    order = np.argsort(keys)
    return eu[order], ev[order]


@_njit(cache=True)
def trophic_sweep(num_nodes, in_ptr, in_src):
    """Forward substitution for node levels: level = 1 + mean over in-neighbors.

    in_ptr/in_src form a CSR view of in-edges grouped by target node, which
    must already be in topological (index) order.
    """
    levels = np.ones(num_nodes, dtype=np.float64)
    for v in range(num_nodes):
        a = in_ptr[v]
        b = in_ptr[v + 1]
        if b > a:
            acc = 0.0
            for i in range(a, b):
                acc += levels[in_src[i]]
            levels[v] = 1.0 + acc / (b - a)
    return levels


@_njit(cache=True)
def distance_moments(levels, eu, ev):
    """Per-edge level-gap mean and raw second moment."""
    m = eu.shape[0]
    s1 = 0.0
    s2 = 0.0
    for i in range(m):
        d = levels[ev[i]] - levels[eu[i]]
        s1 += d
        s2 += d * d
    return s1 / m, s2 / m


def warmup():
    """Trigger JIT compilation on tiny inputs so first real call is cheap."""
    offs = schedule_offsets(4, 2)
    eu, ev = dag_edge_arrays(offs)
    n = 6
    order = np.argsort(ev, kind="stable")
    src = eu[order]
    counts = np.bincount(ev, minlength=n)
    ptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=ptr[1:])
    levels = trophic_sweep(n, ptr, src)
    distance_moments(levels, eu, ev)
