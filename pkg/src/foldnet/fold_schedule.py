"""Fold-depth skip schedule.

The fold depth t folds the backbone chain into a serpentine with t rows; each
layer's identity skip reaches back to the previous layer occupying the same
row, which happens 2*(t-1) layers earlier on a descending leg and closer on an
ascending one. The first t-1 layers (before the fold has anything to pair
with) skip to the immediately previous layer, and t=1 degenerates to the plain
one-step residual chain.
"""

import operator
from dataclasses import dataclass

from . import kernels


def _check_positive(value, name):
    try:
        value = operator.index(value)
    except TypeError:
        raise ValueError(f"{name} must be a positive integer, got {value!r}") from None
    if value < 1:
        raise ValueError(f"{name} must be >= 1, got {value}")
    return value


def skip_offset(layer: int, fold_depth: int) -> int:
    """Skip offset i for a single layer: the block adds the output of layer - i.

    Branches, in order: fold depth 1 always gives 1; layers before the fold
    depth give 1 (warmup); otherwise the offset follows the two-remainder
    rule with period 2*(fold_depth - 1).
    """
    l = _check_positive(layer, "layer")
    t = _check_positive(fold_depth, "fold_depth")
    if t == 1 or l < t:
        return 1
    period = 2 * (t - 1)
    r1 = l % period
    if 1 <= r1 <= t - 1:
        return 2 * r1
    return 2 * ((r1 + t - 1) % period)


@dataclass(frozen=True)
class FoldSchedule:
    """Per-layer skip offsets for a backbone of num_layers blocks."""

    fold_depth: int
    num_layers: int
    offsets: tuple[int, ...]

    def __post_init__(self):
        t = _check_positive(self.fold_depth, "fold_depth")
        L = _check_positive(self.num_layers, "num_layers")
        if len(self.offsets) != L:
            raise ValueError(
                f"offsets has {len(self.offsets)} entries, expected num_layers={L}"
            )
        cap = max(1, 2 * (t - 1))
        for idx, off in enumerate(self.offsets):
            l = idx + 1
            if off < 1:
                raise ValueError(f"offsets[{l}] = {off} is not positive")
            if off > cap:
                raise ValueError(f"offsets[{l}] = {off} exceeds bound {cap}")
            if l - off < 0:
                raise ValueError(f"offsets[{l}] = {off} reaches before the input")
            if (t == 1 or l < t) and off != 1:
                raise ValueError(f"offsets[{l}] = {off} must be 1 (warmup / unit fold)")

    def offset(self, layer: int) -> int:
        """Offset for a 1-based layer index."""
        if not 1 <= layer <= self.num_layers:
            raise ValueError(f"layer {layer} outside 1..{self.num_layers}")
        return self.offsets[layer - 1]


def build_schedule(num_layers: int, fold_depth: int) -> FoldSchedule:
    """Schedule with offsets[l] = skip_offset(l, fold_depth) for l = 1..num_layers."""
    L = _check_positive(num_layers, "num_layers")
    t = _check_positive(fold_depth, "fold_depth")
    offsets = kernels.schedule_offsets(L, t)
    return FoldSchedule(fold_depth=t, num_layers=L, offsets=tuple(int(o) for o in offsets))
