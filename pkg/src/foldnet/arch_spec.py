"""Serializable description of a trainable network.

The layout is fixed: a conv-bn stem, four 32-channel stages whose blocks are
wired by a fold schedule that restarts at each stage boundary (skips never
cross a downsampling pool), max-pool downsampling everywhere but stage 1, and
a global-average-pool head. Block internals are named, not structurally
encoded; the trainer resolves them.
"""

import json
from dataclasses import dataclass

from .errors import FormatError
from .fold_schedule import FoldSchedule, build_schedule

ARCH_FORMAT = "foldnet-arch/1"
BLOCK_KINDS = ("bottleneck", "xception")
INPUT_SIZE = (32, 32, 3)
STAGE_CHANNELS = 32
NUM_STAGES = 4
DOWNSAMPLE = (False, True, True, True)
HEAD_POOL = "gap"
NUM_CLASSES = (10, 100)


@dataclass(frozen=True)
class ArchSpec:
    blocks_per_stage: int
    block_kind: str
    fold_depth: int
    num_classes: int
    seed: int | None = None

    def __post_init__(self):
        if self.blocks_per_stage < 1:
            raise ValueError(f"blocks_per_stage must be >= 1, got {self.blocks_per_stage}")
        if self.block_kind not in BLOCK_KINDS:
            raise ValueError(f"block_kind must be one of {BLOCK_KINDS}, got {self.block_kind!r}")
        if self.fold_depth < 1:
            raise ValueError(f"fold_depth must be >= 1, got {self.fold_depth}")
        if self.num_classes not in NUM_CLASSES:
            raise ValueError(f"num_classes must be one of {NUM_CLASSES}, got {self.num_classes}")

    @property
    def wiring(self) -> FoldSchedule:
        """Per-stage schedule; identical in every stage by construction."""
        return build_schedule(self.blocks_per_stage, self.fold_depth)

    @property
    def stages(self) -> tuple[dict, ...]:
        offsets = list(self.wiring.offsets)
        return tuple(
            {
                "blocks": self.blocks_per_stage,
                "channels": STAGE_CHANNELS,
                "downsample": DOWNSAMPLE[i],
                "offsets": offsets,
            }
            for i in range(NUM_STAGES)
        )


def build_arch_spec(
    blocks_per_stage: int,
    block_kind: str,
    fold_depth: int,
    num_classes: int,
    seed: int | None = None,
) -> ArchSpec:
    return ArchSpec(
        blocks_per_stage=blocks_per_stage,
        block_kind=block_kind,
        fold_depth=fold_depth,
        num_classes=num_classes,
        seed=seed,
    )


def to_json(spec: ArchSpec) -> str:
    """Serialize to the foldnet-arch/1 format (deterministic byte output)."""
    offsets = ",".join(str(o) for o in spec.wiring.offsets)
    stages = ", ".join(
        "{"
        f'"blocks": {spec.blocks_per_stage}, '
        f'"channels": {STAGE_CHANNELS}, '
        f'"downsample": {"true" if down else "false"}, '
        f'"offsets": [{offsets}]'
        "}"
        for down in DOWNSAMPLE
    )
    seed_part = f', "seed": {spec.seed}' if spec.seed is not None else ""
    return (
        "{"
        f'"format": "{ARCH_FORMAT}", '
        f'"input": [32,32,3], '
        f'"stem": "conv-bn", '
        f'"stages": [{stages}], '
        f'"block_kind": "{spec.block_kind}", '
        f'"fold_depth": {spec.fold_depth}, '
        f'"head": {{"pool": "{HEAD_POOL}", "classes": {spec.num_classes}}}'
        f"{seed_part}"
        "}\n"
    )


_TOP_KEYS = {"format", "input", "stem", "stages", "block_kind", "fold_depth", "head"}
_STAGE_KEYS = {"blocks", "channels", "downsample", "offsets"}
_HEAD_KEYS = {"pool", "classes"}


def _expect_int(value, path, minimum=None):
    if not isinstance(value, int) or isinstance(value, bool):
        raise FormatError(f"{path}: must be an integer")
    if minimum is not None and value < minimum:
        raise FormatError(f"{path}: must be >= {minimum}, got {value}")
    return value


def from_json(text: str) -> ArchSpec:
    """Parse, rejecting unknown fields and anything outside the invariants."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise FormatError("top-level value must be an object")
    if doc.get("format") != ARCH_FORMAT:
        raise FormatError(f"format: must be {ARCH_FORMAT!r}, got {doc.get('format')!r}")
    unknown = set(doc) - _TOP_KEYS - {"seed"}
    if unknown:
        raise FormatError(f"unknown fields: {sorted(unknown)}")
    missing = _TOP_KEYS - set(doc)
    if missing:
        raise FormatError(f"missing fields: {sorted(missing)}")
    if doc["input"] != [32, 32, 3]:
        raise FormatError(f"input: must be [32,32,3], got {doc['input']!r}")
    if doc["stem"] != "conv-bn":
        raise FormatError(f"stem: must be \"conv-bn\", got {doc['stem']!r}")
    if doc["block_kind"] not in BLOCK_KINDS:
        raise FormatError(f"block_kind: must be one of {list(BLOCK_KINDS)}, got {doc['block_kind']!r}")
    fold_depth = _expect_int(doc["fold_depth"], "fold_depth", minimum=1)

    head = doc["head"]
    if not isinstance(head, dict):
        raise FormatError("head: must be an object")
    if set(head) != _HEAD_KEYS:
        raise FormatError(f"head: fields must be {sorted(_HEAD_KEYS)}, got {sorted(head)}")
    if head["pool"] != HEAD_POOL:
        raise FormatError(f"head.pool: must be \"{HEAD_POOL}\", got {head['pool']!r}")
    if head["classes"] not in NUM_CLASSES:
        raise FormatError(f"head.classes: must be one of {list(NUM_CLASSES)}, got {head['classes']!r}")

    stages = doc["stages"]
    if not isinstance(stages, list) or len(stages) != NUM_STAGES:
        raise FormatError(f"stages: must be an array of {NUM_STAGES} stages")
    blocks = None
    for i, stage in enumerate(stages):
        path = f"stages[{i}]"
        if not isinstance(stage, dict):
            raise FormatError(f"{path}: must be an object")
        if set(stage) != _STAGE_KEYS:
            raise FormatError(f"{path}: fields must be {sorted(_STAGE_KEYS)}, got {sorted(stage)}")
        b = _expect_int(stage["blocks"], f"{path}.blocks", minimum=1)
        if blocks is None:
            blocks = b
        elif b != blocks:
            raise FormatError(f"{path}.blocks: stages must agree, got {b} vs {blocks}")
        if stage["channels"] != STAGE_CHANNELS:
            raise FormatError(f"{path}.channels: must be {STAGE_CHANNELS}, got {stage['channels']!r}")
        if stage["downsample"] is not DOWNSAMPLE[i]:
            raise FormatError(
                f"{path}.downsample: must be {str(DOWNSAMPLE[i]).lower()} for stage {i + 1}"
            )
        expected = list(build_schedule(blocks, fold_depth).offsets)
        if stage["offsets"] != expected:
            raise FormatError(
                f"{path}.offsets: do not match the fold schedule for"
                f" blocks={blocks}, fold_depth={fold_depth}"
            )
    seed = None
    if "seed" in doc:
        seed = _expect_int(doc["seed"], "seed")
    return ArchSpec(
        blocks_per_stage=blocks,
        block_kind=doc["block_kind"],
        fold_depth=fold_depth,
        num_classes=head["classes"],
        seed=seed,
    )
