/**
 * Reader for foldnet-arch/1 network descriptions.
 *
 * The trainer consumes the analyzer's exported JSON and nothing else; parsing
 * is strict so a drifting producer fails loudly here rather than training a
 * silently different network.
 */

import { readFileSync } from 'node:fs';

export type BlockKind = 'bottleneck' | 'xception';

export interface StageSpec {
  blocks: number;
  channels: number;
  downsample: boolean;
  /** skip offsets, 1-based per block: block l adds the activation l - offsets[l-1] */
  offsets: number[];
}

export interface ArchSpec {
  input: [number, number, number];
  stem: 'conv-bn';
  stages: StageSpec[];
  blockKind: BlockKind;
  foldDepth: number;
  classes: number;
  seed: number | null;
}

const FORMAT = 'foldnet-arch/1';
const TOP_KEYS = new Set(['format', 'input', 'stem', 'stages', 'block_kind', 'fold_depth', 'head', 'seed']);
const STAGE_KEYS = new Set(['blocks', 'channels', 'downsample', 'offsets']);

function fail(path: string, message: string): never {
  throw new Error(`arch spec ${path}: ${message}`);
}

function expectInt(value: unknown, path: string, minimum?: number): number {
  if (typeof value !== 'number' || !Number.isInteger(value)) {
    fail(path, `expected an integer, got ${JSON.stringify(value)}`);
  }
  if (minimum !== undefined && value < minimum) {
    fail(path, `must be >= ${minimum}, got ${value}`);
  }
  return value;
}

export function parseArchSpec(text: string): ArchSpec {
  let doc: unknown;
  try {
    doc = JSON.parse(text);
  } catch (err) {
    throw new Error(`arch spec is not valid JSON: ${(err as Error).message}`);
  }
  if (typeof doc !== 'object' || doc === null || Array.isArray(doc)) {
    fail('$', 'top level must be an object');
  }
  const obj = doc as Record<string, unknown>;
  if (obj.format !== FORMAT) {
    fail('format', `unknown version tag ${JSON.stringify(obj.format)}, expected "${FORMAT}"`);
  }
  for (const key of Object.keys(obj)) {
    if (!TOP_KEYS.has(key)) fail(key, 'unknown field');
  }
  for (const key of ['input', 'stem', 'stages', 'block_kind', 'fold_depth', 'head']) {
    if (!(key in obj)) fail(key, 'missing field');
  }
  const input = obj.input;
  if (!Array.isArray(input) || input.length !== 3 || input.some((x) => typeof x !== 'number')) {
    fail('input', 'must be [height, width, channels]');
  }
  if (obj.stem !== 'conv-bn') fail('stem', `unsupported stem ${JSON.stringify(obj.stem)}`);
  if (obj.block_kind !== 'bottleneck' && obj.block_kind !== 'xception') {
    fail('block_kind', `must be "bottleneck" or "xception", got ${JSON.stringify(obj.block_kind)}`);
  }
  const foldDepth = expectInt(obj.fold_depth, 'fold_depth', 1);

  const head = obj.head;
  if (typeof head !== 'object' || head === null) fail('head', 'must be an object');
  const headObj = head as Record<string, unknown>;
  if (headObj.pool !== 'gap') fail('head.pool', `must be "gap", got ${JSON.stringify(headObj.pool)}`);
  const classes = expectInt(headObj.classes, 'head.classes', 2);

  const rawStages = obj.stages;
  if (!Array.isArray(rawStages) || rawStages.length === 0) fail('stages', 'must be a non-empty array');
  const stages: StageSpec[] = rawStages.map((raw, i) => {
    const path = `stages[${i}]`;
    if (typeof raw !== 'object' || raw === null) fail(path, 'must be an object');
    const stage = raw as Record<string, unknown>;
    for (const key of Object.keys(stage)) {
      if (!STAGE_KEYS.has(key)) fail(`${path}.${key}`, 'unknown field');
    }
    const blocks = expectInt(stage.blocks, `${path}.blocks`, 1);
    const channels = expectInt(stage.channels, `${path}.channels`, 1);
    if (typeof stage.downsample !== 'boolean') fail(`${path}.downsample`, 'must be a boolean');
    const offsets = stage.offsets;
    if (!Array.isArray(offsets) || offsets.length !== blocks) {
      fail(`${path}.offsets`, `must list exactly ${blocks} offsets`);
    }
    offsets.forEach((off, j) => {
      const l = j + 1;
      expectInt(off, `${path}.offsets[${j}]`, 1);
      if (l - (off as number) < 0) {
        fail(`${path}.offsets[${j}]`, `offset ${off} reaches before the stage input`);
      }
    });
    return {
      blocks,
      channels,
      downsample: stage.downsample,
      offsets: offsets as number[],
    };
  });
  if (stages[0].downsample) fail('stages[0].downsample', 'stage 1 must not downsample');

  let seed: number | null = null;
  if ('seed' in obj && obj.seed !== null) {
    seed = expectInt(obj.seed, 'seed');
  }

  return {
    input: [input[0] as number, input[1] as number, input[2] as number],
    stem: 'conv-bn',
    stages,
    blockKind: obj.block_kind,
    foldDepth,
    classes,
    seed,
  };
}

export function loadArchSpec(path: string): ArchSpec {
  return parseArchSpec(readFileSync(path, 'utf-8'));
}
