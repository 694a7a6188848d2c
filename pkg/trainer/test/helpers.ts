import { ArchSpec, parseArchSpec } from '../src/archSpec.js';

/** Skip offsets per the fold rule, reimplemented here so tests do not trust the spec file. */
export function skipOffsets(blocks: number, foldDepth: number): number[] {
  const out: number[] = [];
  for (let l = 1; l <= blocks; l++) {
    if (foldDepth === 1 || l < foldDepth) {
      out.push(1);
      continue;
    }
    const period = 2 * (foldDepth - 1);
    const r1 = l % period;
    out.push(r1 >= 1 && r1 <= foldDepth - 1 ? 2 * r1 : 2 * ((r1 + foldDepth - 1) % period));
  }
  return out;
}

export function archJson(
  blocks: number,
  kind: 'bottleneck' | 'xception',
  foldDepth: number,
  classes = 10,
  seed?: number,
): string {
  const offsets = skipOffsets(blocks, foldDepth);
  const doc: Record<string, unknown> = {
    format: 'foldnet-arch/1',
    input: [32, 32, 3],
    stem: 'conv-bn',
    stages: [false, true, true, true].map((downsample) => ({
      blocks,
      channels: 32,
      downsample,
      offsets,
    })),
    block_kind: kind,
    fold_depth: foldDepth,
    head: { pool: 'gap', classes },
  };
  if (seed !== undefined) doc.seed = seed;
  return JSON.stringify(doc);
}

export function archSpec(
  blocks: number,
  kind: 'bottleneck' | 'xception',
  foldDepth: number,
  classes = 10,
  seed?: number,
): ArchSpec {
  return parseArchSpec(archJson(blocks, kind, foldDepth, classes, seed));
}
