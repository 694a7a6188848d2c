/**
 * Property probes: per-block gradient norms and the structural wiring audit.
 */

import * as tf from '@tensorflow/tfjs';

import { ArchSpec } from './archSpec.js';
import { BlockWiring, FoldNetModel } from './model.js';

export interface BlockGradient {
  block: string;
  norm: number;
}

export interface GradientProbeResult {
  blocks: BlockGradient[];
  allFinite: boolean;
  firstBlockNorm: number;
}

/** Backward pass on one labeled batch; gradient norm grouped per block. */
export function gradientProbe(
  model: FoldNetModel,
  images: tf.Tensor4D,
  labels: tf.Tensor1D,
): GradientProbeResult {
  const variables = model.trainableVariables();
  const { value, grads } = tf.variableGrads(
    () => model.loss(images, labels, true),
    variables,
  );
  const sums = new Map<string, number>();
  for (const [name, grad] of Object.entries(grads)) {
    const group = name.split('/')[0];
    const sq = (grad.square().sum().arraySync() as number) + (sums.get(group) ?? 0);
    sums.set(group, sq);
  }
  value.dispose();
  tf.dispose(grads);

  const order = (name: string) => {
    if (name === 'stem') return [-1, 0];
    if (name === 'head') return [Number.MAX_SAFE_INTEGER, 0];
    const match = /^s(\d+)b(\d+)$/.exec(name);
    return match ? [Number(match[1]), Number(match[2])] : [0, 0];
  };
  const blocks = [...sums.entries()]
    .sort((a, b) => {
      const [sa, ba] = order(a[0]);
      const [sb, bb] = order(b[0]);
      return sa - sb || ba - bb;
    })
    .map(([block, sq]) => ({ block, norm: Math.sqrt(sq) }));

  const allFinite = blocks.every((b) => Number.isFinite(b.norm));
  const badBlock = blocks.find((b) => !Number.isFinite(b.norm));
  if (badBlock) {
    throw new Error(`non-finite gradient in block ${badBlock.block}`);
  }
  const first = blocks.find((b) => b.block === 's0b1');
  return {
    blocks,
    allFinite,
    firstBlockNorm: first ? first.norm : 0,
  };
}

export interface AuditResult {
  ok: boolean;
  mismatches: Array<{ expected: BlockWiring; actual?: BlockWiring }>;
  blocksChecked: number;
}

/**
 * Structural audit: the addition indices the model actually used during its
 * last forward pass must match the offsets of an independently parsed spec.
 */
export function auditWiring(model: FoldNetModel, spec: ArchSpec): AuditResult {
  const expected: BlockWiring[] = [];
  spec.stages.forEach((stage, s) => {
    stage.offsets.forEach((offset, j) => {
      expected.push({ stage: s, block: j + 1, adds: j + 1 - offset, offset });
    });
  });
  const actual = model.lastForwardReads;
  const mismatches: AuditResult['mismatches'] = [];
  for (let i = 0; i < expected.length; i++) {
    const e = expected[i];
    const a = actual[i];
    if (!a || a.stage !== e.stage || a.block !== e.block || a.adds !== e.adds) {
      mismatches.push({ expected: e, actual: a });
    }
  }
  if (actual.length !== expected.length) {
    mismatches.push({
      expected: { stage: -1, block: actual.length, adds: expected.length, offset: 0 },
    });
  }
  return { ok: mismatches.length === 0, mismatches, blocksChecked: expected.length };
}
