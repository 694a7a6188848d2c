import * as tf from '@tensorflow/tfjs';
import { beforeAll, describe, expect, it } from 'vitest';

import { initBackend } from '../src/backend.js';
import { conv1x1, conv3x3, depthwise3x3, maxPool2x2 } from '../src/fastconv.js';
import { FoldNetModel } from '../src/model.js';
import { auditWiring } from '../src/probes.js';
import { archSpec, skipOffsets } from './helpers.js';

beforeAll(async () => {
  await initBackend();
});

describe('fastconv building blocks', () => {
  it('conv3x3 matches the native convolution', () => {
    const x = tf.randomNormal([2, 8, 8, 5]) as tf.Tensor4D;
    const w = tf.randomNormal([3, 3, 5, 7]);
    const diff = conv3x3(x, w).sub(tf.conv2d(x, w as tf.Tensor4D, 1, 'same')).abs().max();
    expect(diff.arraySync() as number).toBeLessThan(1e-4);
  });

  it('conv1x1 matches the native convolution', () => {
    const x = tf.randomNormal([2, 8, 8, 5]) as tf.Tensor4D;
    const w = tf.randomNormal([1, 1, 5, 7]);
    const diff = conv1x1(x, w).sub(tf.conv2d(x, w as tf.Tensor4D, 1, 'same')).abs().max();
    expect(diff.arraySync() as number).toBeLessThan(1e-4);
  });

  it('depthwise3x3 matches the native depthwise convolution', () => {
    const x = tf.randomNormal([2, 8, 8, 5]) as tf.Tensor4D;
    const w = tf.randomNormal([3, 3, 5, 1]);
    const diff = depthwise3x3(x, w)
      .sub(tf.depthwiseConv2d(x, w as tf.Tensor4D, 1, 'same'))
      .abs()
      .max();
    expect(diff.arraySync() as number).toBeLessThan(1e-4);
  });

  it('maxPool2x2 matches the native pooling', () => {
    const x = tf.randomNormal([2, 16, 16, 4]) as tf.Tensor4D;
    const diff = maxPool2x2(x).sub(tf.maxPool(x, 2, 2, 'same')).abs().max();
    expect(diff.arraySync() as number).toBe(0);
  });
});

describe('FoldNetModel', () => {
  it('produces logits of the head width (reference config)', () => {
    const model = new FoldNetModel(archSpec(24, 'xception', 3), 1);
    const x = tf.zeros([4, 32, 32, 3]) as tf.Tensor4D;
    const logits = model.forward(x, false);
    expect(logits.shape).toEqual([4, 10]);
    logits.dispose();
    x.dispose();
    model.dispose();
  });

  it('unit fold adds the immediately previous activation everywhere', () => {
    const model = new FoldNetModel(archSpec(6, 'bottleneck', 1), 1);
    const x = tf.zeros([2, 32, 32, 3]) as tf.Tensor4D;
    model.forward(x, false).dispose();
    x.dispose();
    for (const read of model.lastForwardReads) {
      expect(read.adds).toBe(read.block - 1);
      expect(read.offset).toBe(1);
    }
    model.dispose();
  });

  it('buffer reads match the fold offsets for depth 3 (blocks 1..8)', () => {
    const model = new FoldNetModel(archSpec(8, 'bottleneck', 3), 1);
    const x = tf.zeros([2, 32, 32, 3]) as tf.Tensor4D;
    model.forward(x, false).dispose();
    x.dispose();
    const expected = skipOffsets(8, 3); // [1, 1, 2, 4, 2, 4, 2, 4]
    expect(expected).toEqual([1, 1, 2, 4, 2, 4, 2, 4]);
    const stageOne = model.lastForwardReads.filter((r) => r.stage === 0);
    expect(stageOne.map((r) => r.offset)).toEqual(expected);
    expect(stageOne.map((r) => r.adds)).toEqual(expected.map((off, j) => j + 1 - off));
    model.dispose();
  });

  it('passes the wiring audit against an independently parsed spec', () => {
    const model = new FoldNetModel(archSpec(8, 'xception', 4), 1);
    const x = tf.zeros([1, 32, 32, 3]) as tf.Tensor4D;
    model.forward(x, false).dispose();
    x.dispose();
    const audit = auditWiring(model, archSpec(8, 'xception', 4));
    expect(audit.ok).toBe(true);
    expect(audit.blocksChecked).toBe(32);
    model.dispose();
  });

  it('audit flags a model wired with a different fold depth', () => {
    const model = new FoldNetModel(archSpec(8, 'bottleneck', 3), 1);
    const x = tf.zeros([1, 32, 32, 3]) as tf.Tensor4D;
    model.forward(x, false).dispose();
    x.dispose();
    const audit = auditWiring(model, archSpec(8, 'bottleneck', 2));
    expect(audit.ok).toBe(false);
    expect(audit.mismatches.length).toBeGreaterThan(0);
    model.dispose();
  });

  it('parameter count does not depend on the fold depth', () => {
    const counts = [1, 3, 5].map((t) => {
      const model = new FoldNetModel(archSpec(8, 'bottleneck', t), 1);
      const count = model.parameterCount();
      model.dispose();
      return count;
    });
    expect(new Set(counts).size).toBe(1);
  });

  it('same spec and seed build to identical logits', () => {
    const x = tf.randomNormal([2, 32, 32, 3], 0, 1, 'float32', 42) as tf.Tensor4D;
    const runs: Float32Array[] = [];
    for (let i = 0; i < 2; i++) {
      const model = new FoldNetModel(archSpec(4, 'bottleneck', 3), 123);
      const logits = model.forward(x, false);
      runs.push(logits.dataSync() as Float32Array);
      logits.dispose();
      model.dispose();
    }
    x.dispose();
    expect(Array.from(runs[0])).toEqual(Array.from(runs[1]));
  });

  it('different fold depths change the function, not the parameter count', () => {
    const x = tf.randomNormal([2, 32, 32, 3], 0, 1, 'float32', 7) as tf.Tensor4D;
    const outputs: Float32Array[] = [];
    const counts: number[] = [];
    for (const t of [1, 3]) {
      const model = new FoldNetModel(archSpec(6, 'bottleneck', t), 9);
      const logits = model.forward(x, false);
      outputs.push(logits.dataSync() as Float32Array);
      counts.push(model.parameterCount());
      logits.dispose();
      model.dispose();
    }
    x.dispose();
    expect(counts[0]).toBe(counts[1]);
    expect(Array.from(outputs[0])).not.toEqual(Array.from(outputs[1]));
  });
});
