/**
 * Functional network builder for arch specs.
 *
 * Weights are explicit tf.Variables (no layers API) so the skip wiring stays
 * under our control: each stage keeps a sliding window of block activations
 * and block l adds the stored activation of block l - offsets[l-1], where
 * index 0 is the stage input. Blocks are pre-activation (bn-relu inside the
 * transform), so the buffered tensors are exactly the raw sums the wiring
 * rule defines.
 */

import * as tf from '@tensorflow/tfjs';

import { ArchSpec } from './archSpec.js';
import {
  conv1x1,
  conv3x3,
  maxPool2x2,
  normalizeScaleShift,
  separable3x3,
  softmaxCrossEntropy,
} from './fastconv.js';
import { deriveSeed, fillGaussian, mulberry32 } from './rng.js';

const BN_MOMENTUM = 0.9;
const BN_EPSILON = 1e-3;

interface BnVars {
  gamma: tf.Variable;
  beta: tf.Variable;
  movingMean: tf.Variable;
  movingVar: tf.Variable;
}

export interface BlockWiring {
  stage: number;
  block: number;
  /** stage-local activation index the block adds (block - offset) */
  adds: number;
  offset: number;
}

export class FoldNetModel {
  readonly spec: ArchSpec;
  readonly seed: number;
  private readonly vars = new Map<string, tf.Variable>();
  private readonly bns = new Map<string, BnVars>();
  /** runtime record of buffer reads from the most recent forward pass */
  lastForwardReads: BlockWiring[] = [];

  constructor(spec: ArchSpec, seed?: number) {
    this.spec = spec;
    this.seed = seed ?? spec.seed ?? 0;
    this.build();
  }

  private weight(name: string, shape: number[], std: number): tf.Variable {
    const data = new Float32Array(shape.reduce((a, b) => a * b, 1));
    fillGaussian(data, mulberry32(deriveSeed(this.seed, name)), std);
    const v = tf.variable(tf.tensor(data, shape), true, name);
    this.vars.set(name, v);
    return v;
  }

  private constant(name: string, shape: number[], value: number, trainable: boolean): tf.Variable {
    const size = shape.reduce((a, b) => a * b, 1);
    const v = tf.variable(
      tf.tensor(new Float32Array(size).fill(value), shape),
      trainable,
      name,
    );
    this.vars.set(name, v);
    return v;
  }

  private bn(name: string, channels: number): BnVars {
    const group = {
      gamma: this.constant(`${name}/gamma`, [channels], 1, true),
      beta: this.constant(`${name}/beta`, [channels], 0, true),
      movingMean: this.constant(`${name}/mmean`, [channels], 0, false),
      movingVar: this.constant(`${name}/mvar`, [channels], 1, false),
    };
    this.bns.set(name, group);
    return group;
  }

  private conv(name: string, kh: number, kw: number, inC: number, outC: number): tf.Variable {
    const fanIn = kh * kw * inC;
    return this.weight(name, [kh, kw, inC, outC], Math.sqrt(2 / fanIn));
  }

  private build(): void {
    const { stages, blockKind, input, classes } = this.spec;
    this.conv('stem/conv', 3, 3, input[2], stages[0].channels);
    this.bn('stem/bn', stages[0].channels);
    stages.forEach((stage, s) => {
      const c = stage.channels;
      for (let b = 1; b <= stage.blocks; b++) {
        const p = `s${s}b${b}`;
        if (blockKind === 'bottleneck') {
          const mid = Math.max(1, Math.floor(c / 4));
          this.bn(`${p}/bn1`, c);
          this.conv(`${p}/conv1`, 1, 1, c, mid);
          this.bn(`${p}/bn2`, mid);
          this.conv(`${p}/conv2`, 3, 3, mid, mid);
          this.bn(`${p}/bn3`, mid);
          this.conv(`${p}/conv3`, 1, 1, mid, c);
        } else {
          for (const half of [1, 2]) {
            this.bn(`${p}/bn${half}`, c);
            this.weight(`${p}/dw${half}`, [3, 3, c, 1], Math.sqrt(2 / (3 * 3)));
            this.conv(`${p}/pw${half}`, 1, 1, c, c);
          }
        }
      }
    });
    const lastC = stages[stages.length - 1].channels;
    this.weight('head/fc', [lastC, classes], Math.sqrt(1 / lastC));
    this.constant('head/bias', [classes], 0, true);
  }

  private applyBn(name: string, x: tf.Tensor4D, training: boolean): tf.Tensor4D {
    const bn = this.bns.get(name)!;
    if (training) {
      const mean = tf.mean(x, [0, 1, 2]);
      const variance = tf.mean(tf.square(tf.sub(x, mean)), [0, 1, 2]);
      // moving statistics update happens outside the differentiable graph
      tf.tidy(() => {
        bn.movingMean.assign(
          bn.movingMean.mul(BN_MOMENTUM).add(mean.mul(1 - BN_MOMENTUM)),
        );
        bn.movingVar.assign(
          bn.movingVar.mul(BN_MOMENTUM).add(variance.mul(1 - BN_MOMENTUM)),
        );
      });
      return normalizeScaleShift(x, mean, variance, bn.gamma, bn.beta, BN_EPSILON);
    }
    return normalizeScaleShift(x, bn.movingMean, bn.movingVar, bn.gamma, bn.beta, BN_EPSILON);
  }

  private bottleneck(p: string, x: tf.Tensor4D, training: boolean): tf.Tensor4D {
    let h = tf.relu(this.applyBn(`${p}/bn1`, x, training)) as tf.Tensor4D;
    h = conv1x1(h, this.vars.get(`${p}/conv1`)!);
    h = tf.relu(this.applyBn(`${p}/bn2`, h, training)) as tf.Tensor4D;
    h = conv3x3(h, this.vars.get(`${p}/conv2`)!);
    h = tf.relu(this.applyBn(`${p}/bn3`, h, training)) as tf.Tensor4D;
    return conv1x1(h, this.vars.get(`${p}/conv3`)!);
  }

  private xception(p: string, x: tf.Tensor4D, training: boolean): tf.Tensor4D {
    let h = x;
    for (const half of [1, 2]) {
      h = tf.relu(this.applyBn(`${p}/bn${half}`, h, training)) as tf.Tensor4D;
      h = separable3x3(
        h,
        this.vars.get(`${p}/dw${half}`)!,
        this.vars.get(`${p}/pw${half}`)!,
      );
    }
    return h;
  }

  /** Forward pass to logits. Records buffer reads for the wiring audit. */
  forward(images: tf.Tensor4D, training = false): tf.Tensor2D {
    const reads: BlockWiring[] = [];
    const out = tf.tidy(() => {
      let x = conv3x3(images, this.vars.get('stem/conv')!);
      x = this.applyBn('stem/bn', x, training);
      this.spec.stages.forEach((stage, s) => {
        if (stage.downsample) {
          x = maxPool2x2(x as tf.Tensor4D);
        }
        const maxOffset = Math.max(...stage.offsets);
        const window = new Map<number, tf.Tensor4D>();
        window.set(0, x as tf.Tensor4D);
        for (let b = 1; b <= stage.blocks; b++) {
          const offset = stage.offsets[b - 1];
          const addIndex = b - offset;
          const skip = window.get(addIndex);
          if (!skip) {
            throw new Error(
              `stage ${s + 1} block ${b}: activation ${addIndex} already evicted ` +
                `(window ${maxOffset + 1})`,
            );
          }
          reads.push({ stage: s, block: b, adds: addIndex, offset });
          const f =
            this.spec.blockKind === 'bottleneck'
              ? this.bottleneck(`s${s}b${b}`, window.get(b - 1)!, training)
              : this.xception(`s${s}b${b}`, window.get(b - 1)!, training);
          const sum = tf.add(f, skip) as tf.Tensor4D;
          window.set(b, sum);
          window.delete(b - maxOffset); // ring-buffer eviction: window keeps maxOffset slots
          x = sum;
        }
      });
      const pooled = tf.mean(x as tf.Tensor4D, [1, 2]) as tf.Tensor2D;
      return tf
        .matMul(pooled, this.vars.get('head/fc')! as tf.Tensor2D)
        .add(this.vars.get('head/bias')!) as tf.Tensor2D;
    });
    this.lastForwardReads = reads;
    return out;
  }

  loss(images: tf.Tensor4D, labels: tf.Tensor1D, training = true): tf.Scalar {
    const logits = this.forward(images, training);
    return softmaxCrossEntropy(logits, labels);
  }

  /** Static wiring derived from the spec: what each block should add. */
  wiring(): BlockWiring[] {
    const out: BlockWiring[] = [];
    this.spec.stages.forEach((stage, s) => {
      stage.offsets.forEach((offset, j) => {
        out.push({ stage: s, block: j + 1, adds: j + 1 - offset, offset });
      });
    });
    return out;
  }

  trainableVariables(): tf.Variable[] {
    return [...this.vars.values()].filter((v) => v.trainable);
  }

  /** Trainable parameter count; wiring-independent for a fixed layout. */
  parameterCount(): number {
    return this.trainableVariables().reduce((acc, v) => acc + v.size, 0);
  }

  variableNames(): string[] {
    return [...this.vars.keys()];
  }

  dispose(): void {
    for (const v of this.vars.values()) v.dispose();
    this.vars.clear();
    this.bns.clear();
  }
}
