/**
 * Convolutions composed from pad/slice/matmul primitives.
 *
 * The stock CPU backend implements Conv2DBackpropFilter (and friends) as
 * naive loops that run ~50x slower than the forward pass, which makes
 * desk-scale training unusable. Routing the same arithmetic through matMul
 * (im2col) keeps every gradient on fast kernels. Weight shapes match the
 * native ops exactly: [kh, kw, inC, outC] for conv, [kh, kw, C, 1] for
 * depthwise.
 */

import * as tf from '@tensorflow/tfjs';

/** The nine 3x3-neighborhood shifts of x under zero padding, NHWC. */
function shifts3x3(x: tf.Tensor4D): tf.Tensor4D[] {
  const [b, h, w, c] = x.shape;
  const padded = tf.pad(x, [
    [0, 0],
    [1, 1],
    [1, 1],
    [0, 0],
  ]) as tf.Tensor4D;
  const out: tf.Tensor4D[] = [];
  for (let ky = 0; ky < 3; ky++) {
    for (let kx = 0; kx < 3; kx++) {
      out.push(tf.slice(padded, [0, ky, kx, 0], [b, h, w, c]) as tf.Tensor4D);
    }
  }
  return out;
}

/** 1x1 convolution as a single matmul. Kernel shape [1, 1, inC, outC]. */
export function conv1x1(x: tf.Tensor4D, kernel: tf.Tensor): tf.Tensor4D {
  const [b, h, w, c] = x.shape;
  const outC = kernel.shape[3] as number;
  const flat = tf.reshape(x, [b * h * w, c]);
  const result = tf.matMul(flat, tf.reshape(kernel, [c, outC]));
  return tf.reshape(result, [b, h, w, outC]) as tf.Tensor4D;
}

/** 3x3 same-padding convolution as im2col + one matmul. Kernel [3, 3, inC, outC]. */
export function conv3x3(x: tf.Tensor4D, kernel: tf.Tensor): tf.Tensor4D {
  const [b, h, w, c] = x.shape;
  const outC = kernel.shape[3] as number;
  const columns = tf.concat(shifts3x3(x), 3); // [b, h, w, 9c], (ky, kx, c) order
  const flat = tf.reshape(columns, [b * h * w, 9 * c]);
  const result = tf.matMul(flat, tf.reshape(kernel, [9 * c, outC]));
  return tf.reshape(result, [b, h, w, outC]) as tf.Tensor4D;
}

/** Depthwise 3x3 same-padding convolution as shifted broadcast multiplies. */
export function depthwise3x3(x: tf.Tensor4D, kernel: tf.Tensor): tf.Tensor4D {
  const c = x.shape[3];
  const taps = shifts3x3(x);
  const weights = tf.reshape(kernel, [9, c]);
  let acc: tf.Tensor4D | null = null;
  for (let k = 0; k < 9; k++) {
    const term = tf.mul(taps[k], tf.reshape(tf.slice(weights, [k, 0], [1, c]), [c]));
    acc = acc === null ? (term as tf.Tensor4D) : (tf.add(acc, term) as tf.Tensor4D);
  }
  return acc!;
}

/** Depthwise-separable 3x3: depthwise then pointwise. */
export function separable3x3(
  x: tf.Tensor4D,
  depthwiseKernel: tf.Tensor,
  pointwiseKernel: tf.Tensor,
): tf.Tensor4D {
  return conv1x1(depthwise3x3(x, depthwiseKernel), pointwiseKernel);
}

/** 2x2 stride-2 max pooling via reshape + max (even spatial dims only). */
export function maxPool2x2(x: tf.Tensor4D): tf.Tensor4D {
  const [b, h, w, c] = x.shape;
  const grouped = tf.reshape(x, [b, h / 2, 2, w / 2, 2, c]);
  return tf.max(grouped, [2, 4]) as tf.Tensor4D;
}

/**
 * Batch normalization written out in primitives: (x - mean) / sqrt(var + eps)
 * scaled and shifted.
 */
export function normalizeScaleShift(
  x: tf.Tensor4D,
  mean: tf.Tensor,
  variance: tf.Tensor,
  gamma: tf.Tensor,
  beta: tf.Tensor,
  epsilon: number,
): tf.Tensor4D {
  const inv = tf.rsqrt(tf.add(variance, epsilon));
  return tf.add(tf.mul(tf.sub(x, mean), tf.mul(inv, gamma)), beta) as tf.Tensor4D;
}

/** Mean softmax cross-entropy from logits, numerically stabilized. */
export function softmaxCrossEntropy(logits: tf.Tensor2D, labels: tf.Tensor1D): tf.Scalar {
  const numClasses = logits.shape[1];
  const shifted = tf.sub(logits, tf.max(logits, 1, true));
  const logSumExp = tf.log(tf.sum(tf.exp(shifted), 1));
  const picked = tf.sum(tf.mul(shifted, tf.oneHot(labels, numClasses)), 1);
  return tf.mean(tf.sub(logSumExp, picked)) as tf.Scalar;
}
