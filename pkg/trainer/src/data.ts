/**
 * Datasets and augmentation.
 *
 * Images are flat Float32Array in HWC order, values in [0, 1] before
 * normalization. The synthetic set is class-coded (per-class base color plus
 * a class-positioned bright patch plus noise) so a small network separates it
 * well above chance within a few epochs. CIFAR batches are read from their
 * binary form under FOLDNET_DATA (or --data).
 */

import { existsSync, readFileSync } from 'node:fs';
import { join } from 'node:path';

import { Rng, mulberry32, randInt } from './rng.js';

export const IMG = { h: 32, w: 32, c: 3 } as const;
const PIXELS = IMG.h * IMG.w * IMG.c;

export interface Dataset {
  name: string;
  numClasses: number;
  trainImages: Float32Array;
  trainLabels: Int32Array;
  testImages: Float32Array;
  testLabels: Int32Array;
}

export interface ChannelStats {
  mean: [number, number, number];
  std: [number, number, number];
}

export function syntheticDataset(
  numClasses: number,
  trainCount: number,
  testCount: number,
  seed: number,
): Dataset {
  const rng = mulberry32(seed);
  const palette: number[][] = [];
  for (let k = 0; k < numClasses; k++) {
    palette.push([rng(), rng(), rng()]);
  }

  const make = (count: number, rngLocal: Rng) => {
    const images = new Float32Array(count * PIXELS);
    const labels = new Int32Array(count);
    for (let i = 0; i < count; i++) {
      const label = randInt(rngLocal, numClasses);
      labels[i] = label;
      const base = palette[label];
      const py = 4 + ((label * 7) % 20);
      const px = 4 + ((label * 13) % 20);
      const offset = i * PIXELS;
      for (let y = 0; y < IMG.h; y++) {
        for (let x = 0; x < IMG.w; x++) {
          const inPatch = y >= py && y < py + 8 && x >= px && x < px + 8;
          for (let ch = 0; ch < IMG.c; ch++) {
            let value = 0.15 + 0.7 * base[ch];
            if (inPatch) value = ch === label % 3 ? 0.95 : 0.05;
            value += (rngLocal() - 0.5) * 0.15;
            images[offset + (y * IMG.w + x) * IMG.c + ch] = Math.min(1, Math.max(0, value));
          }
        }
      }
    }
    return { images, labels };
  };

  const train = make(trainCount, mulberry32(seed + 1));
  const test = make(testCount, mulberry32(seed + 2));
  return {
    name: 'synthetic',
    numClasses,
    trainImages: train.images,
    trainLabels: train.labels,
    testImages: test.images,
    testLabels: test.labels,
  };
}

export function datasetDir(explicit?: string): string | undefined {
  return explicit ?? process.env.FOLDNET_DATA ?? undefined;
}

function missingData(name: string, dir: string | undefined, hint: string): never {
  throw new Error(
    `${name} not found under ${dir ?? '<unset>'} (set FOLDNET_DATA or pass --data). ` +
      `Download and extract the binary release: ${hint}`,
  );
}

function decodeCifarRecords(
  buffers: Buffer[],
  labelBytes: number,
  labelIndex: number,
): { images: Float32Array; labels: Int32Array } {
  const record = labelBytes + PIXELS;
  let total = 0;
  for (const buf of buffers) {
    if (buf.length % record !== 0) {
      throw new Error(`corrupt batch file: ${buf.length} bytes is not a multiple of ${record}`);
    }
    total += buf.length / record;
  }
  const images = new Float32Array(total * PIXELS);
  const labels = new Int32Array(total);
  let n = 0;
  for (const buf of buffers) {
    for (let r = 0; r + record <= buf.length; r += record, n++) {
      labels[n] = buf[r + labelIndex];
      // stored channel-major (all R, all G, all B); we keep HWC
      for (let ch = 0; ch < 3; ch++) {
        const plane = r + labelBytes + ch * 1024;
        for (let p = 0; p < 1024; p++) {
          images[n * PIXELS + p * 3 + ch] = buf[plane + p] / 255;
        }
      }
    }
  }
  return { images, labels };
}

function sliceFraction(
  images: Float32Array,
  labels: Int32Array,
  fraction: number,
): { images: Float32Array; labels: Int32Array } {
  if (fraction >= 1) return { images, labels };
  const keep = Math.max(1, Math.floor(labels.length * fraction));
  return {
    images: images.slice(0, keep * PIXELS),
    labels: labels.slice(0, keep),
  };
}

export function cifar10Dataset(dir: string | undefined, subsetFraction: number): Dataset {
  const hint = 'https://www.cs.toronto.edu/~kriz/cifar-10-binary.tar.gz';
  if (!dir) missingData('cifar10', dir, hint);
  const roots = [dir, join(dir, 'cifar-10-batches-bin')];
  const root = roots.find((r) => existsSync(join(r, 'data_batch_1.bin')));
  if (!root) missingData('cifar10', dir, hint);
  const trainBufs = [1, 2, 3, 4, 5].map((i) => readFileSync(join(root, `data_batch_${i}.bin`)));
  const testBuf = readFileSync(join(root, 'test_batch.bin'));
  const train = decodeCifarRecords(trainBufs, 1, 0);
  const test = decodeCifarRecords([testBuf], 1, 0);
  const cut = sliceFraction(train.images, train.labels, subsetFraction);
  const testCut = sliceFraction(test.images, test.labels, Math.min(1, subsetFraction * 2));
  return {
    name: 'cifar10',
    numClasses: 10,
    trainImages: cut.images,
    trainLabels: cut.labels,
    testImages: testCut.images,
    testLabels: testCut.labels,
  };
}

export function cifar100Dataset(dir: string | undefined, subsetFraction: number): Dataset {
  const hint = 'https://www.cs.toronto.edu/~kriz/cifar-100-binary.tar.gz';
  if (!dir) missingData('cifar100', dir, hint);
  const roots = [dir, join(dir, 'cifar-100-binary')];
  const root = roots.find((r) => existsSync(join(r, 'train.bin')));
  if (!root) missingData('cifar100', dir, hint);
  // records carry coarse then fine label; train on the fine one
  const train = decodeCifarRecords([readFileSync(join(root, 'train.bin'))], 2, 1);
  const test = decodeCifarRecords([readFileSync(join(root, 'test.bin'))], 2, 1);
  const cut = sliceFraction(train.images, train.labels, subsetFraction);
  const testCut = sliceFraction(test.images, test.labels, Math.min(1, subsetFraction * 2));
  return {
    name: 'cifar100',
    numClasses: 100,
    trainImages: cut.images,
    trainLabels: cut.labels,
    testImages: testCut.images,
    testLabels: testCut.labels,
  };
}

export function channelStats(images: Float32Array): ChannelStats {
  const sum = [0, 0, 0];
  const sumSq = [0, 0, 0];
  const perChannel = images.length / 3;
  for (let i = 0; i < images.length; i += 3) {
    for (let ch = 0; ch < 3; ch++) {
      sum[ch] += images[i + ch];
      sumSq[ch] += images[i + ch] * images[i + ch];
    }
  }
  const mean = sum.map((s) => s / perChannel) as [number, number, number];
  const std = sumSq.map((s, ch) => {
    const v = s / perChannel - mean[ch] * mean[ch];
    return Math.sqrt(Math.max(v, 1e-8));
  }) as [number, number, number];
  return { mean, std };
}

/**
 * Assemble a training batch: zero-pad 4 on each side, random 32x32 crop,
 * random horizontal flip, then channel normalization.
 */
export function augmentedBatch(
  images: Float32Array,
  labels: Int32Array,
  indices: number[],
  stats: ChannelStats,
  rng: Rng,
): { images: Float32Array; labels: Int32Array } {
  const { h, w, c } = IMG;
  const out = new Float32Array(indices.length * PIXELS);
  const outLabels = new Int32Array(indices.length);
  for (let bi = 0; bi < indices.length; bi++) {
    const src = indices[bi] * PIXELS;
    const dy = randInt(rng, 9) - 4; // crop origin in [-4, 4] of the padded frame
    const dx = randInt(rng, 9) - 4;
    const flip = rng() < 0.5;
    for (let y = 0; y < h; y++) {
      const sy = y + dy;
      for (let x = 0; x < w; x++) {
        const sx = (flip ? w - 1 - x : x) + dx;
        const dst = bi * PIXELS + (y * w + x) * c;
        if (sy < 0 || sy >= h || sx < 0 || sx >= w) {
          for (let ch = 0; ch < c; ch++) {
            out[dst + ch] = (0 - stats.mean[ch]) / stats.std[ch];
          }
        } else {
          const from = src + (sy * w + sx) * c;
          for (let ch = 0; ch < c; ch++) {
            out[dst + ch] = (images[from + ch] - stats.mean[ch]) / stats.std[ch];
          }
        }
      }
    }
    outLabels[bi] = labels[indices[bi]];
  }
  return { images: out, labels: outLabels };
}

/** Normalize without augmentation (evaluation path). */
export function normalizedBatch(
  images: Float32Array,
  labels: Int32Array,
  start: number,
  count: number,
  stats: ChannelStats,
): { images: Float32Array; labels: Int32Array } {
  const out = new Float32Array(count * PIXELS);
  for (let i = 0; i < count * PIXELS; i += 3) {
    for (let ch = 0; ch < 3; ch++) {
      out[i + ch] = (images[start * PIXELS + i + ch] - stats.mean[ch]) / stats.std[ch];
    }
  }
  return { images: out, labels: labels.slice(start, start + count) };
}
