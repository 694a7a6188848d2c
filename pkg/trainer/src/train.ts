/**
 * Training loop: one-cycle Adam over the spec'd network, multiple seeded
 * runs, median accuracy reported (odd run counts keep the median a real run).
 */

import * as tf from '@tensorflow/tfjs';

import { ArchSpec, loadArchSpec } from './archSpec.js';
import { initBackend } from './backend.js';
import {
  ChannelStats,
  Dataset,
  IMG,
  augmentedBatch,
  channelStats,
  cifar100Dataset,
  cifar10Dataset,
  datasetDir,
  normalizedBatch,
  syntheticDataset,
} from './data.js';
import { FoldNetModel } from './model.js';
import { DEFAULT_CYCLE, OneCycleAdam } from './optimizer.js';
import { deriveSeed, mulberry32, randInt } from './rng.js';

export interface TrainConfig {
  specPath: string;
  dataset: 'cifar10' | 'cifar100' | 'synthetic';
  epochs: number;
  runs: number;
  batchSize: number;
  learningRate: number;
  weightDecay: number;
  momentumRange: [number, number];
  subsetFraction: number;
  seed: number;
  dataDir?: string;
  syntheticTrain: number;
  syntheticTest: number;
}

export const DEFAULT_CONFIG: Omit<TrainConfig, 'specPath'> = {
  dataset: 'synthetic',
  epochs: 5,
  runs: 3,
  batchSize: 128,
  learningRate: 0.02,
  weightDecay: 0.01,
  momentumRange: [0.95, 0.85],
  subsetFraction: 1.0,
  seed: 7,
  syntheticTrain: 512,
  syntheticTest: 256,
};

export interface RunReport {
  accuracy: number | null;
  steps: number;
  finalLoss: number | null;
  wallTimeS: number;
  aborted: string | null;
}

export interface TrainReport {
  runs: RunReport[];
  medianAccuracy: number;
  config: TrainConfig;
  backend: string;
  parameterCount: number;
}

export function validateConfig(config: TrainConfig): void {
  if (config.epochs < 1) throw new Error(`epochs must be >= 1, got ${config.epochs}`);
  if (config.runs < 1 || config.runs % 2 === 0) {
    throw new Error(`runs must be odd and >= 1 so the median is well-defined, got ${config.runs}`);
  }
  if (!(config.subsetFraction > 0 && config.subsetFraction <= 1)) {
    throw new Error(`subset fraction must be in (0, 1], got ${config.subsetFraction}`);
  }
  if (config.batchSize < 1) throw new Error(`batch size must be >= 1, got ${config.batchSize}`);
}

export function loadDataset(config: TrainConfig, numClasses: number): Dataset {
  switch (config.dataset) {
    case 'synthetic': {
      const train = Math.max(numClasses, Math.floor(config.syntheticTrain * config.subsetFraction));
      return syntheticDataset(numClasses, train, config.syntheticTest, config.seed);
    }
    case 'cifar10':
      return cifar10Dataset(datasetDir(config.dataDir), config.subsetFraction);
    case 'cifar100':
      return cifar100Dataset(datasetDir(config.dataDir), config.subsetFraction);
  }
}

function toTensors(batch: { images: Float32Array; labels: Int32Array }): {
  x: tf.Tensor4D;
  y: tf.Tensor1D;
} {
  const count = batch.labels.length;
  return {
    x: tf.tensor4d(batch.images, [count, IMG.h, IMG.w, IMG.c]),
    y: tf.tensor1d(batch.labels, 'int32'),
  };
}

export function evaluateAccuracy(
  model: FoldNetModel,
  dataset: Dataset,
  stats: ChannelStats,
  batchSize: number,
): number {
  const total = dataset.testLabels.length;
  let correct = 0;
  for (let start = 0; start < total; start += batchSize) {
    const count = Math.min(batchSize, total - start);
    const { x, y } = toTensors(
      normalizedBatch(dataset.testImages, dataset.testLabels, start, count, stats),
    );
    const pred = tf.tidy(() => model.forward(x, false).argMax(1));
    correct += pred.equal(y).sum().arraySync() as number;
    tf.dispose([x, y, pred]);
  }
  return correct / total;
}

export function trainSingleRun(
  spec: ArchSpec,
  dataset: Dataset,
  config: TrainConfig,
  runSeed: number,
): { report: RunReport; model: FoldNetModel } {
  const started = Date.now();
  const model = new FoldNetModel(spec, runSeed);
  const stats = channelStats(dataset.trainImages);
  const rng = mulberry32(deriveSeed(runSeed, 'batches'));
  const trainCount = dataset.trainLabels.length;
  const stepsPerEpoch = Math.max(1, Math.ceil(trainCount / config.batchSize));
  const totalSteps = config.epochs * stepsPerEpoch;
  const [beta1High, beta1Low] = config.momentumRange;
  const optimizer = new OneCycleAdam({
    ...DEFAULT_CYCLE,
    beta1High,
    beta1Low,
    weightDecay: config.weightDecay,
    maxLr: config.learningRate,
    totalSteps,
  });

  let step = 0;
  let finalLoss: number | null = null;
  let aborted: string | null = null;
  const variables = model.trainableVariables();

  outer: for (let epoch = 0; epoch < config.epochs; epoch++) {
    const order = [...Array(trainCount).keys()];
    for (let i = order.length - 1; i > 0; i--) {
      const j = randInt(rng, i + 1);
      [order[i], order[j]] = [order[j], order[i]];
    }
    for (let start = 0; start < trainCount; start += config.batchSize) {
      const indices = order.slice(start, start + config.batchSize);
      const batch = augmentedBatch(
        dataset.trainImages,
        dataset.trainLabels,
        indices,
        stats,
        rng,
      );
      const { x, y } = toTensors(batch);
      const { value, grads } = tf.variableGrads(() => model.loss(x, y, true), variables);
      const lossValue = value.arraySync() as number;
      value.dispose();
      if (!Number.isFinite(lossValue)) {
        tf.dispose(grads);
        tf.dispose([x, y]);
        aborted = `non-finite loss at step ${step}`;
        break outer;
      }
      optimizer.apply(variables, grads);
      tf.dispose(grads);
      tf.dispose([x, y]);
      finalLoss = lossValue;
      step += 1;
    }
  }

  const accuracy = aborted ? null : evaluateAccuracy(model, dataset, stats, config.batchSize);
  optimizer.dispose();
  return {
    report: {
      accuracy,
      steps: step,
      finalLoss,
      wallTimeS: (Date.now() - started) / 1000,
      aborted,
    },
    model,
  };
}

export function median(values: number[]): number {
  const sorted = [...values].sort((a, b) => a - b);
  return sorted[(sorted.length - 1) / 2];
}

export async function train(config: TrainConfig): Promise<TrainReport> {
  validateConfig(config);
  const backend = await initBackend();
  const spec = loadArchSpec(config.specPath);
  const dataset = loadDataset(config, spec.classes);
  if (dataset.numClasses !== spec.classes) {
    throw new Error(
      `spec expects ${spec.classes} classes but dataset ${dataset.name} has ${dataset.numClasses}`,
    );
  }
  const runs: RunReport[] = [];
  let parameterCount = 0;
  for (let r = 0; r < config.runs; r++) {
    const runSeed = deriveSeed(config.seed, `run-${r}`);
    const { report, model } = trainSingleRun(spec, dataset, config, runSeed);
    parameterCount = model.parameterCount();
    model.dispose();
    runs.push(report);
  }
  const finished = runs.filter((r) => r.accuracy !== null).map((r) => r.accuracy!) ;
  if (finished.length === 0) {
    throw new Error('every run aborted with non-finite loss');
  }
  const padded = [...finished];
  while (padded.length % 2 === 0) padded.push(padded[padded.length - 1]);
  return {
    runs,
    medianAccuracy: median(padded),
    config,
    backend,
    parameterCount,
  };
}

export function reportToJson(report: TrainReport): string {
  return (
    JSON.stringify(
      {
        runs: report.runs,
        median_accuracy: report.medianAccuracy,
        config: {
          spec: report.config.specPath,
          dataset: report.config.dataset,
          epochs: report.config.epochs,
          runs: report.config.runs,
          batch_size: report.config.batchSize,
          learning_rate: report.config.learningRate,
          weight_decay: report.config.weightDecay,
          momentum_range: report.config.momentumRange,
          subset_fraction: report.config.subsetFraction,
          seed: report.config.seed,
          backend: report.backend,
          parameter_count: report.parameterCount,
        },
      },
      null,
      2,
    ) + '\n'
  );
}
