#!/usr/bin/env node
/**
 * foldnet-train: consume a foldnet-arch/1 spec and train or probe it.
 *
 *   foldnet-train train --spec arch.json --dataset synthetic --out report.json
 *   foldnet-train probe --spec arch.json --batch 8
 */

import { writeFileSync } from 'node:fs';

import * as tf from '@tensorflow/tfjs';

import { loadArchSpec } from './archSpec.js';
import { initBackend } from './backend.js';
import { IMG, channelStats, normalizedBatch } from './data.js';
import { FoldNetModel } from './model.js';
import { auditWiring, gradientProbe } from './probes.js';
import { DEFAULT_CONFIG, TrainConfig, loadDataset, reportToJson, train } from './train.js';

function parseFlags(argv: string[]): Map<string, string> {
  const flags = new Map<string, string>();
  for (let i = 0; i < argv.length; i += 2) {
    const key = argv[i];
    if (!key.startsWith('--') || i + 1 >= argv.length) {
      throw new Error(`expected --flag value pairs, got ${argv.slice(i).join(' ')}`);
    }
    flags.set(key.slice(2), argv[i + 1]);
  }
  return flags;
}

function numberFlag(flags: Map<string, string>, name: string, fallback: number): number {
  const raw = flags.get(name);
  if (raw === undefined) return fallback;
  const value = Number(raw);
  if (!Number.isFinite(value)) throw new Error(`--${name} must be a number, got ${raw}`);
  return value;
}

function buildConfig(flags: Map<string, string>): TrainConfig {
  const specPath = flags.get('spec');
  if (!specPath) throw new Error('--spec is required');
  const dataset = (flags.get('dataset') ?? DEFAULT_CONFIG.dataset) as TrainConfig['dataset'];
  if (!['cifar10', 'cifar100', 'synthetic'].includes(dataset)) {
    throw new Error(`--dataset must be cifar10, cifar100 or synthetic, got ${dataset}`);
  }
  return {
    specPath,
    dataset,
    epochs: numberFlag(flags, 'epochs', DEFAULT_CONFIG.epochs),
    runs: numberFlag(flags, 'runs', DEFAULT_CONFIG.runs),
    batchSize: numberFlag(flags, 'batch-size', DEFAULT_CONFIG.batchSize),
    learningRate: numberFlag(flags, 'lr', DEFAULT_CONFIG.learningRate),
    weightDecay: numberFlag(flags, 'weight-decay', DEFAULT_CONFIG.weightDecay),
    momentumRange: DEFAULT_CONFIG.momentumRange,
    subsetFraction: numberFlag(flags, 'subset-fraction', DEFAULT_CONFIG.subsetFraction),
    seed: numberFlag(flags, 'seed', DEFAULT_CONFIG.seed),
    dataDir: flags.get('data'),
    syntheticTrain: numberFlag(flags, 'synthetic-train', DEFAULT_CONFIG.syntheticTrain),
    syntheticTest: numberFlag(flags, 'synthetic-test', DEFAULT_CONFIG.syntheticTest),
  };
}

async function cmdTrain(flags: Map<string, string>): Promise<number> {
  const config = buildConfig(flags);
  const report = await train(config);
  const text = reportToJson(report);
  const out = flags.get('out');
  if (out) {
    writeFileSync(out, text);
    console.log(`wrote ${out}`);
  } else {
    console.log(text);
  }
  console.log(`median accuracy: ${report.medianAccuracy.toFixed(4)}`);
  return 0;
}

async function cmdProbe(flags: Map<string, string>): Promise<number> {
  const specPath = flags.get('spec');
  if (!specPath) throw new Error('--spec is required');
  await initBackend();
  const spec = loadArchSpec(specPath);
  const seed = numberFlag(flags, 'seed', spec.seed ?? 7);
  const batch = numberFlag(flags, 'batch', 4);
  const model = new FoldNetModel(spec, seed);

  const config: TrainConfig = { ...DEFAULT_CONFIG, specPath, dataset: 'synthetic', seed };
  const dataset = loadDataset(config, spec.classes);
  const stats = channelStats(dataset.trainImages);
  const sample = normalizedBatch(dataset.trainImages, dataset.trainLabels, 0, batch, stats);
  const x = tf.tensor4d(sample.images, [batch, IMG.h, IMG.w, IMG.c]);
  const y = tf.tensor1d(sample.labels, 'int32');

  const probe = gradientProbe(model, x, y);
  const logits = model.forward(x, false);
  const audit = auditWiring(model, loadArchSpec(specPath));
  const result = {
    parameter_count: model.parameterCount(),
    output_shape: logits.shape,
    wiring_audit_ok: audit.ok,
    blocks_checked: audit.blocksChecked,
    all_gradients_finite: probe.allFinite,
    first_block_gradient_norm: probe.firstBlockNorm,
    gradient_norms: probe.blocks,
  };
  console.log(JSON.stringify(result, null, 2));
  tf.dispose([x, y, logits]);
  model.dispose();
  return probe.allFinite && probe.firstBlockNorm > 0 && audit.ok ? 0 : 1;
}

async function main(): Promise<number> {
  const [command, ...rest] = process.argv.slice(2);
  try {
    const flags = parseFlags(rest);
    if (command === 'train') return await cmdTrain(flags);
    if (command === 'probe') return await cmdProbe(flags);
    console.error('usage: foldnet-train <train|probe> --spec arch.json [flags]');
    return 1;
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    return 1;
  }
}

main().then((code) => {
  process.exitCode = code;
});
