export { ArchSpec, StageSpec, BlockKind, parseArchSpec, loadArchSpec } from './archSpec.js';
export { initBackend } from './backend.js';
export { FoldNetModel, BlockWiring } from './model.js';
export { OneCycleAdam, OneCycleConfig, DEFAULT_CYCLE, scheduleAt } from './optimizer.js';
export {
  Dataset,
  IMG,
  augmentedBatch,
  channelStats,
  cifar10Dataset,
  cifar100Dataset,
  normalizedBatch,
  syntheticDataset,
} from './data.js';
export { gradientProbe, auditWiring, GradientProbeResult, AuditResult } from './probes.js';
export {
  TrainConfig,
  TrainReport,
  RunReport,
  DEFAULT_CONFIG,
  train,
  trainSingleRun,
  loadDataset,
  evaluateAccuracy,
  median,
  reportToJson,
  validateConfig,
} from './train.js';
export { mulberry32, deriveSeed } from './rng.js';
