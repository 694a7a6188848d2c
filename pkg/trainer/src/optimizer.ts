/**
 * Adam with a one-cycle schedule, hand-rolled so the learning rate and the
 * first-moment decay can vary per step (the stock optimizer pins both).
 *
 * Schedule: the first quarter of training ramps lr from maxLr/25 up to maxLr
 * while beta1 anneals from its high value down to its low value; the rest
 * cosine-anneals lr down to maxLr/1e4 while beta1 returns to the high value.
 * Weight decay is decoupled (applied directly to the weights, not the
 * gradient).
 */

import * as tf from '@tensorflow/tfjs';

export interface OneCycleConfig {
  maxLr: number;
  totalSteps: number;
  beta1High: number; // e.g. 0.95
  beta1Low: number; // e.g. 0.85
  beta2: number;
  weightDecay: number;
  pctStart: number;
}

export const DEFAULT_CYCLE: Omit<OneCycleConfig, 'maxLr' | 'totalSteps'> = {
  beta1High: 0.95,
  beta1Low: 0.85,
  beta2: 0.99,
  weightDecay: 0.01,
  pctStart: 0.25,
};

function cosAnneal(from: number, to: number, p: number): number {
  return to + ((from - to) / 2) * (1 + Math.cos(Math.PI * p));
}

export function scheduleAt(cfg: OneCycleConfig, step: number): { lr: number; beta1: number } {
  const p = cfg.totalSteps <= 1 ? 1 : Math.min(step / (cfg.totalSteps - 1), 1);
  if (p < cfg.pctStart) {
    const q = p / cfg.pctStart;
    return {
      lr: cosAnneal(cfg.maxLr / 25, cfg.maxLr, q),
      beta1: cosAnneal(cfg.beta1High, cfg.beta1Low, q),
    };
  }
  const q = (p - cfg.pctStart) / (1 - cfg.pctStart);
  return {
    lr: cosAnneal(cfg.maxLr, cfg.maxLr / 1e4, q),
    beta1: cosAnneal(cfg.beta1Low, cfg.beta1High, q),
  };
}

export class OneCycleAdam {
  private step = 0;
  private accBeta1 = 1;
  private accBeta2 = 1;
  private readonly m = new Map<string, tf.Variable>();
  private readonly v = new Map<string, tf.Variable>();

  constructor(private readonly cfg: OneCycleConfig) {}

  currentSchedule(): { lr: number; beta1: number } {
    return scheduleAt(this.cfg, this.step);
  }

  /** One update from named gradients; returns the applied learning rate. */
  apply(variables: tf.Variable[], grads: tf.NamedTensorMap): number {
    const { lr, beta1 } = scheduleAt(this.cfg, this.step);
    this.step += 1;
    this.accBeta1 *= beta1;
    this.accBeta2 *= this.cfg.beta2;
    const mCorr = 1 - this.accBeta1;
    const vCorr = 1 - this.accBeta2;
    tf.tidy(() => {
      for (const variable of variables) {
        const g = grads[variable.name];
        if (!g) continue;
        let m = this.m.get(variable.name);
        let v = this.v.get(variable.name);
        if (!m) {
          m = tf.variable(tf.zerosLike(variable), false);
          this.m.set(variable.name, m);
        }
        if (!v) {
          v = tf.variable(tf.zerosLike(variable), false);
          this.v.set(variable.name, v);
        }
        m.assign(m.mul(beta1).add(g.mul(1 - beta1)));
        v.assign(v.mul(this.cfg.beta2).add(g.square().mul(1 - this.cfg.beta2)));
        const mHat = m.div(mCorr);
        const vHat = v.div(vCorr);
        let next = variable.sub(mHat.div(vHat.sqrt().add(1e-8)).mul(lr));
        if (this.cfg.weightDecay > 0 && !variable.name.includes('/bias')) {
          next = next.sub(variable.mul(this.cfg.weightDecay * lr));
        }
        variable.assign(next);
      }
    });
    return lr;
  }

  dispose(): void {
    for (const t of this.m.values()) t.dispose();
    for (const t of this.v.values()) t.dispose();
    this.m.clear();
    this.v.clear();
  }
}
