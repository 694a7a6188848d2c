/** Small deterministic PRNG so runs are reproducible across backends. */

export type Rng = () => number;

/** mulberry32: fast 32-bit generator, uniform in [0, 1). */
export function mulberry32(seed: number): Rng {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

/** Standard normal via Box-Muller. */
export function gaussian(rng: Rng): number {
  let u = 0;
  while (u === 0) u = rng();
  const v = rng();
  return Math.sqrt(-2.0 * Math.log(u)) * Math.cos(2.0 * Math.PI * v);
}

export function fillGaussian(out: Float32Array, rng: Rng, std: number): void {
  for (let i = 0; i < out.length; i++) out[i] = gaussian(rng) * std;
}

/** Integer in [0, bound). */
export function randInt(rng: Rng, bound: number): number {
  return Math.floor(rng() * bound);
}

/** Derive a stream seed from a base seed and a label, FNV-1a style. */
export function deriveSeed(base: number, label: string): number {
  let h = (0x811c9dc5 ^ base) >>> 0;
  for (let i = 0; i < label.length; i++) {
    h = Math.imul(h ^ label.charCodeAt(i), 0x01000193) >>> 0;
  }
  return h >>> 0;
}
