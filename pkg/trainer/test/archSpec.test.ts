import { describe, expect, it } from 'vitest';

import { parseArchSpec } from '../src/archSpec.js';
import { archJson } from './helpers.js';

describe('parseArchSpec', () => {
  it('parses a well-formed document', () => {
    const spec = parseArchSpec(archJson(24, 'xception', 3));
    expect(spec.stages).toHaveLength(4);
    expect(spec.stages[0].blocks).toBe(24);
    expect(spec.stages[0].offsets.slice(0, 6)).toEqual([1, 1, 2, 4, 2, 4]);
    expect(spec.blockKind).toBe('xception');
    expect(spec.foldDepth).toBe(3);
    expect(spec.classes).toBe(10);
    expect(spec.seed).toBeNull();
  });

  it('keeps the seed when present', () => {
    expect(parseArchSpec(archJson(4, 'bottleneck', 2, 10, 77)).seed).toBe(77);
  });

  it('rejects unknown version tags', () => {
    const doc = JSON.parse(archJson(4, 'bottleneck', 2));
    doc.format = 'foldnet-arch/9';
    expect(() => parseArchSpec(JSON.stringify(doc))).toThrow(/version tag/);
  });

  it('rejects unknown fields', () => {
    const doc = JSON.parse(archJson(4, 'bottleneck', 2));
    doc.width_multiplier = 2;
    expect(() => parseArchSpec(JSON.stringify(doc))).toThrow(/unknown field/);
  });

  it('rejects offset counts that disagree with the block count', () => {
    const doc = JSON.parse(archJson(4, 'bottleneck', 2));
    doc.stages[1].offsets = [1, 2];
    expect(() => parseArchSpec(JSON.stringify(doc))).toThrow(/stages\[1\]\.offsets/);
  });

  it('rejects offsets that reach before the stage input', () => {
    const doc = JSON.parse(archJson(4, 'bottleneck', 2));
    doc.stages[2].offsets = [2, 2, 2, 2];
    expect(() => parseArchSpec(JSON.stringify(doc))).toThrow(/reaches before/);
  });

  it('rejects downsampling in stage one', () => {
    const doc = JSON.parse(archJson(4, 'bottleneck', 2));
    doc.stages[0].downsample = true;
    expect(() => parseArchSpec(JSON.stringify(doc))).toThrow(/stage 1/);
  });

  it('rejects malformed JSON', () => {
    expect(() => parseArchSpec('{oops')).toThrow(/not valid JSON/);
  });
});
