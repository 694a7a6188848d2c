/**
 * Backend bring-up.
 *
 * WASM is the default: the model avoids the native convolution ops (whose
 * gradient kernels WASM lacks) by composing everything from matmul, slice,
 * pad and elementwise primitives, so both passes stay on fast kernels. Set
 * FOLDNET_TF_BACKEND=cpu to force the pure-JS backend.
 */

import { createRequire } from 'node:module';
import { dirname } from 'node:path';

import * as tf from '@tensorflow/tfjs';

let ready: Promise<string> | null = null;

async function activate(name: string): Promise<boolean> {
  if (name === 'wasm') {
    try {
      const wasm = await import('@tensorflow/tfjs-backend-wasm');
      const require = createRequire(import.meta.url);
      wasm.setWasmPaths(dirname(require.resolve('@tensorflow/tfjs-backend-wasm')) + '/');
    } catch {
      return false;
    }
  }
  if (!(await tf.setBackend(name))) return false;
  await tf.ready();
  return true;
}

export function initBackend(): Promise<string> {
  if (!ready) {
    ready = (async () => {
      const requested = process.env.FOLDNET_TF_BACKEND ?? 'wasm';
      if (!(await activate(requested))) {
        await activate('cpu');
      }
      return tf.getBackend();
    })();
  }
  return ready;
}
