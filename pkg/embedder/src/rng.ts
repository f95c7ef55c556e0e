/**
 * Deterministic hashing and PRNG primitives.
 *
 * All "pretrained" weights in this package are functions of these
 * generators, so an encoder is fully specified by its model identifier
 * string. Everything is 32-bit integer math on top of Math.imul; results
 * are identical on every platform.
 */

export function fnv1a(text: string): number {
  let hash = 0x811c9dc5;
  for (let i = 0; i < text.length; i++) {
    hash ^= text.charCodeAt(i);
    hash = Math.imul(hash, 0x01000193);
  }
  return hash >>> 0;
}

/** splitmix32: small, fast, and well distributed for seeding streams. */
export class Rng {
  private state: number;

  constructor(seed: number) {
    this.state = seed >>> 0;
  }

  /** uniform in [0, 1) */
  next(): number {
    this.state = (this.state + 0x9e3779b9) >>> 0;
    let z = this.state;
    z ^= z >>> 16;
    z = Math.imul(z, 0x21f0aaad);
    z ^= z >>> 15;
    z = Math.imul(z, 0x735a2d97);
    z ^= z >>> 15;
    return (z >>> 0) / 4294967296;
  }

  /** uniform in [-1, 1) */
  symmetric(): number {
    return 2 * this.next() - 1;
  }

  fill(n: number): number[] {
    const out = new Array<number>(n);
    for (let i = 0; i < n; i++) out[i] = this.symmetric();
    return out;
  }
}
