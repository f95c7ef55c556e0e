/**
 * A deterministic bidirectional context encoder.
 *
 * No checkpoint is downloaded: every weight is derived from the model
 * identifier via seeded hashing, so the encoder behaves like a frozen
 * pretrained model with a name. Tokens are split into character-piece
 * "subwords"; pieces get hash-seeded unit embeddings plus sinusoidal
 * positions, pass through a stack of scaled-dot-product self-attention
 * layers (so every piece sees its whole sentence), and are pooled back to
 * exactly one vector per input token.
 */

import { Rng, fnv1a } from "./rng.js";

export interface EncoderConfig {
  model: string; // e.g. "hashctx-64-2": dim 64, 2 attention layers
  layer: "last" | number; // which layer's representations to emit
  pooling: "mean" | "first"; // subword-piece to token pooling
  batchSize: number; // throughput knob; no effect on values
}

export const DEFAULT_MODEL = "hashctx-64-2";

export function defaultConfig(): EncoderConfig {
  return { model: DEFAULT_MODEL, layer: "last", pooling: "mean", batchSize: 32 };
}

const PIECE_LENGTH = 3;
const ATTENTION_MIX = 0.5;

export function pieces(token: string): string[] {
  const out: string[] = [];
  for (let i = 0; i < token.length; i += PIECE_LENGTH) {
    out.push(token.slice(i, i + PIECE_LENGTH));
  }
  return out;
}

export class Encoder {
  readonly dim: number;
  readonly layers: number;
  private readonly seedBase: number;
  private readonly config: EncoderConfig;
  private readonly valueMatrices: number[][][]; // per layer, dim x dim
  private readonly pieceCache = new Map<string, number[]>();

  constructor(config: EncoderConfig = defaultConfig()) {
    const match = /^hashctx-(\d+)-(\d+)$/.exec(config.model);
    if (!match) {
      throw new Error(
        `unknown model identifier '${config.model}' (expected hashctx-<dim>-<layers>)`,
      );
    }
    this.dim = parseInt(match[1], 10);
    this.layers = parseInt(match[2], 10);
    if (this.dim < 2 || this.layers < 1) {
      throw new Error(`model '${config.model}' has a degenerate shape`);
    }
    if (config.layer !== "last" &&
        (!Number.isInteger(config.layer) || config.layer < 0 || config.layer >= this.layers)) {
      throw new Error(`layer ${config.layer} out of range for ${this.layers}-layer model`);
    }
    this.config = config;
    this.seedBase = fnv1a(config.model);
    this.valueMatrices = [];
    const scale = 1 / Math.sqrt(this.dim);
    for (let layer = 0; layer < this.layers; layer++) {
      const rng = new Rng(this.seedBase ^ fnv1a(`layer${layer}`));
      const matrix: number[][] = [];
      for (let row = 0; row < this.dim; row++) {
        matrix.push(rng.fill(this.dim).map((x) => x * scale));
      }
      this.valueMatrices.push(matrix);
    }
  }

  private pieceVector(piece: string): number[] {
    let cached = this.pieceCache.get(piece);
    if (!cached) {
      const rng = new Rng(this.seedBase ^ fnv1a(`piece:${piece}`));
      const v = rng.fill(this.dim);
      let norm = 0;
      for (const x of v) norm += x * x;
      norm = Math.sqrt(norm) || 1;
      cached = v.map((x) => x / norm);
      this.pieceCache.set(piece, cached);
    }
    return cached;
  }

  /**
   * Encode one sentence given as corpus tokens.
   * Returns one vector per token. Empty tokens are an alignment error.
   */
  encodeTokens(tokens: string[]): number[][] {
    const pieceList: string[] = [];
    const owner: number[] = []; // piece index -> token index
    tokens.forEach((token, t) => {
      if (token.length === 0) {
        throw new Error(`token ${t} is empty; cannot align subword pieces`);
      }
      for (const piece of pieces(token)) {
        pieceList.push(piece);
        owner.push(t);
      }
    });

    // piece embeddings + sinusoidal positions over the whole sentence
    let states = pieceList.map((piece, position) => {
      const base = this.pieceVector(piece);
      const out = base.slice();
      for (let j = 0; j < this.dim; j += 2) {
        const angle = position / Math.pow(10000, j / this.dim);
        out[j] += 0.1 * Math.sin(angle);
        if (j + 1 < this.dim) out[j + 1] += 0.1 * Math.cos(angle);
      }
      return out;
    });

    const captured: number[][][] = [];
    for (let layer = 0; layer < this.layers; layer++) {
      states = this.attentionLayer(states, this.valueMatrices[layer]);
      captured.push(states);
    }
    const selected =
      this.config.layer === "last" ? captured[captured.length - 1] : captured[this.config.layer];

    // pool pieces back to tokens
    const out: number[][] = tokens.map(() => new Array<number>(this.dim).fill(0));
    const counts = new Array<number>(tokens.length).fill(0);
    selected.forEach((state, i) => {
      const t = owner[i];
      if (this.config.pooling === "first" && counts[t] > 0) return;
      for (let j = 0; j < this.dim; j++) out[t][j] += state[j];
      counts[t] += 1;
    });
    if (this.config.pooling === "mean") {
      for (let t = 0; t < tokens.length; t++) {
        for (let j = 0; j < this.dim; j++) out[t][j] /= counts[t];
      }
    }
    return out;
  }

  private attentionLayer(states: number[][], valueMatrix: number[][]): number[][] {
    const n = states.length;
    const scale = 1 / Math.sqrt(this.dim);
    const next: number[][] = [];
    for (let i = 0; i < n; i++) {
      // softmax over scaled dot products with every piece (bidirectional)
      const scores = new Array<number>(n);
      let maxScore = -Infinity;
      for (let j = 0; j < n; j++) {
        let dot = 0;
        for (let k = 0; k < this.dim; k++) dot += states[i][k] * states[j][k];
        scores[j] = dot * scale;
        if (scores[j] > maxScore) maxScore = scores[j];
      }
      let total = 0;
      for (let j = 0; j < n; j++) {
        scores[j] = Math.exp(scores[j] - maxScore);
        total += scores[j];
      }
      const context = new Array<number>(this.dim).fill(0);
      for (let j = 0; j < n; j++) {
        const weight = scores[j] / total;
        for (let k = 0; k < this.dim; k++) context[k] += weight * states[j][k];
      }
      // residual + mixed value projection, squashed for stability
      const row = new Array<number>(this.dim);
      for (let k = 0; k < this.dim; k++) {
        let projected = 0;
        for (let m = 0; m < this.dim; m++) projected += valueMatrix[k][m] * context[m];
        row[k] = Math.tanh(states[i][k] + ATTENTION_MIX * projected);
      }
      next.push(row);
    }
    return next;
  }
}
