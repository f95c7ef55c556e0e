/**
 * The token-vector interchange format.
 *
 * Layout: one "DIM <d>" header line, then per sentence a
 * "KEY <id> <index> <n_tokens>" line followed by n_tokens lines of d
 * space-separated floats at 9 significant digits. Writing, parsing, and
 * re-writing is byte-identical.
 */

export interface Block {
  id: string;
  index: number;
  vectors: number[][];
}

/** %.9g-style formatting: 9 significant digits, trailing zeros trimmed. */
export function formatNine(x: number): string {
  if (!Number.isFinite(x)) throw new Error(`cannot serialize non-finite value ${x}`);
  if (x === 0) return Object.is(x, -0) ? "-0" : "0";
  let text = x.toPrecision(9);
  if (text.includes("e")) {
    const [mantissa, exponent] = text.split("e");
    let trimmed = mantissa;
    if (trimmed.includes(".")) trimmed = trimmed.replace(/0+$/, "").replace(/\.$/, "");
    return `${trimmed}e${exponent.replace("+", "+").replace(/^(-?)(\d)$/, "$1$2")}`;
  }
  if (text.includes(".")) text = text.replace(/0+$/, "").replace(/\.$/, "");
  return text;
}

export function serializeBlocks(dim: number, blocks: Iterable<Block>): string {
  const lines: string[] = [`DIM ${dim}`];
  for (const block of blocks) {
    if (!block.id || /\s/.test(block.id)) {
      throw new Error(`block id '${block.id}' must be non-empty and whitespace-free`);
    }
    lines.push(`KEY ${block.id} ${block.index} ${block.vectors.length}`);
    for (const row of block.vectors) {
      if (row.length !== dim) {
        throw new Error(`block ${block.id}:${block.index} row has ${row.length} values, expected ${dim}`);
      }
      lines.push(row.map(formatNine).join(" "));
    }
  }
  return lines.join("\n") + "\n";
}

export function parseBlocks(text: string): { dim: number; blocks: Block[] } {
  const lines = text.split("\n");
  if (!lines[0]?.startsWith("DIM ")) throw new Error("missing DIM header");
  const dim = parseInt(lines[0].slice(4), 10);
  if (!Number.isInteger(dim) || dim < 1) throw new Error(`bad DIM header: ${lines[0]}`);
  const blocks: Block[] = [];
  let i = 1;
  while (i < lines.length) {
    const line = lines[i];
    if (!line.trim()) {
      i += 1;
      continue;
    }
    const fields = line.split(" ");
    if (fields[0] !== "KEY" || fields.length !== 4) {
      throw new Error(`line ${i + 1}: expected KEY line, got '${line}'`);
    }
    const count = parseInt(fields[3], 10);
    const vectors: number[][] = [];
    for (let j = 0; j < count; j++) {
      const raw = lines[i + 1 + j];
      if (raw === undefined) throw new Error(`line ${i + 1}: block truncated`);
      const row = raw.split(" ").map(Number);
      if (row.length !== dim || row.some((x) => Number.isNaN(x))) {
        throw new Error(`line ${i + 2 + j}: expected ${dim} floats`);
      }
      vectors.push(row);
    }
    blocks.push({ id: fields[1], index: parseInt(fields[2], 10), vectors });
    i += 1 + count;
  }
  return { dim, blocks };
}
