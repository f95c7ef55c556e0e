/**
 * Tokenizer mirror of the pipeline's corpus rules: lowercase, then take
 * maximal runs of ascii alphanumerics. Must stay byte-compatible with the
 * Python side; parity is pinned by test/fixtures/tokenize.json.
 */
const TOKEN_RUN = /[a-z0-9]+/g;

export function tokenize(text: string): string[] {
  return text.toLowerCase().match(TOKEN_RUN) ?? [];
}
