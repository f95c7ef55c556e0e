#!/usr/bin/env node
/** embed: extract contextual token vectors for a corpus or a factor catalog. */

import yargs from "yargs";
import { hideBin } from "yargs/helpers";

import { defaultConfig, DEFAULT_MODEL } from "./encoder.js";
import { embedCorpus, embedFactors, exitCode } from "./embed.js";

async function main(): Promise<number> {
  const argv = await yargs(hideBin(process.argv))
    .usage("embed --corpus <path> --out <path> [--model <id>]\n" +
           "embed --factors <catalog> --out <path> [--model <id>]")
    .option("corpus", { type: "string", describe: "normalized corpus artifact (JSON lines)" })
    .option("factors", { type: "string", describe: "factor catalog (tab-separated)" })
    .option("out", { type: "string", demandOption: true, describe: "token-vector output path" })
    .option("model", { type: "string", default: DEFAULT_MODEL, describe: "model identifier" })
    .option("layer", { type: "string", default: "last", describe: "'last' or a 0-based layer index" })
    .option("pooling", { type: "string", choices: ["mean", "first"] as const, default: "mean" })
    .option("batch-size", { type: "number", default: 32 })
    .strict()
    .help()
    .parse();

  const hasCorpus = typeof argv.corpus === "string";
  const hasFactors = typeof argv.factors === "string";
  if (hasCorpus === hasFactors) {
    process.stderr.write("error: exactly one of --corpus or --factors is required\n");
    return 1;
  }
  const config = {
    ...defaultConfig(),
    model: argv.model,
    layer: argv.layer === "last" ? ("last" as const) : parseInt(argv.layer, 10),
    pooling: argv.pooling as "mean" | "first",
    batchSize: argv["batch-size"],
  };
  try {
    const result = hasCorpus
      ? embedCorpus(argv.corpus as string, argv.out, config)
      : embedFactors(argv.factors as string, argv.out, config);
    process.stderr.write(
      `embedded ${result.nProcessed - result.nFailed}/${result.nProcessed} units -> ${result.outPath}` +
        (result.nFailed > 0 ? ` (${result.nFailed} failed, see sidecar)` : "") + "\n",
    );
    return exitCode(result);
  } catch (error) {
    process.stderr.write(`error: ${(error as Error).message}\n`);
    return 1;
  }
}

main().then((code) => process.exit(code));
