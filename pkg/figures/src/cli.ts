#!/usr/bin/env node
import yargs from 'yargs'
import { hideBin } from 'yargs/helpers'
import { KINDS, renderAll, renderFigure } from './figures.js'
import { discoverExperiments } from './manifest.js'

async function main(): Promise<number> {
  const argv = await yargs(hideBin(process.argv))
    .usage('$0 --input <experiment output dir> --output <image dir> [--kind <kind>]')
    .option('input', { type: 'string', demandOption: true, describe: 'directory holding experiment outputs (manifest.json + aggregate.csv)' })
    .option('output', { type: 'string', demandOption: true, describe: 'directory to write SVG/PNG figures into' })
    .option('kind', { type: 'string', choices: KINDS, describe: 'render a single figure instead of all' })
    .strict()
    .parse()

  if (argv.kind) {
    const source = discoverExperiments(argv.input).find((s) => s.kind === argv.kind)
    if (!source) {
      console.error(`error: no ${argv.kind} aggregate under ${argv.input}`)
      return 1
    }
    try {
      const fig = renderFigure({
        kind: argv.kind,
        aggregatePath: source.aggregatePath,
        outputDir: argv.output,
      })
      console.log(`rendered ${fig.kind} -> ${fig.svgPath}, ${fig.pngPath}`)
      return 0
    } catch (err) {
      console.error(`error: ${err instanceof Error ? err.message : err}`)
      return 1
    }
  }
  renderAll(argv.input, argv.output)
  return 0
}

main().then((code) => {
  process.exitCode = code
})
