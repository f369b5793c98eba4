import { mkdirSync, writeFileSync } from 'node:fs'
import { join } from 'node:path'
import { Chart, CHART_BUILDERS } from './chart.js'
import { readAggregate } from './csv.js'
import { discoverExperiments } from './manifest.js'
import { renderPng } from './raster.js'
import { renderSvg } from './svg.js'

export const KINDS = Object.keys(CHART_BUILDERS)

export interface FigureSpec {
  kind: string
  aggregatePath: string
  outputDir: string
}

export interface RenderedFigure {
  kind: string
  svgPath: string
  pngPath: string
  chart: Chart
}

export function buildChart(kind: string, aggregatePath: string): Chart {
  const builder = CHART_BUILDERS[kind]
  if (!builder) {
    throw new Error(`no figure defined for experiment kind '${kind}'`)
  }
  return builder(readAggregate(aggregatePath))
}

/** Render one experiment's figure as SVG plus a raster PNG fallback. */
export function renderFigure(spec: FigureSpec): RenderedFigure {
  const chart = buildChart(spec.kind, spec.aggregatePath)
  mkdirSync(spec.outputDir, { recursive: true })
  const svgPath = join(spec.outputDir, `${spec.kind}.svg`)
  const pngPath = join(spec.outputDir, `${spec.kind}.png`)
  writeFileSync(svgPath, renderSvg(chart))
  writeFileSync(pngPath, renderPng(chart))
  return { kind: spec.kind, svgPath, pngPath, chart }
}

export interface RenderAllResult {
  rendered: RenderedFigure[]
  skipped: Array<{ kind: string; reason: string }>
}

/**
 * Render every known figure whose aggregate exists under inputDir;
 * missing kinds and per-figure failures are reported and skipped.
 */
export function renderAll(
  inputDir: string,
  outputDir: string,
  log: (line: string) => void = console.log,
): RenderAllResult {
  const sources = new Map(discoverExperiments(inputDir).map((s) => [s.kind, s]))
  const result: RenderAllResult = { rendered: [], skipped: [] }
  for (const kind of KINDS) {
    const source = sources.get(kind)
    if (!source) {
      result.skipped.push({ kind, reason: 'no aggregate found' })
      log(`skip ${kind}: no aggregate found`)
      continue
    }
    try {
      const fig = renderFigure({ kind, aggregatePath: source.aggregatePath, outputDir })
      result.rendered.push(fig)
      log(`rendered ${kind} -> ${fig.svgPath}, ${fig.pngPath}`)
    } catch (err) {
      const reason = err instanceof Error ? err.message : String(err)
      result.skipped.push({ kind, reason })
      log(`skip ${kind}: ${reason}`)
    }
  }
  return result
}
