import { existsSync, readdirSync, readFileSync, statSync } from 'node:fs'
import { join } from 'node:path'

export interface ExperimentManifest {
  kind: string
  aggregate_csv: string
  seeds: number[]
  version?: string
}

export interface ExperimentSource {
  kind: string
  dir: string
  aggregatePath: string
  manifest: ExperimentManifest
}

export function readManifest(path: string): ExperimentManifest {
  const data = JSON.parse(readFileSync(path, 'utf8'))
  for (const key of ['kind', 'aggregate_csv']) {
    if (!(key in data)) {
      throw new Error(`${path}: manifest is missing '${key}'`)
    }
  }
  return data as ExperimentManifest
}

/**
 * Find experiment outputs under an input directory: the directory itself
 * and each immediate subdirectory count when they hold a manifest.json.
 */
export function discoverExperiments(inputDir: string): ExperimentSource[] {
  const candidates: string[] = [inputDir]
  for (const entry of readdirSync(inputDir).sort()) {
    const child = join(inputDir, entry)
    if (statSync(child).isDirectory()) {
      candidates.push(child)
    }
  }
  const out: ExperimentSource[] = []
  for (const dir of candidates) {
    const manifestPath = join(dir, 'manifest.json')
    if (!existsSync(manifestPath)) continue
    const manifest = readManifest(manifestPath)
    const aggregatePath = join(dir, manifest.aggregate_csv)
    if (!existsSync(aggregatePath)) continue
    out.push({ kind: manifest.kind, dir, aggregatePath, manifest })
  }
  return out
}
