import { readFileSync } from 'node:fs'
import Papa from 'papaparse'

export interface AggregateRow {
  kind: string
  sweep: string
  metric: string
  mean: number
  std: number
  n: number
}

export const AGGREGATE_COLUMNS = ['kind', 'sweep', 'metric', 'mean', 'std', 'n'] as const

/** Aggregate CSV is missing required columns; `missing` names them. */
export class SchemaError extends Error {
  readonly missing: string[]

  constructor(path: string, missing: string[]) {
    super(`${path}: aggregate schema mismatch, missing columns: ${missing.join(', ')}`)
    this.name = 'SchemaError'
    this.missing = missing
  }
}

export function readAggregate(path: string): AggregateRow[] {
  const text = readFileSync(path, 'utf8')
  const parsed = Papa.parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  })
  if (parsed.errors.length > 0) {
    const first = parsed.errors[0]
    throw new Error(`${path}: row ${first.row}: ${first.message}`)
  }
  const fields = parsed.meta.fields ?? []
  const missing = AGGREGATE_COLUMNS.filter((c) => !fields.includes(c))
  if (missing.length > 0) {
    throw new SchemaError(path, missing)
  }
  return parsed.data.map((r) => ({
    kind: r.kind,
    sweep: r.sweep,
    metric: r.metric,
    mean: Number(r.mean),
    std: Number(r.std),
    n: Number(r.n),
  }))
}
