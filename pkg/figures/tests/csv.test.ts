import { mkdtempSync, writeFileSync } from 'node:fs'
import { tmpdir } from 'node:os'
import { join } from 'node:path'
import { describe, expect, it } from 'vitest'
import { readAggregate, SchemaError } from '../src/csv.js'

const FIXTURES = join(__dirname, 'fixtures')

function tmpCsv(content: string): string {
  const dir = mkdtempSync(join(tmpdir(), 'figcsv-'))
  const path = join(dir, 'aggregate.csv')
  writeFileSync(path, content)
  return path
}

describe('readAggregate', () => {
  it('parses a real aggregate written by the simulator', () => {
    const rows = readAggregate(join(FIXTURES, 'strategies', 'aggregate.csv'))
    expect(rows.length).toBeGreaterThan(0)
    for (const row of rows) {
      expect(row.kind).toBe('strategies')
      expect(Number.isFinite(row.mean)).toBe(true)
      expect(Number.isFinite(row.std)).toBe(true)
      expect(row.n).toBeGreaterThanOrEqual(1)
    }
  })

  it('names a missing stddev column', () => {
    const path = tmpCsv('kind,sweep,metric,mean,n\nstrategies,BS,received_mean,1.0,5\n')
    try {
      readAggregate(path)
      expect.unreachable('should have thrown')
    } catch (err) {
      expect(err).toBeInstanceOf(SchemaError)
      expect((err as SchemaError).missing).toEqual(['std'])
      expect((err as SchemaError).message).toContain('std')
    }
  })

  it('lists every missing column', () => {
    const path = tmpCsv('sweep,mean\nBS,1.0\n')
    try {
      readAggregate(path)
      expect.unreachable('should have thrown')
    } catch (err) {
      expect((err as SchemaError).missing).toEqual(['kind', 'metric', 'std', 'n'])
    }
  })
})
