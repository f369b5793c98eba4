import { AggregateRow } from './csv.js'

export interface Point {
  x: number
  y: number
}

export interface Band {
  x: number
  lo: number
  hi: number
}

export interface Series {
  label: string
  points: Point[]
  band: Band[]
  color: string
}

export interface Bar {
  label: string
  value: number
  err: number
  color: string
}

export interface LineChart {
  type: 'line'
  title: string
  xLabel: string
  yLabel: string
  series: Series[]
}

export interface BarChart {
  type: 'bar'
  title: string
  xLabel: string
  yLabel: string
  bars: Bar[]
}

export type Chart = LineChart | BarChart

export const PALETTE = ['#1f77b4', '#d62728', '#2ca02c', '#9467bd', '#ff7f0e', '#8c564b']

export class MetricError extends Error {
  constructor(kind: string, missing: string) {
    super(`aggregate for ${kind} has no '${missing}' rows`)
    this.name = 'MetricError'
  }
}

function series(label: string, color: string, pts: Array<[number, number, number]>): Series {
  pts.sort((a, b) => a[0] - b[0])
  return {
    label,
    color,
    points: pts.map(([x, y]) => ({ x, y })),
    band: pts.map(([x, y, s]) => ({ x, lo: y - s, hi: y + s })),
  }
}

/** Received-per-iteration lines, one per shared-capacity tier. */
export function tiersChart(rows: AggregateRow[]): LineChart {
  const windows = rows.filter((r) => /^received_w\d+$/.test(r.metric))
  if (windows.length === 0) throw new MetricError('capacity-tiers', 'received_w*')
  const byTier = new Map<string, Array<[number, number, number]>>()
  for (const r of windows) {
    const x = Number(r.metric.slice('received_w'.length))
    if (!byTier.has(r.sweep)) byTier.set(r.sweep, [])
    byTier.get(r.sweep)!.push([x, r.mean, r.std])
  }
  // legend ordered by overall level so the top line is listed first
  const tiers = [...byTier.keys()].sort((a, b) => {
    const avg = (pts: Array<[number, number, number]>) =>
      pts.reduce((acc, p) => acc + p[1], 0) / pts.length
    return avg(byTier.get(b)!) - avg(byTier.get(a)!)
  })
  return {
    type: 'line',
    title: 'Average data received per node by shared capacity',
    xLabel: 'iteration',
    yLabel: 'average data received per node',
    series: tiers.map((t, i) => series(t, PALETTE[i % PALETTE.length], byTier.get(t)!)),
  }
}

/** Contributor performance against the free-rider percentage. */
export function freeRidersChart(rows: AggregateRow[]): LineChart {
  const perf = rows.filter((r) => r.metric === 'contributor_perf')
  if (perf.length === 0) throw new MetricError('free-riders', 'contributor_perf')
  const pts = perf.map((r): [number, number, number] => [Number(r.sweep), r.mean, r.std])
  return {
    type: 'line',
    title: 'System performance vs percentage of free riders',
    xLabel: 'free riders (%)',
    yLabel: 'mean data received per contributor',
    series: [series('contributors', PALETTE[0], pts)],
  }
}

/** Received data per requesting strategy. */
export function strategiesChart(rows: AggregateRow[]): BarChart {
  const recv = rows.filter((r) => r.metric === 'received_mean')
  if (recv.length === 0) throw new MetricError('strategies', 'received_mean')
  const order = [...recv].sort((a, b) => a.sweep.localeCompare(b.sweep))
  return {
    type: 'bar',
    title: 'Data received by nodes with different strategies',
    xLabel: 'strategy',
    yLabel: 'mean data received per node',
    bars: order.map((r, i) => ({
      label: r.sweep,
      value: r.mean,
      err: r.std,
      color: PALETTE[i % PALETTE.length],
    })),
  }
}

/** Probes per resolved query: ranked probing against the uniform baseline. */
export function routingChart(rows: AggregateRow[]): BarChart {
  const probes = rows.filter((r) => r.metric === 'probes_mean')
  if (probes.length === 0) throw new MetricError('interest-routing', 'probes_mean')
  const order = ['interest', 'baseline'].filter((m) => probes.some((r) => r.sweep === m))
  return {
    type: 'bar',
    title: 'Average number of nodes queried per resolved query',
    xLabel: 'routing mode',
    yLabel: 'average nodes queried',
    bars: order.map((mode, i) => {
      const row = probes.find((r) => r.sweep === mode)!
      return { label: mode, value: row.mean, err: row.std, color: PALETTE[i] }
    }),
  }
}

export const CHART_BUILDERS: Record<string, (rows: AggregateRow[]) => Chart> = {
  'capacity-tiers': tiersChart,
  'free-riders': freeRidersChart,
  strategies: strategiesChart,
  'interest-routing': routingChart,
}
