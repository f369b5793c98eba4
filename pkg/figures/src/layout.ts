import { Chart } from './chart.js'

export const WIDTH = 640
export const HEIGHT = 420
export const MARGIN = { top: 40, right: 24, bottom: 52, left: 64 }

export interface Scale {
  (v: number): number
  domain: [number, number]
}

export function linearScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain
  const [r0, r1] = range
  const span = d1 - d0 || 1
  const fn = ((v: number) => r0 + ((v - d0) / span) * (r1 - r0)) as Scale
  fn.domain = domain
  return fn
}

/** Round tick positions covering [lo, hi], at most `count` of them. */
export function ticks(lo: number, hi: number, count = 5): number[] {
  const span = hi - lo || 1
  const rawStep = span / count
  const mag = 10 ** Math.floor(Math.log10(rawStep))
  const step = [1, 2, 5, 10].map((m) => m * mag).find((s) => span / s <= count) ?? 10 * mag
  const start = Math.ceil(lo / step) * step
  const out: number[] = []
  for (let v = start; v <= hi + 1e-9; v += step) {
    out.push(Number(v.toFixed(10)))
  }
  return out
}

export function formatTick(v: number): string {
  if (Number.isInteger(v)) return String(v)
  return String(Number(v.toPrecision(4)))
}

export interface Extent {
  x: [number, number]
  y: [number, number]
}

export function chartExtent(chart: Chart): Extent {
  let xs: number[] = []
  let ys: number[] = [0]
  if (chart.type === 'line') {
    for (const s of chart.series) {
      xs = xs.concat(s.points.map((p) => p.x))
      ys = ys.concat(s.band.map((b) => b.hi), s.band.map((b) => Math.min(b.lo, 0)))
      ys = ys.concat(s.points.map((p) => p.y))
    }
  } else {
    xs = [0, chart.bars.length]
    ys = ys.concat(chart.bars.map((b) => b.value + b.err))
  }
  const xlo = Math.min(...xs)
  const xhi = Math.max(...xs)
  const yhi = Math.max(...ys)
  return { x: [xlo, xhi], y: [0, yhi * 1.05 || 1] }
}
