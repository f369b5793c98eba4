import { Chart } from './chart.js'
import { chartExtent, formatTick, HEIGHT, linearScale, MARGIN, ticks, WIDTH } from './layout.js'

function esc(text: string): string {
  return text.replace(/&/g, '&amp;').replace(/</g, '&lt;').replace(/>/g, '&gt;')
}

function text(x: number, y: number, s: string, extra = ''): string {
  const size = extra.includes('font-size') ? '' : 'font-size="12" '
  return `<text x="${x.toFixed(1)}" y="${y.toFixed(1)}" font-family="sans-serif" ${size}${extra}>${esc(s)}</text>`
}

/** Render a chart to a standalone SVG document. */
export function renderSvg(chart: Chart): string {
  const ext = chartExtent(chart)
  const x = linearScale(ext.x, [MARGIN.left, WIDTH - MARGIN.right])
  const y = linearScale(ext.y, [HEIGHT - MARGIN.bottom, MARGIN.top])
  const parts: string[] = []
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}">`,
  )
  parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`)
  parts.push(text(WIDTH / 2, 20, chart.title, 'text-anchor="middle" font-size="14"'))

  // frame and ticks
  const x0 = MARGIN.left
  const x1 = WIDTH - MARGIN.right
  const y0 = HEIGHT - MARGIN.bottom
  const y1 = MARGIN.top
  parts.push(`<line x1="${x0}" y1="${y0}" x2="${x1}" y2="${y0}" stroke="black"/>`)
  parts.push(`<line x1="${x0}" y1="${y0}" x2="${x0}" y2="${y1}" stroke="black"/>`)
  for (const t of ticks(ext.y[0], ext.y[1])) {
    const py = y(t)
    parts.push(`<line x1="${x0 - 4}" y1="${py.toFixed(1)}" x2="${x0}" y2="${py.toFixed(1)}" stroke="black"/>`)
    parts.push(text(x0 - 8, py + 4, formatTick(t), 'text-anchor="end"'))
  }
  parts.push(text(16, (y0 + y1) / 2, chart.yLabel,
    `text-anchor="middle" transform="rotate(-90 16 ${(y0 + y1) / 2})"`))
  parts.push(text((x0 + x1) / 2, HEIGHT - 14, chart.xLabel, 'text-anchor="middle"'))

  if (chart.type === 'line') {
    for (const t of ticks(ext.x[0], ext.x[1], 6)) {
      const px = x(t)
      parts.push(`<line x1="${px.toFixed(1)}" y1="${y0}" x2="${px.toFixed(1)}" y2="${y0 + 4}" stroke="black"/>`)
      parts.push(text(px, y0 + 18, formatTick(t), 'text-anchor="middle"'))
    }
    for (const s of chart.series) {
      if (s.band.length > 1) {
        const upper = s.band.map((b) => `${x(b.x).toFixed(1)},${y(b.hi).toFixed(1)}`)
        const lower = [...s.band].reverse().map((b) => `${x(b.x).toFixed(1)},${y(Math.max(0, b.lo)).toFixed(1)}`)
        parts.push(
          `<polygon points="${upper.concat(lower).join(' ')}" fill="${s.color}" fill-opacity="0.15" stroke="none"/>`,
        )
      }
      const pts = s.points.map((p) => `${x(p.x).toFixed(1)},${y(p.y).toFixed(1)}`).join(' ')
      parts.push(`<polyline points="${pts}" fill="none" stroke="${s.color}" stroke-width="1.8"/>`)
    }
    chart.series.forEach((s, i) => {
      const ly = MARGIN.top + 8 + 16 * i
      parts.push(`<line x1="${x1 - 120}" y1="${ly}" x2="${x1 - 96}" y2="${ly}" stroke="${s.color}" stroke-width="2"/>`)
      parts.push(text(x1 - 90, ly + 4, s.label))
    })
  } else {
    const slot = (x1 - x0) / chart.bars.length
    const barWidth = slot * 0.56
    chart.bars.forEach((b, i) => {
      const cx = x0 + slot * (i + 0.5)
      const left = cx - barWidth / 2
      const top = y(b.value)
      parts.push(
        `<rect x="${left.toFixed(1)}" y="${top.toFixed(1)}" width="${barWidth.toFixed(1)}" height="${(y0 - top).toFixed(1)}" fill="${b.color}" fill-opacity="0.85"/>`,
      )
      if (b.err > 0) {
        const lo = y(Math.max(0, b.value - b.err))
        const hi = y(b.value + b.err)
        parts.push(`<line x1="${cx}" y1="${lo.toFixed(1)}" x2="${cx}" y2="${hi.toFixed(1)}" stroke="black"/>`)
        parts.push(`<line x1="${cx - 6}" y1="${hi.toFixed(1)}" x2="${cx + 6}" y2="${hi.toFixed(1)}" stroke="black"/>`)
        parts.push(`<line x1="${cx - 6}" y1="${lo.toFixed(1)}" x2="${cx + 6}" y2="${lo.toFixed(1)}" stroke="black"/>`)
      }
      parts.push(text(cx, y0 + 18, b.label, 'text-anchor="middle"'))
    })
  }
  parts.push('</svg>')
  return parts.join('\n')
}
