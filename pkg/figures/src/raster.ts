import { PNG } from 'pngjs'
import { Chart } from './chart.js'
import { chartExtent, formatTick, HEIGHT, linearScale, MARGIN, ticks, WIDTH } from './layout.js'

// 5x7 bitmap font, rows separated by '|'; labels are uppercased before
// drawing so the raster fallback needs only one case
const FONT: Record<string, string> = {
  ' ': '.....|.....|.....|.....|.....|.....|.....',
  'A': '.###.|#...#|#...#|#####|#...#|#...#|#...#',
  'B': '####.|#...#|#...#|####.|#...#|#...#|####.',
  'C': '.###.|#...#|#....|#....|#....|#...#|.###.',
  'D': '####.|#...#|#...#|#...#|#...#|#...#|####.',
  'E': '#####|#....|#....|####.|#....|#....|#####',
  'F': '#####|#....|#....|####.|#....|#....|#....',
  'G': '.###.|#...#|#....|#.###|#...#|#...#|.###.',
  'H': '#...#|#...#|#...#|#####|#...#|#...#|#...#',
  'I': '.###.|..#..|..#..|..#..|..#..|..#..|.###.',
  'J': '..###|...#.|...#.|...#.|...#.|#..#.|.##..',
  'K': '#...#|#..#.|#.#..|##...|#.#..|#..#.|#...#',
  'L': '#....|#....|#....|#....|#....|#....|#####',
  'M': '#...#|##.##|#.#.#|#.#.#|#...#|#...#|#...#',
  'N': '#...#|##..#|#.#.#|#..##|#...#|#...#|#...#',
  'O': '.###.|#...#|#...#|#...#|#...#|#...#|.###.',
  'P': '####.|#...#|#...#|####.|#....|#....|#....',
  'Q': '.###.|#...#|#...#|#...#|#.#.#|#..#.|.##.#',
  'R': '####.|#...#|#...#|####.|#.#..|#..#.|#...#',
  'S': '.####|#....|#....|.###.|....#|....#|####.',
  'T': '#####|..#..|..#..|..#..|..#..|..#..|..#..',
  'U': '#...#|#...#|#...#|#...#|#...#|#...#|.###.',
  'V': '#...#|#...#|#...#|#...#|#...#|.#.#.|..#..',
  'W': '#...#|#...#|#...#|#.#.#|#.#.#|##.##|#...#',
  'X': '#...#|#...#|.#.#.|..#..|.#.#.|#...#|#...#',
  'Y': '#...#|#...#|.#.#.|..#..|..#..|..#..|..#..',
  'Z': '#####|....#|...#.|..#..|.#...|#....|#####',
  '0': '.###.|#...#|#..##|#.#.#|##..#|#...#|.###.',
  '1': '..#..|.##..|..#..|..#..|..#..|..#..|.###.',
  '2': '.###.|#...#|....#|...#.|..#..|.#...|#####',
  '3': '.###.|#...#|....#|..##.|....#|#...#|.###.',
  '4': '...#.|..##.|.#.#.|#..#.|#####|...#.|...#.',
  '5': '#####|#....|####.|....#|....#|#...#|.###.',
  '6': '.###.|#....|#....|####.|#...#|#...#|.###.',
  '7': '#####|....#|...#.|..#..|..#..|.#...|.#...',
  '8': '.###.|#...#|#...#|.###.|#...#|#...#|.###.',
  '9': '.###.|#...#|#...#|.####|....#|....#|.###.',
  '-': '.....|.....|.....|#####|.....|.....|.....',
  '.': '.....|.....|.....|.....|.....|.##..|.##..',
  ',': '.....|.....|.....|.....|..#..|..#..|.#...',
  '%': '##..#|##..#|...#.|..#..|.#...|#..##|#..##',
  '(': '...#.|..#..|.#...|.#...|.#...|..#..|...#.',
  ')': '.#...|..#..|...#.|...#.|...#.|..#..|.#...',
  '/': '....#|...#.|...#.|..#..|.#...|.#...|#....',
  ':': '.....|.##..|.##..|.....|.##..|.##..|.....',
}

type RGB = [number, number, number]

function parseColor(hex: string): RGB {
  const h = hex.replace('#', '')
  return [parseInt(h.slice(0, 2), 16), parseInt(h.slice(2, 4), 16), parseInt(h.slice(4, 6), 16)]
}

const BLACK: RGB = [0, 0, 0]

export class Canvas {
  readonly png: PNG

  constructor(width = WIDTH, height = HEIGHT) {
    this.png = new PNG({ width, height })
    this.png.data.fill(255)
  }

  set(x: number, y: number, [r, g, b]: RGB, alpha = 1) {
    const xi = Math.round(x)
    const yi = Math.round(y)
    if (xi < 0 || yi < 0 || xi >= this.png.width || yi >= this.png.height) return
    const idx = (yi * this.png.width + xi) * 4
    const d = this.png.data
    d[idx] = Math.round(r * alpha + d[idx] * (1 - alpha))
    d[idx + 1] = Math.round(g * alpha + d[idx + 1] * (1 - alpha))
    d[idx + 2] = Math.round(b * alpha + d[idx + 2] * (1 - alpha))
    d[idx + 3] = 255
  }

  fillRect(x0: number, y0: number, w: number, h: number, color: RGB, alpha = 1) {
    for (let y = y0; y < y0 + h; y++) {
      for (let x = x0; x < x0 + w; x++) {
        this.set(x, y, color, alpha)
      }
    }
  }

  line(x0: number, y0: number, x1: number, y1: number, color: RGB) {
    let [xa, ya] = [Math.round(x0), Math.round(y0)]
    const [xb, yb] = [Math.round(x1), Math.round(y1)]
    const dx = Math.abs(xb - xa)
    const dy = -Math.abs(yb - ya)
    const sx = xa < xb ? 1 : -1
    const sy = ya < yb ? 1 : -1
    let err = dx + dy
    for (;;) {
      this.set(xa, ya, color)
      if (xa === xb && ya === yb) break
      const e2 = 2 * err
      if (e2 >= dy) {
        err += dy
        xa += sx
      }
      if (e2 <= dx) {
        err += dx
        ya += sy
      }
    }
  }

  /** Draw text with the bitmap font; anchor start|middle|end, 2px scale. */
  text(x: number, y: number, s: string, anchor: 'start' | 'middle' | 'end' = 'start') {
    const up = s.toUpperCase()
    const scale = 2
    const cw = 6 * scale
    const width = up.length * cw
    let left = x
    if (anchor === 'middle') left = x - width / 2
    if (anchor === 'end') left = x - width
    for (const ch of up) {
      const glyph = FONT[ch] ?? FONT[' ']
      const rows = glyph.split('|')
      for (let r = 0; r < 7; r++) {
        for (let c = 0; c < 5; c++) {
          if (rows[r][c] === '#') {
            this.fillRect(left + c * scale, y + r * scale, scale, scale, BLACK)
          }
        }
      }
      left += cw
    }
  }

  encode(): Buffer {
    return PNG.sync.write(this.png)
  }
}

/** Raster fallback: same layout as the SVG, bitmap-font labels. */
export function renderPng(chart: Chart): Buffer {
  const ext = chartExtent(chart)
  const x = linearScale(ext.x, [MARGIN.left, WIDTH - MARGIN.right])
  const y = linearScale(ext.y, [HEIGHT - MARGIN.bottom, MARGIN.top])
  const cv = new Canvas()
  const x0 = MARGIN.left
  const x1 = WIDTH - MARGIN.right
  const y0 = HEIGHT - MARGIN.bottom
  const y1 = MARGIN.top

  cv.text(WIDTH / 2, 8, chart.title, 'middle')
  cv.line(x0, y0, x1, y0, BLACK)
  cv.line(x0, y0, x0, y1, BLACK)
  for (const t of ticks(ext.y[0], ext.y[1])) {
    cv.line(x0 - 4, y(t), x0, y(t), BLACK)
    cv.text(x0 - 8, y(t) - 7, formatTick(t), 'end')
  }
  cv.text((x0 + x1) / 2, HEIGHT - 20, chart.xLabel, 'middle')
  cv.text(4, y1 - 18, chart.yLabel)

  if (chart.type === 'line') {
    for (const t of ticks(ext.x[0], ext.x[1], 6)) {
      cv.line(x(t), y0, x(t), y0 + 4, BLACK)
      cv.text(x(t), y0 + 8, formatTick(t), 'middle')
    }
    chart.series.forEach((s, i) => {
      const color = parseColor(s.color)
      for (const b of s.band) {
        const top = Math.round(y(b.hi))
        const bottom = Math.round(y(Math.max(0, b.lo)))
        cv.fillRect(Math.round(x(b.x)), top, 1, Math.max(1, bottom - top), color, 0.25)
      }
      for (let p = 1; p < s.points.length; p++) {
        const a = s.points[p - 1]
        const b = s.points[p]
        cv.line(x(a.x), y(a.y), x(b.x), y(b.y), color)
      }
      const ly = y1 + 4 + 18 * i
      cv.line(x1 - 130, ly + 6, x1 - 106, ly + 6, color)
      cv.text(x1 - 100, ly, s.label)
    })
  } else {
    const slot = (x1 - x0) / chart.bars.length
    const barWidth = Math.round(slot * 0.56)
    chart.bars.forEach((b, i) => {
      const cx = x0 + slot * (i + 0.5)
      const top = Math.round(y(b.value))
      const color = parseColor(b.color)
      cv.fillRect(Math.round(cx - barWidth / 2), top, barWidth, y0 - top, color, 0.85)
      if (b.err > 0) {
        const hi = y(b.value + b.err)
        const lo = y(Math.max(0, b.value - b.err))
        cv.line(cx, lo, cx, hi, BLACK)
        cv.line(cx - 6, hi, cx + 6, hi, BLACK)
        cv.line(cx - 6, lo, cx + 6, lo, BLACK)
      }
      cv.text(cx, y0 + 8, b.label, 'middle')
    })
  }
  return cv.encode()
}
