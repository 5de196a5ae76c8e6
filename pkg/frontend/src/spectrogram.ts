/**
 * Mel spectrogram heatmap: frames on x, mel bands on y (band 0 at the
 * bottom), values mapped through a dark-to-bright color ramp.
 */

export interface CellHit {
  frame: number;
  band: number;
  value: number;
}

const RAMP: [number, number, number][] = [
  [13, 8, 135],
  [84, 2, 163],
  [156, 23, 158],
  [205, 62, 113],
  [237, 121, 83],
  [251, 180, 26],
  [240, 249, 33],
];

export function colorFor(value: number, lo: number, hi: number): [number, number, number] {
  const span = hi - lo;
  const t = span > 0 ? Math.min(1, Math.max(0, (value - lo) / span)) : 0;
  const scaled = t * (RAMP.length - 1);
  const i = Math.min(RAMP.length - 2, Math.floor(scaled));
  const frac = scaled - i;
  const a = RAMP[i]!;
  const b = RAMP[i + 1]!;
  return [
    Math.round(a[0] + (b[0] - a[0]) * frac),
    Math.round(a[1] + (b[1] - a[1]) * frac),
    Math.round(a[2] + (b[2] - a[2]) * frac),
  ];
}

export function melRange(mel: number[][]): { lo: number; hi: number } {
  let lo = Infinity;
  let hi = -Infinity;
  for (const row of mel) {
    for (const v of row) {
      if (v < lo) lo = v;
      if (v > hi) hi = v;
    }
  }
  if (!isFinite(lo)) return { lo: 0, hi: 1 };
  return { lo, hi };
}

/** Which (frame, band) cell a canvas-pixel position falls on. */
export function cellAt(
  mel: number[][],
  width: number,
  height: number,
  x: number,
  y: number,
): CellHit | null {
  const frames = mel.length;
  const bands = frames > 0 ? mel[0]!.length : 0;
  if (frames === 0 || bands === 0) return null;
  if (x < 0 || y < 0 || x >= width || y >= height) return null;
  const frame = Math.min(frames - 1, Math.floor((x / width) * frames));
  const bandFromTop = Math.min(bands - 1, Math.floor((y / height) * bands));
  const band = bands - 1 - bandFromTop;
  return { frame, band, value: mel[frame]![band]! };
}

/**
 * Paint onto a canvas sized cell-per-pixel (frames x bands); callers scale
 * it up with CSS. Returns false when no 2D context is available.
 */
export function renderSpectrogram(canvas: HTMLCanvasElement, mel: number[][]): boolean {
  const frames = mel.length;
  const bands = frames > 0 ? mel[0]!.length : 0;
  if (frames === 0 || bands === 0) return false;
  canvas.width = frames;
  canvas.height = bands;
  let ctx: CanvasRenderingContext2D | null;
  try {
    ctx = canvas.getContext("2d");
  } catch {
    ctx = null; // headless DOM without canvas support
  }
  if (!ctx) return false;
  const { lo, hi } = melRange(mel);
  const image = ctx.createImageData(frames, bands);
  for (let f = 0; f < frames; f++) {
    for (let b = 0; b < bands; b++) {
      const [r, g, bl] = colorFor(mel[f]![b]!, lo, hi);
      const row = bands - 1 - b; // low bands at the bottom
      const at = (row * frames + f) * 4;
      image.data[at] = r;
      image.data[at + 1] = g;
      image.data[at + 2] = bl;
      image.data[at + 3] = 255;
    }
  }
  ctx.putImageData(image, 0, 0);
  return true;
}
