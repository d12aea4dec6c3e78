/** Mask overlay pixels as pure functions of (values, threshold, opacity).
 *
 * Rendering never mutates session state; the threshold slider re-thresholds
 * the raw per-pixel outputs client-side, matching the server's inclusive
 * `raw >= threshold` rule.
 */

export interface Rgba {
  r: number;
  g: number;
  b: number;
}

export const OVERLAY_COLOR: Rgba = { r: 255, g: 64, b: 200 };

/** Inclusive thresholding of raw outputs, row-major. */
export function maskFromRaw(
  raw: ArrayLike<number>, threshold: number,
): Uint8Array {
  const out = new Uint8Array(raw.length);
  for (let i = 0; i < raw.length; i++) {
    out[i] = raw[i] >= threshold ? 1 : 0;
  }
  return out;
}

/** RGBA buffer for a mask overlay; object pixels get the tint at `opacity`. */
export function overlayPixels(
  mask: ArrayLike<number>, opacity: number, color: Rgba = OVERLAY_COLOR,
): Uint8ClampedArray<ArrayBuffer> {
  const alpha = Math.round(Math.max(0, Math.min(1, opacity)) * 255);
  const out = new Uint8ClampedArray(mask.length * 4);
  for (let i = 0; i < mask.length; i++) {
    if (mask[i]) {
      const o = i * 4;
      out[o] = color.r;
      out[o + 1] = color.g;
      out[o + 2] = color.b;
      out[o + 3] = alpha;
    }
  }
  return out;
}

/** Grayscale RGBA rendering of a landscape grid in [0, 1], row-major. */
export function gridPixels(values: number[][]): Uint8ClampedArray<ArrayBuffer> {
  const rows = values.length;
  const cols = rows ? values[0].length : 0;
  const out = new Uint8ClampedArray(rows * cols * 4);
  for (let i = 0; i < rows; i++) {
    for (let j = 0; j < cols; j++) {
      const v = Math.max(0, Math.min(1, values[i][j]));
      const o = (i * cols + j) * 4;
      const g = Math.round(v * 255);
      out[o] = g;
      out[o + 1] = g;
      out[o + 2] = g;
      out[o + 3] = 255;
    }
  }
  return out;
}
