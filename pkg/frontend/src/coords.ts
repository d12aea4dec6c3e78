/** Mapping between displayed canvas coordinates and image pixels.
 *
 * The canvas draws the image scaled by an integer-or-fractional zoom factor;
 * a click anywhere inside a pixel's displayed square must map to that pixel,
 * and a pixel's marker is drawn at the square's center.
 */

export interface ImageSize {
  width: number;
  height: number;
}

/** Displayed (u, v) -> image (x, y); null when outside the image. */
export function displayToImage(
  u: number, v: number, zoom: number, size: ImageSize,
): { x: number; y: number } | null {
  const x = Math.floor(u / zoom);
  const y = Math.floor(v / zoom);
  if (x < 0 || y < 0 || x >= size.width || y >= size.height) return null;
  return { x, y };
}

/** Center of an image pixel's displayed square. */
export function imageToDisplay(
  x: number, y: number, zoom: number,
): { u: number; v: number } {
  return { u: (x + 0.5) * zoom, v: (y + 0.5) * zoom };
}

/** Zoom that fits the image inside a viewport without distortion. */
export function fitZoom(size: ImageSize, maxW: number, maxH: number): number {
  if (size.width === 0 || size.height === 0) return 1;
  return Math.max(1e-6, Math.min(maxW / size.width, maxH / size.height));
}
