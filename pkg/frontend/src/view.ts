// World-to-screen mapping. The map is drawn north-up in its local
// metric frame: +y is north, which puts world y opposite to canvas y.

export interface Viewport {
  scale: number; // pixels per meter
  offsetX: number; // world x at the left canvas edge
  offsetY: number; // world y at the bottom canvas edge
  widthPx: number;
  heightPx: number;
}

export function fitViewport(
  widthM: number,
  heightM: number,
  widthPx: number,
  heightPx: number,
  marginPx = 40,
): Viewport {
  const usableW = Math.max(1, widthPx - 2 * marginPx);
  const usableH = Math.max(1, heightPx - 2 * marginPx);
  const scale = Math.min(usableW / widthM, usableH / heightM);
  const offsetX = -(widthPx / scale - widthM) / 2;
  const offsetY = -(heightPx / scale - heightM) / 2;
  return { scale, offsetX, offsetY, widthPx, heightPx };
}

export function worldToScreen(v: Viewport, x: number, y: number): [number, number] {
  return [(x - v.offsetX) * v.scale, v.heightPx - (y - v.offsetY) * v.scale];
}

export function screenToWorld(v: Viewport, sx: number, sy: number): [number, number] {
  return [v.offsetX + sx / v.scale, v.offsetY + (v.heightPx - sy) / v.scale];
}

export function pan(v: Viewport, dxPx: number, dyPx: number): Viewport {
  return { ...v, offsetX: v.offsetX - dxPx / v.scale, offsetY: v.offsetY + dyPx / v.scale };
}

// Zoom about a screen point, keeping the world point under it fixed.
export function zoomAt(v: Viewport, sx: number, sy: number, factor: number): Viewport {
  const [wx, wy] = screenToWorld(v, sx, sy);
  const scale = Math.min(1000, Math.max(0.01, v.scale * factor));
  return {
    ...v,
    scale,
    offsetX: wx - sx / scale,
    offsetY: wy - (v.heightPx - sy) / scale,
  };
}
