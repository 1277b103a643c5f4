// Canvas scene: edges as labeled lines, nodes as degree glyphs,
// discoverable POIs as icons, plus pointer and guidance overlays.
// Drawing goes through a narrow context interface so tests can record
// calls without a DOM.

import type { ViewState } from "./state.js";
import type { MapDocument, MapNode } from "./types.js";
import { worldToScreen, type Viewport } from "./view.js";

// The subset of CanvasRenderingContext2D the renderer touches.
export interface SceneContext {
  lineWidth: number;
  strokeStyle: string;
  fillStyle: string;
  font: string;
  textAlign: string;
  textBaseline: string;
  clearRect(x: number, y: number, w: number, h: number): void;
  beginPath(): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  closePath(): void;
  stroke(): void;
  fill(): void;
  arc(x: number, y: number, r: number, a0: number, a1: number): void;
  rect(x: number, y: number, w: number, h: number): void;
  fillText(text: string, x: number, y: number): void;
  save(): void;
  restore(): void;
}

export const COLORS = {
  background: "#10141a",
  edge: "#5d6b7a",
  edgeHighlight: "#ffb454",
  node: "#9fb3c8",
  nodeHighlight: "#ffb454",
  poi: "#7fd1b9",
  poiHighlight: "#ffb454",
  label: "#c5cdd6",
  pointer: "#ff5d5d",
  route: "#4f9cf9",
  beacon: "#c792ea",
};

const BEACON_ANGLES: Record<string, number> = {
  east: 0,
  northeast: 45,
  north: 90,
  northwest: 135,
  west: 180,
  southwest: 225,
  south: 270,
  southeast: 315,
};

function nodeById(doc: MapDocument): Map<string, MapNode> {
  return new Map(doc.nodes.map((n) => [n.id, n]));
}

function nodeDegrees(doc: MapDocument): Map<string, number> {
  const deg = new Map<string, number>();
  for (const e of doc.edges) {
    for (const id of e.endpoints) deg.set(id, (deg.get(id) ?? 0) + 1);
  }
  return deg;
}

function drawNodeGlyph(ctx: SceneContext, sx: number, sy: number, degree: number): void {
  const r = 6;
  ctx.beginPath();
  if (degree === 4) {
    ctx.rect(sx - r, sy - r, 2 * r, 2 * r);
  } else if (degree === 3) {
    ctx.moveTo(sx, sy - r);
    ctx.lineTo(sx + r, sy + r);
    ctx.lineTo(sx - r, sy + r);
    ctx.closePath();
  } else {
    ctx.arc(sx, sy, r, 0, 2 * Math.PI);
  }
  ctx.fill();
}

export interface SceneOverlay {
  routePolyline?: [number, number][]; // world points of the remaining route
}

export function renderScene(
  ctx: SceneContext,
  doc: MapDocument,
  state: ViewState,
  viewport: Viewport,
  overlay: SceneOverlay = {},
): void {
  ctx.fillStyle = COLORS.background;
  ctx.clearRect(0, 0, viewport.widthPx, viewport.heightPx);
  ctx.beginPath();
  ctx.rect(0, 0, viewport.widthPx, viewport.heightPx);
  ctx.fill();

  const nodes = nodeById(doc);
  const degrees = nodeDegrees(doc);
  const highlightId = state.highlight?.featureId;

  // Streets first so markers sit on top.
  ctx.font = "12px system-ui, sans-serif";
  ctx.textAlign = "center";
  ctx.textBaseline = "bottom";
  for (const edge of doc.edges) {
    const a = nodes.get(edge.endpoints[0]);
    const b = nodes.get(edge.endpoints[1]);
    if (!a || !b) continue;
    const [ax, ay] = worldToScreen(viewport, a.position[0], a.position[1]);
    const [bx, by] = worldToScreen(viewport, b.position[0], b.position[1]);
    ctx.lineWidth = edge.id === highlightId ? 5 : 3;
    ctx.strokeStyle = edge.id === highlightId ? COLORS.edgeHighlight : COLORS.edge;
    ctx.beginPath();
    ctx.moveTo(ax, ay);
    ctx.lineTo(bx, by);
    ctx.stroke();
    ctx.fillStyle = COLORS.label;
    ctx.fillText(edge.street_name, (ax + bx) / 2, (ay + by) / 2 - 4);
  }

  if (overlay.routePolyline && overlay.routePolyline.length > 1) {
    ctx.lineWidth = 2;
    ctx.strokeStyle = COLORS.route;
    ctx.beginPath();
    overlay.routePolyline.forEach(([x, y], i) => {
      const [sx, sy] = worldToScreen(viewport, x, y);
      if (i === 0) ctx.moveTo(sx, sy);
      else ctx.lineTo(sx, sy);
    });
    ctx.stroke();
  }

  for (const node of doc.nodes) {
    const [sx, sy] = worldToScreen(viewport, node.position[0], node.position[1]);
    ctx.fillStyle = node.id === highlightId ? COLORS.nodeHighlight : COLORS.node;
    drawNodeGlyph(ctx, sx, sy, degrees.get(node.id) ?? 0);
  }

  ctx.textBaseline = "top";
  for (const poi of doc.pois) {
    if (!poi.discoverable) continue;
    const [sx, sy] = worldToScreen(viewport, poi.position[0], poi.position[1]);
    ctx.fillStyle = poi.id === highlightId ? COLORS.poiHighlight : COLORS.poi;
    ctx.beginPath();
    ctx.moveTo(sx, sy - 7);
    ctx.lineTo(sx + 7, sy);
    ctx.lineTo(sx, sy + 7);
    ctx.lineTo(sx - 7, sy);
    ctx.closePath();
    ctx.fill();
    ctx.fillStyle = COLORS.label;
    ctx.fillText(poi.name, sx, sy + 10);
  }

  // Beacon arrow: cardinal direction from the pointer, north-up, so the
  // arrow on screen points the same way the spoken cue says.
  if (state.guidance?.mode === "fly_me_there" && state.pointer) {
    const angle = BEACON_ANGLES[state.guidance.direction];
    if (angle !== undefined) {
      const [sx, sy] = worldToScreen(viewport, state.pointer[0], state.pointer[1]);
      const rad = (angle * Math.PI) / 180;
      const len = 36;
      const tx = sx + len * Math.cos(rad);
      const ty = sy - len * Math.sin(rad);
      ctx.lineWidth = 3;
      ctx.strokeStyle = COLORS.beacon;
      ctx.beginPath();
      ctx.moveTo(sx, sy);
      ctx.lineTo(tx, ty);
      ctx.stroke();
      const head = 8;
      ctx.fillStyle = COLORS.beacon;
      ctx.beginPath();
      ctx.moveTo(tx, ty);
      ctx.lineTo(
        tx - head * Math.cos(rad - Math.PI / 6),
        ty + head * Math.sin(rad - Math.PI / 6),
      );
      ctx.lineTo(
        tx - head * Math.cos(rad + Math.PI / 6),
        ty + head * Math.sin(rad + Math.PI / 6),
      );
      ctx.closePath();
      ctx.fill();
    }
  }

  if (state.pointer) {
    const [sx, sy] = worldToScreen(viewport, state.pointer[0], state.pointer[1]);
    ctx.lineWidth = 2;
    ctx.strokeStyle = COLORS.pointer;
    ctx.beginPath();
    ctx.moveTo(sx - 10, sy);
    ctx.lineTo(sx + 10, sy);
    ctx.moveTo(sx, sy - 10);
    ctx.lineTo(sx, sy + 10);
    ctx.stroke();
    ctx.beginPath();
    ctx.arc(sx, sy, 6, 0, 2 * Math.PI);
    ctx.stroke();
  }
}
