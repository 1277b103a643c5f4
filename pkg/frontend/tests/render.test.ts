// Scene drawing against a recording stub context: no DOM needed, the
// renderer only sees the narrow SceneContext interface.

import { readFileSync } from "node:fs";
import { join } from "node:path";
import { describe, expect, it } from "vitest";
import { COLORS, renderScene, type SceneContext } from "../src/render.js";
import { applyEvent, initialState, type ViewState } from "../src/state.js";
import type { MapDocument } from "../src/types.js";
import { fitViewport } from "../src/view.js";

const DOC = JSON.parse(
  readFileSync(join(__dirname, "..", "..", "fixtures", "city_grid.json"), "utf8"),
) as MapDocument;
const VP = fitViewport(DOC.frame.width_m, DOC.frame.height_m, 900, 620);

interface Op {
  op: string;
  style?: string;
  width?: number;
  text?: string;
}

class StubContext implements SceneContext {
  lineWidth = 1;
  strokeStyle = "";
  fillStyle = "";
  font = "";
  textAlign = "";
  textBaseline = "";
  ops: Op[] = [];

  clearRect(): void {
    this.ops.push({ op: "clearRect" });
  }
  beginPath(): void {}
  moveTo(): void {}
  lineTo(): void {}
  closePath(): void {
    this.ops.push({ op: "closePath" });
  }
  stroke(): void {
    this.ops.push({ op: "stroke", style: this.strokeStyle, width: this.lineWidth });
  }
  fill(): void {
    this.ops.push({ op: "fill", style: this.fillStyle });
  }
  arc(): void {
    this.ops.push({ op: "arc" });
  }
  rect(): void {
    this.ops.push({ op: "rect" });
  }
  fillText(text: string): void {
    this.ops.push({ op: "fillText", text, style: this.fillStyle });
  }
  save(): void {}
  restore(): void {}
}

function draw(state: ViewState): StubContext {
  const ctx = new StubContext();
  renderScene(ctx, DOC, state, VP);
  return ctx;
}

function count(ctx: StubContext, op: string): number {
  return ctx.ops.filter((o) => o.op === op).length;
}

describe("map scene", () => {
  it("labels every street and draws one line per edge", () => {
    const ctx = draw(initialState());
    const labels = ctx.ops.filter((o) => o.op === "fillText").map((o) => o.text);
    for (const street of [
      "Harbor Street",
      "Market Street",
      "Station Street",
      "Cedar Avenue",
      "Birch Avenue",
      "Aspen Avenue",
    ]) {
      expect(labels).toContain(street);
    }
    const edgeStrokes = ctx.ops.filter(
      (o) => o.op === "stroke" && (o.style === COLORS.edge || o.style === COLORS.edgeHighlight),
    );
    expect(edgeStrokes.length).toBe(DOC.edges.length);
  });

  it("picks glyphs by intersection degree", () => {
    const ctx = draw(initialState());
    // one rect is the background; the grid has exactly one 4-way node
    expect(count(ctx, "rect")).toBe(2);
    // four T intersections plus one POI diamond use closed paths
    expect(count(ctx, "closePath")).toBe(5);
    // four corner nodes, no pointer ring
    expect(count(ctx, "arc")).toBe(4);
  });

  it("shows only discoverable POIs", () => {
    const labels = draw(initialState())
      .ops.filter((o) => o.op === "fillText")
      .map((o) => o.text);
    expect(labels).toContain("Corner Books");
    expect(labels).not.toContain("Luna Trattoria");
  });

  it("highlights the edge the server said ENTER about", () => {
    const state = applyEvent(initialState(), {
      seq: 1,
      type: "ENTER",
      payload: { t_ms: 0, kind: "street_edge", feature_id: "e4", text: "Market Street" },
    });
    const strokes = draw(state).ops.filter((o) => o.op === "stroke");
    const highlighted = strokes.filter((o) => o.style === COLORS.edgeHighlight);
    expect(highlighted.length).toBe(1);
    expect(highlighted[0]?.width).toBe(5);
  });

  it("draws the pointer crosshair and ring when set", () => {
    const state: ViewState = { ...initialState(), pointer: [310, 80] };
    const ctx = draw(state);
    expect(count(ctx, "arc")).toBe(5);
    const pointerStrokes = ctx.ops.filter((o) => o.op === "stroke" && o.style === COLORS.pointer);
    expect(pointerStrokes.length).toBe(2);
  });

  it("draws the beacon arrow during fly-me-there", () => {
    let state: ViewState = { ...initialState(), pointer: [310, 80] };
    state = applyEvent(state, {
      seq: 1,
      type: "BEACON_CUE",
      payload: { t_ms: 0, text: "x", direction: "east", distance_m: 150, target: "Club" },
    });
    const ctx = draw(state);
    const beaconOps = ctx.ops.filter(
      (o) => (o.op === "stroke" || o.op === "fill") && o.style === COLORS.beacon,
    );
    expect(beaconOps.length).toBe(2);
  });
});
