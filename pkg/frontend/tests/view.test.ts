import { describe, expect, it } from "vitest";
import { fitViewport, pan, screenToWorld, worldToScreen, zoomAt } from "../src/view.js";

const VP = fitViewport(620, 160, 900, 620);

describe("viewport", () => {
  it("fits the whole map inside the canvas", () => {
    for (const corner of [
      [0, 0],
      [620, 0],
      [0, 160],
      [620, 160],
    ] as [number, number][]) {
      const [sx, sy] = worldToScreen(VP, corner[0], corner[1]);
      expect(sx).toBeGreaterThanOrEqual(0);
      expect(sx).toBeLessThanOrEqual(900);
      expect(sy).toBeGreaterThanOrEqual(0);
      expect(sy).toBeLessThanOrEqual(620);
    }
  });

  it("keeps north up: larger world y means smaller screen y", () => {
    const [, south] = worldToScreen(VP, 310, 0);
    const [, north] = worldToScreen(VP, 310, 160);
    expect(north).toBeLessThan(south);
  });

  it("round-trips world to screen and back", () => {
    const [sx, sy] = worldToScreen(VP, 123.4, 56.7);
    const [wx, wy] = screenToWorld(VP, sx, sy);
    expect(wx).toBeCloseTo(123.4, 9);
    expect(wy).toBeCloseTo(56.7, 9);
  });

  it("pan shifts content with the drag", () => {
    const before = worldToScreen(VP, 100, 100);
    const panned = pan(VP, 30, -20);
    const after = worldToScreen(panned, 100, 100);
    expect(after[0]).toBeCloseTo(before[0] + 30, 9);
    expect(after[1]).toBeCloseTo(before[1] - 20, 9);
  });

  it("zoom keeps the anchor point fixed", () => {
    const anchor: [number, number] = [450, 310];
    const world = screenToWorld(VP, anchor[0], anchor[1]);
    const zoomed = zoomAt(VP, anchor[0], anchor[1], 1.8);
    const [sx, sy] = worldToScreen(zoomed, world[0], world[1]);
    expect(sx).toBeCloseTo(anchor[0], 9);
    expect(sy).toBeCloseTo(anchor[1], 9);
    expect(zoomed.scale).toBeCloseTo(VP.scale * 1.8, 9);
  });
});
