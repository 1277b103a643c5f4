// Browser entry point: wires the canvas, console, push-to-talk and
// bookmark panel to the engine service. All behavior flows through the
// client, the pointer driver and the event reducer; this file is DOM
// glue only.

import { EngineClient } from "./client.js";
import { PointerDriver } from "./pointer.js";
import { renderScene, type SceneOverlay } from "./render.js";
import { SpeechOutput } from "./speech.js";
import { applyCommand, applyEvent, initialState, type ViewState } from "./state.js";
import type { MapDocument, WireEvent } from "./types.js";
import { fitViewport, pan, screenToWorld, zoomAt, type Viewport } from "./view.js";

function el<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (!found) throw new Error(`missing element #${id}`);
  return found as T;
}

function sleep(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}

async function boot(): Promise<void> {
  const params = new URLSearchParams(location.search);
  const base = params.get("service") ?? location.origin;
  const client = new EngineClient(base);

  const canvas = el<HTMLCanvasElement>("map");
  const ctx = canvas.getContext("2d");
  if (!ctx) throw new Error("canvas 2d context unavailable");
  const consolePane = el<HTMLPreElement>("console");
  const banner = el<HTMLDivElement>("banner");
  const pendingBadge = el<HTMLSpanElement>("pending");
  const statusLine = el<HTMLSpanElement>("status");
  const bookmarkList = el<HTMLUListElement>("bookmarks");
  const question = el<HTMLInputElement>("question");
  const talkButton = el<HTMLButtonElement>("talk");
  const haltButton = el<HTMLButtonElement>("halt");
  const speechToggle = el<HTMLInputElement>("speech");
  const bookmarkButton = el<HTMLButtonElement>("bookmark");
  const bookmarkName = el<HTMLInputElement>("bookmark-name");

  const health = await client.health();
  const doc: MapDocument = await client.mapDocument();
  const sessionId = await client.createSession();
  document.title = `${health.map} - explorer`;

  let state: ViewState = initialState();
  let viewport: Viewport = fitViewport(
    doc.frame.width_m,
    doc.frame.height_m,
    canvas.width,
    canvas.height,
  );
  const overlay: SceneOverlay = {};
  const speech = new SpeechOutput();
  const nodePositions = new Map(doc.nodes.map((n) => [n.id, n.position]));

  const driver = new PointerDriver((frames) => client.postFrames(sessionId, frames), {
    onError: (err) => {
      statusLine.textContent = `frame post failed: ${err.message}`;
    },
  });
  setInterval(() => driver.heartbeat(), 100);

  function redraw(): void {
    renderScene(ctx as unknown as Parameters<typeof renderScene>[0], doc, state, viewport, overlay);
    consolePane.textContent = state.log.join("\n");
    consolePane.scrollTop = consolePane.scrollHeight;
    pendingBadge.hidden = !state.pending;
    pendingBadge.textContent = state.busyTicks > 0 ? `working (${state.busyTicks})` : "working";
    if (state.guidance?.mode === "street_by_street") {
      const g = state.guidance;
      const head = g.rerouted ? "rerouted" : g.step !== undefined ? `step ${g.step}/${g.of}` : "";
      banner.hidden = false;
      banner.textContent = head ? `${head}: ${g.banner}` : g.banner;
    } else if (state.guidance?.mode === "fly_me_there") {
      banner.hidden = false;
      banner.textContent = `${state.guidance.target}: ${state.guidance.distanceM.toFixed(0)} m ${state.guidance.direction}`;
    } else {
      banner.hidden = true;
    }
    bookmarkList.innerHTML = "";
    for (const mark of state.bookmarks) {
      const item = document.createElement("li");
      item.textContent = `${mark.name} (${mark.position[0].toFixed(0)}, ${mark.position[1].toFixed(0)})`;
      bookmarkList.appendChild(item);
    }
    const held = state.highlight
      ? `on ${state.highlight.featureId}: ${state.highlight.text}`
      : state.ambient
        ? "off the map"
        : "";
    statusLine.textContent = held;
  }

  // Remaining-route overlay: ask the service for the path from the
  // feature under the finger to the announced destination.
  async function refreshRoute(): Promise<void> {
    const g = state.guidance;
    if (!g || g.mode !== "street_by_street" || !g.destination || !state.highlight) {
      overlay.routePolyline = undefined;
      return;
    }
    const h = state.highlight;
    const anchor =
      h.kind === "street_edge"
        ? (doc.edges.find((e) => e.id === h.featureId)?.endpoints[0] ?? null)
        : h.featureId;
    if (!anchor) return;
    try {
      const route = await client.route(anchor, g.destination);
      overlay.routePolyline = route.nodes
        .map((id) => nodePositions.get(id))
        .filter((pos): pos is [number, number] => pos !== undefined);
    } catch {
      overlay.routePolyline = undefined;
    }
    redraw();
  }

  function onEvent(event: WireEvent): void {
    state = applyEvent(state, event);
    speech.handle(event);
    if (event.type === "NAV_STEP" || event.type === "NAV_REROUTE") void refreshRoute();
    if (event.type === "NAV_ARRIVED" || event.type === "BEACON_ARRIVED") {
      overlay.routePolyline = undefined;
    }
    redraw();
  }

  // Single subscription, reconnecting after the last seen event.
  void (async () => {
    for (;;) {
      try {
        await client.subscribe(sessionId, state.lastSeq, onEvent);
      } catch (err) {
        statusLine.textContent = `stream lost: ${(err as Error).message}`;
      }
      await sleep(1000);
    }
  })();

  // Left drag drives the virtual pointer; shift or right drag pans.
  let panning: [number, number] | null = null;
  let pointing = false;
  canvas.addEventListener("contextmenu", (e) => e.preventDefault());
  canvas.addEventListener("mousedown", (e) => {
    if (e.button === 2 || e.shiftKey) {
      panning = [e.offsetX, e.offsetY];
      return;
    }
    pointing = true;
    const world = screenToWorld(viewport, e.offsetX, e.offsetY);
    state = applyCommand(state, { type: "pointer", position: world });
    driver.move(world);
    redraw();
  });
  canvas.addEventListener("mousemove", (e) => {
    if (panning) {
      const [px, py] = panning;
      viewport = pan(viewport, e.offsetX - px, e.offsetY - py);
      panning = [e.offsetX, e.offsetY];
      redraw();
      return;
    }
    if (!pointing) return;
    const world = screenToWorld(viewport, e.offsetX, e.offsetY);
    state = applyCommand(state, { type: "pointer", position: world });
    driver.move(world);
    redraw();
  });
  const endDrag = (): void => {
    panning = null;
    if (!pointing) return;
    pointing = false;
    state = applyCommand(state, { type: "pointer", position: null });
    driver.end();
    redraw();
  };
  canvas.addEventListener("mouseup", endDrag);
  canvas.addEventListener("mouseleave", endDrag);
  canvas.addEventListener("wheel", (e) => {
    e.preventDefault();
    viewport = zoomAt(viewport, e.offsetX, e.offsetY, e.deltaY < 0 ? 1.15 : 1 / 1.15);
    redraw();
  });

  // Push-to-talk: hold the button, release to send the typed question.
  talkButton.addEventListener("mousedown", () => {
    state = applyCommand(state, { type: "press" });
    void client.control(sessionId, { t_ms: driver.tMs(), action: "press" });
    redraw();
  });
  talkButton.addEventListener("mouseup", () => {
    void client.control(sessionId, {
      t_ms: driver.tMs(),
      action: "release",
      utterance: question.value,
    });
  });
  haltButton.addEventListener("click", () => {
    void client.control(sessionId, { t_ms: driver.tMs(), action: "halt" });
  });
  speechToggle.addEventListener("change", () => {
    speech.enabled = speechToggle.checked;
  });
  bookmarkButton.addEventListener("click", () => {
    const name = bookmarkName.value.trim();
    if (!name) return;
    state = applyCommand(state, { type: "bookmark", name });
    bookmarkName.value = "";
    redraw();
  });

  redraw();
}

boot().catch((err: Error) => {
  const status = document.getElementById("status");
  if (status) status.textContent = `failed to start: ${err.message}`;
});
