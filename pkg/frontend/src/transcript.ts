// Event console: one plain-text line per wire event, chronological.
// Replaying a recorded event log must reproduce the same transcript
// byte for byte, so this formatting is frozen by golden tests.

import type { WireEvent } from "./types.js";

const KIND_WORD: Record<string, string> = {
  intersection_node: "intersection",
  street_edge: "street",
  poi: "poi",
};

function num(payload: Record<string, unknown>, key: string): number {
  const v = payload[key];
  return typeof v === "number" ? v : NaN;
}

function str(payload: Record<string, unknown>, key: string): string {
  const v = payload[key];
  return typeof v === "string" ? v : "";
}

function stamp(tMs: number): string {
  return `[${String(tMs).padStart(6, " ")} ms]`;
}

export function transcriptLine(event: WireEvent): string {
  const p = event.payload;
  const at = stamp(num(p, "t_ms"));
  switch (event.type) {
    case "AMBIENT_ON":
      return `${at} ambient on`;
    case "AMBIENT_OFF":
      return `${at} ambient off`;
    case "ENTER": {
      const kind = KIND_WORD[str(p, "kind")] ?? str(p, "kind");
      return `${at} enter ${kind} ${str(p, "feature_id")}: ${str(p, "text")}`;
    }
    case "DWELL":
      return `${at} dwell ${str(p, "feature_id")}: ${str(p, "text")}`;
    case "LEAVE":
      return `${at} leave ${str(p, "feature_id")}`;
    case "BUSY_TICK":
      return `${at} busy tick ${num(p, "n")}`;
    case "ANSWER": {
      const muted = p["announced"] === false ? " (not announced)" : "";
      return `${at} answer${muted} "${str(p, "question")}": ${str(p, "text")}`;
    }
    case "NAV_STEP":
      return `${at} step ${num(p, "step")}/${num(p, "of")}: ${str(p, "text")}`;
    case "NAV_REROUTE":
      return `${at} reroute: ${str(p, "text")}`;
    case "NAV_ARRIVED":
    case "BEACON_ARRIVED":
      return `${at} arrived: ${str(p, "text")}`;
    case "BEACON_CUE":
      return `${at} cue: ${str(p, "text")}`;
    case "ERROR":
      return `${at} error: ${str(p, "message")}`;
  }
}

export function renderTranscript(events: WireEvent[]): string {
  return events.map((e) => transcriptLine(e) + "\n").join("");
}
