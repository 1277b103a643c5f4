// Optional speech output. Off by default so tests and CI never touch
// the synthesizer; the app flips it on from a checkbox.

import type { WireEvent } from "./types.js";

export type SpeakFn = (text: string) => void;

const SPOKEN_TYPES = new Set([
  "ENTER",
  "DWELL",
  "ANSWER",
  "NAV_STEP",
  "NAV_REROUTE",
  "NAV_ARRIVED",
  "BEACON_CUE",
  "BEACON_ARRIVED",
]);

export class SpeechOutput {
  enabled = false;
  private readonly speak: SpeakFn;

  constructor(speak?: SpeakFn) {
    this.speak = speak ?? defaultSpeak;
  }

  handle(event: WireEvent): void {
    if (!this.enabled || !SPOKEN_TYPES.has(event.type)) return;
    if (event.type === "ANSWER" && event.payload["announced"] === false) return;
    const text = event.payload["text"];
    if (typeof text === "string" && text.length > 0) this.speak(text);
  }
}

function defaultSpeak(text: string): void {
  if (typeof window === "undefined" || !window.speechSynthesis) return;
  window.speechSynthesis.speak(new SpeechSynthesisUtterance(text));
}
