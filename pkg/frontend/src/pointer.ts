// Virtual pointer: turns a mouse or touch drag into the frame stream a
// camera would produce, at roughly 10 frames per second. The driver
// never interprets events itself; highlights come back over the event
// stream.

import type { FramePayload, WireEvent } from "./types.js";

export type FrameTransport = (frames: FramePayload[]) => Promise<WireEvent[]>;

export interface PointerDriverOptions {
  intervalMs?: number; // minimum spacing between posted samples
  hand?: "left" | "right";
  now?: () => number;
  onError?: (err: Error) => void;
}

export class PointerDriver {
  private readonly post: FrameTransport;
  private readonly intervalMs: number;
  private readonly hand: "left" | "right";
  private readonly now: () => number;
  private readonly onError: (err: Error) => void;
  private readonly epoch: number;

  private active = false;
  private tip: [number, number] | null = null;
  private lastPostT = Number.NEGATIVE_INFINITY;
  private lastT = 0;
  private chain: Promise<void> = Promise.resolve();

  constructor(post: FrameTransport, options: PointerDriverOptions = {}) {
    this.post = post;
    this.intervalMs = options.intervalMs ?? 100;
    this.hand = options.hand ?? "right";
    this.now = options.now ?? (() => performance.now());
    this.onError = options.onError ?? (() => undefined);
    this.epoch = this.now();
  }

  get dragging(): boolean {
    return this.active;
  }

  // Session-clock milliseconds, never decreasing.
  tMs(): number {
    const t = Math.round(this.now() - this.epoch);
    this.lastT = Math.max(this.lastT, t);
    return this.lastT;
  }

  private send(frame: FramePayload): void {
    this.chain = this.chain
      .then(() => this.post([frame]))
      .then(
        () => undefined,
        (err: Error) => this.onError(err),
      );
  }

  // Drag sample; throttled so a fast mouse does not flood the service.
  move(tip: [number, number]): void {
    this.active = true;
    this.tip = tip;
    const t = this.tMs();
    if (t - this.lastPostT < this.intervalMs) return;
    this.lastPostT = t;
    this.send({ t_ms: t, hand: this.hand, tip });
  }

  // Drag released: one no-pointing frame, immediately.
  end(): void {
    this.active = false;
    this.tip = null;
    const t = this.tMs();
    this.lastPostT = t;
    this.send({ t_ms: t, hand: "none" });
  }

  // Timer tick: while dragging, repeat the held tip so dwell can fire;
  // while idle, advance the session clock with an empty frame.
  heartbeat(): void {
    const t = this.tMs();
    if (t - this.lastPostT < this.intervalMs) return;
    this.lastPostT = t;
    if (this.active && this.tip) {
      this.send({ t_ms: t, hand: this.hand, tip: this.tip });
    } else {
      this.send({ t_ms: t, hand: "none" });
    }
  }

  // Wait for every queued post to settle (tests and teardown).
  flush(): Promise<void> {
    return this.chain;
  }
}
