// HTTP + SSE client for the engine service. This is the only channel
// the UI talks through; every behavior downstream is a reaction to the
// wire events these calls produce.

import { readSseStream } from "./sse.js";
import type {
  ControlPayload,
  FramePayload,
  MapDocument,
  WireEvent,
  WireEventType,
} from "./types.js";

export class ServiceError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
  }
}

async function expectOk(response: Response): Promise<Response> {
  if (!response.ok) {
    let detail = response.statusText;
    try {
      const body = (await response.json()) as { detail?: string };
      if (body.detail) detail = body.detail;
    } catch {
      // non-JSON error body, keep the status text
    }
    throw new ServiceError(response.status, detail);
  }
  return response;
}

interface EventsBody {
  events: WireEvent[];
}

export interface RouteResult {
  from: string;
  to: string;
  nodes: string[];
  length_m: number;
  walking_time_s: number;
  instructions: string[];
}

export class EngineClient {
  constructor(readonly baseUrl: string) {}

  private url(path: string): string {
    return this.baseUrl.replace(/\/$/, "") + path;
  }

  private async postJson<T>(path: string, body: unknown): Promise<T> {
    const response = await expectOk(
      await fetch(this.url(path), {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(body),
      }),
    );
    return (await response.json()) as T;
  }

  async health(): Promise<{ ok: boolean; preset: number; map: string }> {
    const response = await expectOk(await fetch(this.url("/health")));
    return (await response.json()) as { ok: boolean; preset: number; map: string };
  }

  async mapDocument(): Promise<MapDocument> {
    const response = await expectOk(await fetch(this.url("/map")));
    return (await response.json()) as MapDocument;
  }

  async ask(
    text: string,
    position?: [number, number],
    now?: string,
  ): Promise<{ answer: string; tool_calls: unknown[]; combined_prompt: string }> {
    return this.postJson("/ask", { text, position, now });
  }

  async route(from: string, to: string, accessible = false): Promise<RouteResult> {
    const params = new URLSearchParams({ from, to, accessible: String(accessible) });
    const response = await expectOk(await fetch(this.url(`/route?${params}`)));
    return (await response.json()) as RouteResult;
  }

  async createSession(now?: string): Promise<string> {
    const body = await this.postJson<{ session_id: string }>("/sessions", now ? { now } : {});
    return body.session_id;
  }

  async postFrames(sessionId: string, frames: FramePayload[]): Promise<WireEvent[]> {
    const body = await this.postJson<EventsBody>(`/sessions/${sessionId}/frames`, { frames });
    return body.events;
  }

  async control(sessionId: string, payload: ControlPayload): Promise<WireEvent[]> {
    const body = await this.postJson<EventsBody>(`/sessions/${sessionId}/control`, payload);
    return body.events;
  }

  // Single long-lived subscription; resolves when the stream closes or
  // the signal aborts. Events arrive in seq order starting after `after`.
  async subscribe(
    sessionId: string,
    after: number,
    onEvent: (event: WireEvent) => void,
    signal?: AbortSignal,
  ): Promise<void> {
    const response = await expectOk(
      await fetch(this.url(`/sessions/${sessionId}/events?after=${after}`), { signal }),
    );
    if (!response.body) throw new ServiceError(0, "event stream has no body");
    try {
      await readSseStream(response.body, (frame) => {
        onEvent({
          seq: frame.id,
          type: frame.event as WireEventType,
          payload: JSON.parse(frame.data) as Record<string, unknown>,
        });
      });
    } catch (err) {
      if ((err as Error).name !== "AbortError") throw err;
    }
  }
}
