/** Thin client over the three backend routes the portrait consumes. */

import type { EventKind, EventPayload, PortraitLayout, Recommendation } from "./types";
import { validateLayout } from "./schema";

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly userId: string = "",
  ) {}

  async fetchPortrait(): Promise<PortraitLayout> {
    const res = await fetch(`${this.baseUrl}/portrait/${encodeURIComponent(this.userId)}`);
    if (!res.ok) {
      throw new Error(`portrait request failed: ${res.status}`);
    }
    return validateLayout(await res.json());
  }

  async fetchRecommendations(opts: { postId?: string; top?: number } = {}): Promise<
    Recommendation[]
  > {
    const params = new URLSearchParams();
    if (opts.postId !== undefined) params.set("post_id", opts.postId);
    if (opts.top !== undefined) params.set("top", String(opts.top));
    const query = params.toString();
    const res = await fetch(
      `${this.baseUrl}/recommendations/${encodeURIComponent(this.userId)}${query ? `?${query}` : ""}`,
    );
    if (!res.ok) {
      throw new Error(`recommendations request failed: ${res.status}`);
    }
    return (await res.json()) as Recommendation[];
  }

  /** Fire one interaction event; logging failures never break the scene. */
  emitEvent(kind: EventKind, payload: EventPayload): Promise<void> {
    const body = JSON.stringify({
      timestamp: Math.floor(Date.now() / 1000),
      user_id: this.userId,
      kind,
      payload,
    });
    return fetch(`${this.baseUrl}/events`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body,
    })
      .then(() => undefined)
      .catch(() => undefined);
  }
}
