import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { vi } from "vitest";

import type { PortraitLayout, Recommendation } from "../src/types";

const here = dirname(fileURLToPath(import.meta.url));

export function goldenLayout(): PortraitLayout {
  return JSON.parse(readFileSync(join(here, "golden", "layout.json"), "utf-8"));
}

export const SAMPLE_RECS: Recommendation[] = [
  {
    post: {
      id: "dam03-p002",
      author_id: "dam03",
      timestamp: 1750044128,
      text: "turbines #builddamnow concrete megawatts",
      is_retweet: false,
    },
    relevance: 0.43,
    gap: 1.21,
    combined: 0.62,
    matched_topics: ["#builddamnow"],
  },
  {
    post: {
      id: "dam07-p007",
      author_id: "dam07",
      timestamp: 1750260276,
      text: "growth #builddamnow concrete megawatts",
      is_retweet: false,
    },
    relevance: 0.41,
    gap: 1.19,
    combined: 0.6,
    matched_topics: ["#builddamnow", "growth"],
  },
];

export interface FetchLog {
  events: Array<{ kind: string; payload: Record<string, string>; user_id: string }>;
  recommendationCalls: string[];
  failRecommendations: boolean;
}

/** Install a fetch stub covering the three backend routes; returns the call
 * log so tests can assert on emitted events. */
export function installFetchStub(layout?: PortraitLayout): FetchLog {
  const log: FetchLog = { events: [], recommendationCalls: [], failRecommendations: false };
  vi.stubGlobal(
    "fetch",
    vi.fn(async (input: RequestInfo | URL, init?: RequestInit) => {
      const url = String(input);
      if (url.includes("/events")) {
        log.events.push(JSON.parse(String(init?.body)));
        return new Response(null, { status: 204 });
      }
      if (url.includes("/recommendations/")) {
        log.recommendationCalls.push(url);
        if (log.failRecommendations) {
          return new Response(JSON.stringify({ error: "boom" }), { status: 500 });
        }
        return new Response(JSON.stringify(SAMPLE_RECS), { status: 200 });
      }
      if (url.includes("/portrait/") && layout) {
        return new Response(JSON.stringify(layout), { status: 200 });
      }
      return new Response(JSON.stringify({ error: "not found" }), { status: 404 });
    }),
  );
  return log;
}

export function flushAsync(): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, 0));
}
