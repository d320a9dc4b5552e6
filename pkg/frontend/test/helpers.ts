import type { FetchLike } from "../src/api.js";
import type {
  CueView,
  FiltersMeta,
  QueueItem,
  QueueResponse,
} from "../src/types.js";

export interface RecordedCall {
  url: string;
  method: string;
  body: unknown;
}

export interface StubRoute {
  match: RegExp;
  method?: string;
  status?: number;
  reply: (url: string, body: unknown) => unknown;
}

export interface FetchStub {
  fetch: FetchLike;
  calls: RecordedCall[];
}

export function jsonResponse(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

/** Dispatches requests against ordered regex routes and records every call. */
export function makeFetchStub(routes: StubRoute[]): FetchStub {
  const calls: RecordedCall[] = [];
  const impl: FetchLike = async (url, init) => {
    const method = init?.method ?? "GET";
    let body: unknown = null;
    if (typeof init?.body === "string") body = JSON.parse(init.body);
    calls.push({ url, method, body });
    for (const route of routes) {
      if ((route.method ?? "GET") !== method) continue;
      if (!route.match.test(url)) continue;
      return jsonResponse(route.status ?? 200, route.reply(url, body));
    }
    return jsonResponse(404, { error: "not_found", detail: `no route for ${url}` });
  };
  return { fetch: impl, calls };
}

export interface TestWin {
  location: { hash: string };
  localStorage: Storage;
  addEventListener(type: string, fn: () => void): void;
  fire(type: string): void;
  POSIQUEUE_API_BASE?: string;
}

/** Minimal window stand-in: hash routing, storage, and event fan-out. */
export function fakeWin(initialHash = ""): TestWin {
  const listeners: Record<string, (() => void)[]> = {};
  const storage = new Map<string, string>();
  return {
    location: { hash: initialHash },
    localStorage: {
      getItem: (key: string) => storage.get(key) ?? null,
      setItem: (key: string, value: string) => void storage.set(key, value),
      removeItem: (key: string) => void storage.delete(key),
      clear: () => storage.clear(),
      key: () => null,
      length: 0,
    } as Storage,
    addEventListener(type, fn) {
      (listeners[type] ??= []).push(fn);
    },
    fire(type) {
      for (const fn of listeners[type] ?? []) fn();
    },
  };
}

export function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export const NEUTRAL_CUE: CueView = {
  category: "neutral",
  color_token: "cue-neutral",
  rank: 2,
};

export function makeItem(overrides: Partial<QueueItem> = {}): QueueItem {
  return {
    id: "t3_demo1",
    kind: "post",
    title: "A demo post",
    preview: "Body preview text.",
    subreddit: "demosub",
    created_utc: 1_706_700_000,
    score: 10,
    num_reports: 0,
    desirability_score: 50,
    cue: { ...NEUTRAL_CUE },
    author: { id: "t2_a1", name: "alice", karma: 1200, account_age_days: 400 },
    metrics: {
      desirability: 50,
      score: 10,
      author_karma: 1200,
      author_age_days: 400,
      avg_comment_desirability: 0,
      avg_comment_score: 0,
      newcomer_commenters: 0,
    },
    comment_count: 0,
    award_count: 0,
    flair: null,
    curated: false,
    highlighted: false,
    upvote_count: 0,
    ...overrides,
  };
}

export function makeQueueResponse(
  items: QueueItem[],
  overrides: Partial<QueueResponse> = {},
): QueueResponse {
  return {
    items,
    total: items.length,
    page: 1,
    page_size: 25,
    pages: Math.max(1, Math.ceil(items.length / 25)),
    sort: "newest",
    filters: {},
    ...overrides,
  };
}

export function makeMeta(overrides: Partial<FiltersMeta> = {}): FiltersMeta {
  return {
    filters: [
      { key: "min_desirability", metric: "desirability", label: "Desirability", max: 100, step: 1 },
      { key: "min_score", metric: "score", label: "Score", max: 180, step: 1 },
      { key: "min_author_karma", metric: "author_karma", label: "Author karma", max: 24300, step: 1 },
      { key: "min_author_age_days", metric: "author_age_days", label: "Author account age (days)", max: 3200.5, step: 0.1 },
      { key: "min_avg_comment_desirability", metric: "avg_comment_desirability", label: "Avg comment desirability", max: 90, step: 1 },
      { key: "min_avg_comment_score", metric: "avg_comment_score", label: "Avg comment score", max: 60, step: 1 },
      { key: "min_newcomer_commenters", metric: "newcomer_commenters", label: "Newcomer commenters", max: 5, step: 1 },
    ],
    sorts: [
      "newest",
      "oldest",
      "most_reported",
      "most_desirable",
      "highest_score",
      "newest_author",
      "highest_karma",
      "highest_comment_desirability",
      "highest_comment_score",
      "most_newcomer_comments",
    ],
    disabled_sorts: ["most_reported"],
    default_sort: "newest",
    newcomer_threshold_days: 30,
    cue_categories: [
      { category: "highly_undesirable", color_token: "cue-strong-negative", rank: 0 },
      { category: "undesirable", color_token: "cue-negative", rank: 1 },
      { category: "neutral", color_token: "cue-neutral", rank: 2 },
      { category: "desirable", color_token: "cue-positive", rank: 3 },
      { category: "highly_desirable", color_token: "cue-strong-positive", rank: 4 },
    ],
    flairs: ["Helpful Post Flair", "Encouraging Flair", "Mod Pick Flair"],
    page_size: { default: 25, max: 100 },
    ...overrides,
  };
}
