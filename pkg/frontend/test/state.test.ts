import { describe, expect, it, vi } from "vitest";

import {
  debounce,
  defaultQueueState,
  FILTER_KEYS,
  parseHash,
  queueStateToHash,
  routeToHash,
  snapToStep,
  type QueueViewState,
} from "../src/state.js";
import { mulberry32 } from "./helpers.js";

describe("snapToStep", () => {
  it("clamps into [0, max]", () => {
    expect(snapToStep(-5, 1, 100)).toBe(0);
    expect(snapToStep(250, 1, 100)).toBe(100);
  });

  it("snaps to the metric step grid", () => {
    expect(snapToStep(70.4, 1, 100)).toBe(70);
    expect(snapToStep(70.6, 1, 100)).toBe(71);
    expect(snapToStep(12.34, 0.1, 100)).toBe(12.3);
  });

  it("kills float residue on tenth-steps", () => {
    expect(snapToStep(0.1 + 0.2, 0.1, 10)).toBe(0.3);
  });

  it("accepts the karma threshold used in the walkthrough", () => {
    expect(snapToStep(17200, 1, 24300)).toBe(17200);
  });
});

describe("hash round trip", () => {
  it("default state maps to the bare queue route", () => {
    expect(queueStateToHash(defaultQueueState())).toBe("#/queue");
    const route = parseHash("#/queue");
    expect(route).toEqual({ view: "queue", state: defaultQueueState() });
  });

  it("restores sort, page, filters, and selection", () => {
    const state: QueueViewState = {
      sort: "most_desirable",
      page: 3,
      filters: { min_desirability: 70, min_author_karma: 17200 },
      selection: "t3_abc",
    };
    const route = parseHash(queueStateToHash(state));
    expect(route).toEqual({ view: "queue", state });
  });

  it("round-trips random states (seeded sweep)", () => {
    const rng = mulberry32(42);
    for (let trial = 0; trial < 300; trial++) {
      const state = defaultQueueState();
      const sorts = ["newest", "oldest", "most_desirable", "highest_karma"];
      state.sort = sorts[Math.floor(rng() * sorts.length)];
      state.page = 1 + Math.floor(rng() * 9);
      for (const key of FILTER_KEYS) {
        if (rng() < 0.4) {
          // one-decimal values cover the 0.1-step age metric
          state.filters[key] = Math.round(rng() * 1000) / 10;
        }
      }
      if (rng() < 0.3) state.selection = `t3_${Math.floor(rng() * 1e6)}`;
      expect(parseHash(queueStateToHash(state))).toEqual({
        view: "queue",
        state,
      });
    }
  });

  it("parses post and bestof routes", () => {
    expect(parseHash("#/posts/t3_x1")).toEqual({ view: "post", id: "t3_x1" });
    expect(parseHash("#/bestof")).toEqual({ view: "bestof" });
    expect(routeToHash({ view: "post", id: "t3_x1" })).toBe("#/posts/t3_x1");
    expect(routeToHash({ view: "bestof" })).toBe("#/bestof");
  });

  it("ignores malformed pages and negative thresholds", () => {
    const route = parseHash("#/queue?page=zero&min_score=-4&min_desirability=55");
    expect(route.view).toBe("queue");
    if (route.view !== "queue") return;
    expect(route.state.page).toBe(1);
    expect(route.state.filters).toEqual({ min_desirability: 55 });
  });

  it("treats an empty hash as the default queue", () => {
    expect(parseHash("")).toEqual({ view: "queue", state: defaultQueueState() });
  });
});

describe("debounce", () => {
  it("fires once on the trailing edge", () => {
    vi.useFakeTimers();
    const hits: number[] = [];
    const burst = debounce((n: number) => hits.push(n), 200);
    burst(1);
    burst(2);
    burst(3);
    vi.advanceTimersByTime(199);
    expect(hits).toEqual([]);
    vi.advanceTimersByTime(1);
    expect(hits).toEqual([3]);
    vi.useRealTimers();
  });
});
