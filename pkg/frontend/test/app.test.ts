import { beforeEach, describe, expect, it } from "vitest";

import { initApp, type AppHandle } from "../src/app.js";
import type { FetchLike } from "../src/api.js";
import { defaultQueueState } from "../src/state.js";
import {
  fakeWin,
  jsonResponse,
  makeFetchStub,
  makeItem,
  makeMeta,
  makeQueueResponse,
  type FetchStub,
  type TestWin,
} from "./helpers.js";

const tick = () => new Promise((resolve) => setTimeout(resolve, 0));

function boot(
  fetchImpl: FetchLike,
  hash = "",
): { handle: AppHandle; root: HTMLElement; win: TestWin } {
  document.body.innerHTML = "";
  const root = document.createElement("div");
  document.body.appendChild(root);
  const win = fakeWin(hash);
  const handle = initApp(root, {
    fetchImpl,
    win: win as unknown as Window,
    debounceMs: 0,
  });
  return { handle, root, win };
}

function standardStub(extra: Parameters<typeof makeFetchStub>[0] = []): FetchStub {
  return makeFetchStub([
    ...extra,
    { match: /\/api\/filters\/meta/, reply: () => makeMeta() },
    {
      match: /\/api\/queue/,
      reply: () => makeQueueResponse([makeItem()]),
    },
  ]);
}

describe("initApp", () => {
  beforeEach(() => {
    document.body.innerHTML = "";
  });

  it("boots into the queue view with panel and items", async () => {
    const stub = standardStub();
    const { handle, root } = boot(stub.fetch);
    await handle.ready;
    expect(root.querySelector(".filter-panel")).not.toBeNull();
    expect(root.querySelectorAll(".queue-item")).toHaveLength(1);
    expect(root.querySelector(".count-badge")!.textContent).toBe("1 posts");
  });

  it("restores filters and sort from the URL hash", async () => {
    const stub = standardStub();
    const { handle, root } = boot(
      stub.fetch,
      "#/queue?sort=most_desirable&min_desirability=70&min_author_karma=17200",
    );
    await handle.ready;
    const queueCall = stub.calls.find((call) => call.url.includes("/api/queue"))!;
    expect(queueCall.url).toContain("sort=most_desirable");
    expect(queueCall.url).toContain("min_desirability=70");
    expect(queueCall.url).toContain("min_author_karma=17200");
    const select = root.querySelector(".sort-select") as HTMLSelectElement;
    expect(select.value).toBe("most_desirable");
    const karmaRow = root.querySelector(
      '.filter-row[data-key="min_author_karma"]',
    )!;
    expect(
      (karmaRow.querySelector("input[type=range]") as HTMLInputElement).value,
    ).toBe("17200");
  });

  it("writes queue state back into the hash on pagination", async () => {
    const stub = makeFetchStub([
      { match: /\/api\/filters\/meta/, reply: () => makeMeta() },
      {
        match: /\/api\/queue/,
        reply: (url) =>
          makeQueueResponse([makeItem()], {
            total: 105,
            pages: 5,
            page: url.includes("page=2") ? 2 : 1,
          }),
      },
    ]);
    const { handle, root, win } = boot(stub.fetch);
    await handle.ready;
    (root.querySelector(".pager-next") as HTMLButtonElement).click();
    await tick();
    expect(win.location.hash).toBe("#/queue?page=2");
    expect(root.querySelector(".pager span")!.textContent).toBe("page 2 / 5");
  });

  it("applies an optimistic upvote and settles on the server echo", async () => {
    let release!: () => void;
    const gate = new Promise<void>((resolve) => (release = resolve));
    const stub = makeFetchStub([
      { match: /\/api\/filters\/meta/, reply: () => makeMeta() },
      {
        match: /\/api\/queue/,
        reply: () => makeQueueResponse([makeItem({ score: 10 })]),
      },
    ]);
    const gated: FetchLike = async (url, init) => {
      if (/\/api\/actions\/upvote/.test(url)) {
        await gate;
        return jsonResponse(200, { action: "upvote", target_id: "t3_demo1", score: 11 });
      }
      return stub.fetch(url, init);
    };
    const { handle, root } = boot(gated);
    await handle.ready;
    const score = root.querySelector(".score-value")!;
    expect(score.textContent).toBe("10");
    (root.querySelector(".action-upvote") as HTMLButtonElement).click();
    expect(score.textContent).toBe("11");
    release();
    await tick();
    expect(score.textContent).toBe("11");
    expect(root.querySelector(".toast-error")).toBeNull();
  });

  it("rolls the optimistic upvote back on 409 and toasts", async () => {
    let release!: () => void;
    const gate = new Promise<void>((resolve) => (release = resolve));
    const stub = makeFetchStub([
      { match: /\/api\/filters\/meta/, reply: () => makeMeta() },
      {
        match: /\/api\/queue/,
        reply: () => makeQueueResponse([makeItem({ score: 10 })]),
      },
    ]);
    const gated: FetchLike = async (url, init) => {
      if (/\/api\/actions\/upvote/.test(url)) {
        await gate;
        return jsonResponse(409, {
          error: "already_voted",
          detail: "mod already upvoted t3_demo1",
        });
      }
      return stub.fetch(url, init);
    };
    const { handle, root } = boot(gated);
    await handle.ready;
    const score = root.querySelector(".score-value")!;
    (root.querySelector(".action-upvote") as HTMLButtonElement).click();
    expect(score.textContent).toBe("11");
    release();
    await tick();
    expect(score.textContent).toBe("10");
    const toast = root.querySelector(".toast-error")!;
    expect(toast.textContent).toBe("mod already upvoted t3_demo1");
  });

  it("drops a stale queue response (latest wins)", async () => {
    let releaseOld!: () => void;
    const oldGate = new Promise<void>((resolve) => (releaseOld = resolve));
    const fetchImpl: FetchLike = async (url) => {
      if (url.includes("/api/filters/meta")) return jsonResponse(200, makeMeta());
      if (url.includes("/api/queue")) {
        if (url.includes("page=2")) {
          return jsonResponse(
            200,
            makeQueueResponse([makeItem({ id: "t3_new" })], { page: 2, pages: 2, total: 30 }),
          );
        }
        await oldGate;
        return jsonResponse(
          200,
          makeQueueResponse([makeItem({ id: "t3_old" })], { pages: 2, total: 30 }),
        );
      }
      return jsonResponse(404, { error: "not_found", detail: url });
    };
    const { handle, root } = boot(fetchImpl);
    await handle.navigate({
      view: "queue",
      state: { ...defaultQueueState(), page: 2 },
    });
    expect(root.querySelectorAll(".queue-item")).toHaveLength(1);
    expect(
      (root.querySelector(".queue-item") as HTMLElement).dataset.id,
    ).toBe("t3_new");
    releaseOld();
    await tick();
    // the slow page-1 response lost the race and must not replace page 2
    expect(
      (root.querySelector(".queue-item") as HTMLElement).dataset.id,
    ).toBe("t3_new");
    expect(root.querySelectorAll(".queue-page")).toHaveLength(1);
  });

  it("keeps stale data on a failed refetch and raises a toast", async () => {
    let calls = 0;
    const fetchImpl: FetchLike = async (url) => {
      if (url.includes("/api/filters/meta")) return jsonResponse(200, makeMeta());
      if (url.includes("/api/queue")) {
        calls += 1;
        if (calls > 1) {
          return jsonResponse(500, {
            error: "runtime_error",
            detail: "corpus unavailable",
          });
        }
        return jsonResponse(200, makeQueueResponse([makeItem()]));
      }
      return jsonResponse(404, { error: "not_found", detail: url });
    };
    const { handle, root } = boot(fetchImpl);
    await handle.ready;
    await handle.refreshQueue();
    expect(root.querySelectorAll(".queue-item")).toHaveLength(1);
    expect(root.querySelector(".toast-error")!.textContent).toBe(
      "corpus unavailable",
    );
  });

  it("navigates to best-of on external hash changes", async () => {
    const stub = standardStub([
      {
        match: /\/api\/bestof\/current/,
        reply: () => ({
          period: "2024-W05",
          period_start: 0,
          period_end: 1,
          title: "Best of the week",
          submissions: [],
          comments: [],
          rendered_markdown: "# Best of the week\n\n## Submissions\n\n—\n\n## Comments\n\n—\n",
        }),
      },
    ]);
    const { handle, root, win } = boot(stub.fetch);
    await handle.ready;
    win.location.hash = "#/bestof";
    win.fire("hashchange");
    await tick();
    expect(root.querySelector(".bestof-view h1")!.textContent).toBe(
      "Best of the week",
    );
    expect(root.querySelectorAll(".bestof-empty")).toHaveLength(2);
  });

  it("hiding an action via settings re-renders without that button", async () => {
    const stub = standardStub();
    const { handle, root, win } = boot(stub.fetch);
    await handle.ready;
    expect(root.querySelector(".action-curate")).not.toBeNull();
    const toggle = root.querySelector(
      '.settings-panel input[data-verb="curate"]',
    ) as HTMLInputElement;
    toggle.checked = false;
    toggle.dispatchEvent(new Event("change", { bubbles: true }));
    expect(root.querySelector(".action-curate")).toBeNull();
    expect(root.querySelector(".action-award")).not.toBeNull();
    expect(win.localStorage.getItem("posiqueue-console-config")).toContain(
      "curate",
    );
  });

  it("flair button opens a picker and posts the chosen flair", async () => {
    const stub = standardStub([
      {
        match: /\/api\/actions\/flair/,
        method: "POST",
        reply: (_url, body) => ({
          action: "flair",
          target_id: "t3_demo1",
          flair: (body as { flair: string }).flair,
        }),
      },
    ]);
    const { handle, root } = boot(stub.fetch);
    await handle.ready;
    (root.querySelector(".action-flair") as HTMLButtonElement).click();
    await tick();
    const picker = root.querySelector(".flair-picker")!;
    const choices = [...picker.querySelectorAll("button")].map(
      (button) => button.textContent,
    );
    expect(choices).toEqual([
      "Helpful Post Flair",
      "Encouraging Flair",
      "Mod Pick Flair",
      "✕",
    ]);
    (picker.querySelector("button") as HTMLButtonElement).click();
    await tick();
    const post = stub.calls.find((call) => call.method === "POST")!;
    expect(post.body).toMatchObject({
      target_id: "t3_demo1",
      flair: "Helpful Post Flair",
    });
  });

  it("clicking curate on an already-curated item posts uncurate", async () => {
    const stub = makeFetchStub([
      { match: /\/api\/filters\/meta/, reply: () => makeMeta() },
      {
        match: /\/api\/queue/,
        reply: () => makeQueueResponse([makeItem({ curated: true })]),
      },
      {
        match: /\/api\/actions\/uncurate/,
        method: "POST",
        reply: () => ({
          action: "uncurate",
          target_id: "t3_demo1",
          changed: true,
        }),
      },
    ]);
    const { handle, root } = boot(stub.fetch);
    await handle.ready;
    (root.querySelector(".action-curate") as HTMLButtonElement).click();
    await tick();
    const post = stub.calls.find((call) => call.method === "POST")!;
    expect(post.url).toBe("/api/actions/uncurate");
  });

  it("selection lands in the hash and survives a re-parse", async () => {
    const stub = standardStub();
    const { handle, root, win } = boot(stub.fetch);
    await handle.ready;
    const card = root.querySelector(".queue-item") as HTMLElement;
    card.querySelector(".item-preview")!.dispatchEvent(
      new MouseEvent("click", { bubbles: true }),
    );
    expect(win.location.hash).toBe("#/queue?selected=t3_demo1");
    expect(card.classList.contains("selected")).toBe(true);
  });
});
