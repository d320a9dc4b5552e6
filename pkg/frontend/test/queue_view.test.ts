import { describe, expect, it, vi } from "vitest";

import type { ConsoleConfig } from "../src/config.js";
import { renderQueuePage, type QueueCallbacks } from "../src/queue_view.js";
import { makeItem, makeQueueResponse } from "./helpers.js";

function noopCallbacks(): QueueCallbacks {
  return {
    onAction: vi.fn(),
    onOpenPost: vi.fn(),
    onHoverCue: vi.fn(),
    onPage: vi.fn(),
  };
}

function freshConfig(): ConsoleConfig {
  return { hiddenActions: new Set(), moderator: "mod" };
}

describe("renderQueuePage", () => {
  it("renders cue chips verbatim from the server, never re-banding", () => {
    // 37 would fall in a low band under any local rule; the server says
    // "desirable", so the chip must say "desirable".
    const item = makeItem({
      desirability_score: 37,
      cue: { category: "desirable", color_token: "cue-positive", rank: 3 },
    });
    const page = renderQueuePage(
      document,
      makeQueueResponse([item]),
      freshConfig(),
      noopCallbacks(),
    );
    const chip = page.querySelector(".cue-chip")!;
    expect(chip.classList.contains("cue-positive")).toBe(true);
    expect(chip.querySelector(".cue-score")!.textContent).toBe("37");
    expect(chip.querySelector(".cue-label")!.textContent).toBe("Desirable");
  });

  it("keeps items in server order", () => {
    const response = makeQueueResponse([
      makeItem({ id: "t3_c", desirability_score: 10 }),
      makeItem({ id: "t3_a", desirability_score: 99 }),
      makeItem({ id: "t3_b", desirability_score: 50 }),
    ]);
    const page = renderQueuePage(document, response, freshConfig(), noopCallbacks());
    const ids = [...page.querySelectorAll(".queue-item")].map(
      (el) => (el as HTMLElement).dataset.id,
    );
    expect(ids).toEqual(["t3_c", "t3_a", "t3_b"]);
  });

  it("shows the empty-state panel and a zero count badge when filtered out", () => {
    const response = makeQueueResponse([], { total: 0, pages: 1 });
    const page = renderQueuePage(document, response, freshConfig(), noopCallbacks());
    expect(page.querySelector(".count-badge")!.textContent).toBe("0 posts");
    expect(page.querySelector(".empty-state")).not.toBeNull();
    expect(page.querySelector(".queue-list")).toBeNull();
  });

  it("shows all six action buttons by default", () => {
    const page = renderQueuePage(
      document,
      makeQueueResponse([makeItem()]),
      freshConfig(),
      noopCallbacks(),
    );
    const verbs = [...page.querySelectorAll(".action-bar button")].map(
      (el) => (el as HTMLElement).dataset.verb,
    );
    expect(verbs).toEqual([
      "award",
      "flair",
      "highlight",
      "explain",
      "curate",
      "upvote",
    ]);
  });

  it("omits hidden action buttons", () => {
    const config = freshConfig();
    config.hiddenActions.add("curate");
    config.hiddenActions.add("upvote");
    const page = renderQueuePage(
      document,
      makeQueueResponse([makeItem()]),
      config,
      noopCallbacks(),
    );
    const verbs = [...page.querySelectorAll(".action-bar button")].map(
      (el) => (el as HTMLElement).dataset.verb,
    );
    expect(verbs).toEqual(["award", "flair", "highlight", "explain"]);
  });

  it("routes button clicks to the action callback", () => {
    const callbacks = noopCallbacks();
    const item = makeItem();
    const page = renderQueuePage(
      document,
      makeQueueResponse([item]),
      freshConfig(),
      callbacks,
    );
    (page.querySelector(".action-award") as HTMLButtonElement).click();
    expect(callbacks.onAction).toHaveBeenCalledWith(
      "award",
      item,
      expect.any(HTMLButtonElement),
    );
  });

  it("marks curated and highlighted items on their buttons", () => {
    const page = renderQueuePage(
      document,
      makeQueueResponse([makeItem({ curated: true, highlighted: true })]),
      freshConfig(),
      noopCallbacks(),
    );
    expect(page.querySelector(".action-curate")!.textContent).toBe("Curated");
    expect(page.querySelector(".action-highlight")!.textContent).toBe("Highlighted");
    expect(page.querySelector(".curated-badge")).not.toBeNull();
  });

  it("renders the preview and flair text exactly as served", () => {
    const item = makeItem({
      preview: "Adversarial preview: the client must not rebuild this…",
      flair: "Encouraging Flair",
    });
    const page = renderQueuePage(
      document,
      makeQueueResponse([item]),
      freshConfig(),
      noopCallbacks(),
    );
    expect(page.querySelector(".item-preview")!.textContent).toBe(item.preview);
    expect(page.querySelector(".flair-badge")!.textContent).toBe("Encouraging Flair");
  });

  it("wires pagination and disables the rails at the edges", () => {
    const callbacks = noopCallbacks();
    const response = makeQueueResponse([makeItem()], {
      total: 105,
      page: 5,
      pages: 5,
    });
    const page = renderQueuePage(document, response, freshConfig(), callbacks);
    const prev = page.querySelector(".pager-prev") as HTMLButtonElement;
    const next = page.querySelector(".pager-next") as HTMLButtonElement;
    expect(next.disabled).toBe(true);
    expect(prev.disabled).toBe(false);
    prev.click();
    expect(callbacks.onPage).toHaveBeenCalledWith(4);
  });

  it("reports totals from the response, not the visible page", () => {
    const response = makeQueueResponse([makeItem()], {
      total: 105,
      page: 1,
      pages: 5,
    });
    const page = renderQueuePage(document, response, freshConfig(), noopCallbacks());
    expect(page.querySelector(".count-badge")!.textContent).toBe("105 posts");
    expect(page.querySelector(".pager span")!.textContent).toBe("page 1 / 5");
  });
});
