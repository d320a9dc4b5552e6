import { ApiClient, ApiError, type FetchLike } from "./api.js";
import { renderBestofView } from "./bestof_view.js";
import {
  apiBaseUrl,
  loadConsoleConfig,
  saveConsoleConfig,
  type ConsoleConfig,
} from "./config.js";
import { openCurateDialog } from "./curate_dialog.js";
import { openExplainModal } from "./explain_modal.js";
import { initFilterPanel, type FilterPanelHandle } from "./filter_panel.js";
import {
  hidePopover,
  renderCommentHover,
  renderPostHover,
  showPopover,
} from "./hover.js";
import { renderPostView } from "./post_view.js";
import { renderQueuePage, type QueueCallbacks } from "./queue_view.js";
import { initSettingsPanel } from "./settings_panel.js";
import {
  defaultQueueState,
  parseHash,
  routeToHash,
  type FilterKey,
  type QueueViewState,
  type Route,
} from "./state.js";
import { createToastHost } from "./toast.js";
import type { FiltersMeta, QueueItem, QueueResponse } from "./types.js";

export interface AppOptions {
  fetchImpl?: FetchLike;
  win?: Window;
  debounceMs?: number;
}

export interface AppHandle {
  element: HTMLElement;
  ready: Promise<void>;
  navigate(route: Route): Promise<void>;
  refreshQueue(): Promise<void>;
  api: ApiClient;
}

function describeError(error: unknown): string {
  if (error instanceof ApiError) return error.detail;
  return error instanceof Error ? error.message : String(error);
}

export function initApp(root: HTMLElement, options: AppOptions = {}): AppHandle {
  const win = options.win ?? window;
  const doc = root.ownerDocument;
  const api = new ApiClient(apiBaseUrl(win), options.fetchImpl);
  const config: ConsoleConfig = loadConsoleConfig(win.localStorage);
  const toast = createToastHost(root);

  root.classList.add("console-root");
  const header = doc.createElement("header");
  header.className = "console-header";
  const nav = doc.createElement("nav");
  const queueLink = doc.createElement("a");
  queueLink.href = "#/queue";
  queueLink.textContent = "Queue";
  const bestofLink = doc.createElement("a");
  bestofLink.href = "#/bestof";
  bestofLink.textContent = "Best of";
  nav.append(queueLink, bestofLink);
  header.appendChild(nav);
  root.appendChild(header);

  const layout = doc.createElement("div");
  layout.className = "console-layout";
  const sidebar = doc.createElement("div");
  sidebar.className = "console-sidebar";
  const content = doc.createElement("main");
  content.className = "console-content";
  layout.append(sidebar, content);
  root.appendChild(layout);

  let queueState: QueueViewState = defaultQueueState();
  let panel: FilterPanelHandle | null = null;
  let meta: FiltersMeta | null = null;
  let lastQueue: QueueResponse | null = null;
  let inflight: AbortController | null = null;
  let appliedHash = "";

  const setContent = (el: HTMLElement) => {
    content.innerHTML = "";
    content.appendChild(el);
  };

  const setHash = (hash: string) => {
    appliedHash = hash;
    if (win.location.hash !== hash) win.location.hash = hash;
  };

  const hoverCard = (chip: HTMLElement): HTMLElement =>
    (chip.closest(".queue-item, .comment, .post-header") as HTMLElement) ??
    content;

  const onHoverPost = async (
    id: string,
    commentCount: number,
    chip: HTMLElement,
  ) => {
    const card = hoverCard(chip);
    try {
      const hover = await api.postHover(id);
      showPopover(card, renderPostHover(doc, hover, commentCount));
      chip.addEventListener("mouseleave", () => hidePopover(card), {
        once: true,
      });
    } catch (error) {
      toast.show(describeError(error), "error");
    }
  };

  const onHoverComment = async (id: string, chip: HTMLElement) => {
    const card = hoverCard(chip);
    try {
      const hover = await api.commentHover(id);
      showPopover(card, renderCommentHover(doc, hover));
      chip.addEventListener("mouseleave", () => hidePopover(card), {
        once: true,
      });
    } catch (error) {
      toast.show(describeError(error), "error");
    }
  };

  const openFlairPicker = (item: QueueItem, button: HTMLButtonElement) => {
    const card = button.closest(".queue-item") ?? content;
    card.querySelectorAll(".flair-picker").forEach((old) => old.remove());
    const picker = doc.createElement("div");
    picker.className = "flair-picker";
    for (const flair of meta?.flairs ?? []) {
      const choice = doc.createElement("button");
      choice.textContent = flair;
      choice.addEventListener("click", async () => {
        picker.remove();
        try {
          await api.action("flair", {
            target_id: item.id,
            flair,
            moderator: config.moderator,
          });
          toast.show(`Flaired ${item.id} as "${flair}"`, "info");
          await refreshQueue();
        } catch (error) {
          toast.show(describeError(error), "error");
        }
      });
      picker.appendChild(choice);
    }
    const dismiss = doc.createElement("button");
    dismiss.className = "flair-dismiss";
    dismiss.textContent = "✕";
    dismiss.addEventListener("click", () => picker.remove());
    picker.appendChild(dismiss);
    card.appendChild(picker);
  };

  const onUpvote = async (item: QueueItem, button: HTMLButtonElement) => {
    const card = button.closest(".queue-item");
    const scoreEl = card?.querySelector(".score-value") ?? null;
    const previous = scoreEl?.textContent ?? null;
    // Optimistic bump; the server echo (or a 409) settles the real value.
    if (scoreEl) scoreEl.textContent = String(item.score + 1);
    try {
      const result = await api.action("upvote", {
        target_id: item.id,
        moderator: config.moderator,
      });
      if (scoreEl && result.score !== undefined) {
        scoreEl.textContent = String(result.score);
      }
    } catch (error) {
      if (scoreEl && previous !== null) scoreEl.textContent = previous;
      toast.show(describeError(error), "error");
    }
  };

  const queueCallbacks: QueueCallbacks = {
    onAction: async (verb, item, button) => {
      if (verb === "upvote") return onUpvote(item, button);
      if (verb === "flair") return openFlairPicker(item, button);
      if (verb === "explain") {
        try {
          const { reasons } = await api.reasons();
          const modal = openExplainModal(doc, root, api, item, reasons);
          if (await modal.done) {
            toast.show(`Posted an explanation on ${item.id}`, "info");
            await refreshQueue();
          }
        } catch (error) {
          toast.show(describeError(error), "error");
        }
        return;
      }
      if (verb === "curate") {
        if (item.curated) {
          try {
            await api.action("uncurate", {
              target_id: item.id,
              moderator: config.moderator,
            });
            toast.show(`Removed ${item.id} from the best-of thread`, "info");
            await refreshQueue();
          } catch (error) {
            toast.show(describeError(error), "error");
          }
          return;
        }
        const dialog = openCurateDialog(
          doc,
          root,
          api,
          item.id,
          item.title ?? item.id,
        );
        const result = await dialog.done;
        if (result) {
          toast.show(`Added ${item.id} to the best-of thread`, "info");
          await refreshQueue();
        }
        return;
      }
      try {
        if (verb === "award") {
          const result = await api.action("award", {
            target_id: item.id,
            moderator: config.moderator,
          });
          toast.show(`Award #${result.award_count} on ${item.id}`, "info");
        } else if (verb === "highlight") {
          const toggled = item.highlighted ? "unhighlight" : "highlight";
          await api.action(toggled, {
            target_id: item.id,
            moderator: config.moderator,
          });
          toast.show(
            item.highlighted
              ? `Removed ${item.id} from highlights`
              : `Highlighted ${item.id}`,
            "info",
          );
        }
        await refreshQueue();
      } catch (error) {
        toast.show(describeError(error), "error");
      }
    },
    onOpenPost: (id) => void navigate({ view: "post", id }),
    onHoverCue: (item, chip) => void onHoverPost(item.id, item.comment_count, chip),
    onPage: (page) => {
      queueState = { ...queueState, page };
      setHash(routeToHash({ view: "queue", state: queueState }));
      void loadQueue();
    },
  };

  const renderQueue = (response: QueueResponse) => {
    lastQueue = response;
    const page = renderQueuePage(doc, response, config, queueCallbacks);
    if (queueState.selection) {
      page
        .querySelector(`.queue-item[data-id="${queueState.selection}"]`)
        ?.classList.add("selected");
    }
    page.querySelectorAll(".queue-item").forEach((card) => {
      card.addEventListener("click", (event) => {
        const target = event.target as HTMLElement;
        if (target.closest("button, a, input")) return;
        queueState = { ...queueState, selection: (card as HTMLElement).dataset.id ?? null };
        setHash(routeToHash({ view: "queue", state: queueState }));
        page
          .querySelectorAll(".queue-item.selected")
          .forEach((el) => el.classList.remove("selected"));
        card.classList.add("selected");
      });
    });
    setContent(page);
  };

  // Latest-wins: a newer request aborts the previous one, and a response
  // that lost the race is dropped instead of clobbering fresher data.
  const loadQueue = async (): Promise<void> => {
    inflight?.abort();
    const controller = new AbortController();
    inflight = controller;
    try {
      const response = await api.queue(
        {
          sort: queueState.sort,
          page: queueState.page,
          filters: queueState.filters as Record<string, number>,
        },
        controller.signal,
      );
      if (inflight !== controller) return;
      renderQueue(response);
    } catch (error) {
      if (controller.signal.aborted) return;
      toast.show(describeError(error), "error");
    }
  };

  const refreshQueue = (): Promise<void> => loadQueue();

  const ensurePanel = async (): Promise<void> => {
    if (panel) return;
    meta = await api.filtersMeta();
    panel = initFilterPanel(
      doc,
      meta,
      queueState.filters as Record<string, number>,
      queueState.sort,
      (change) => {
        queueState = {
          ...queueState,
          sort: change.sort,
          page: 1,
          filters: change.filters as Partial<Record<FilterKey, number>>,
        };
        setHash(routeToHash({ view: "queue", state: queueState }));
        void loadQueue();
      },
      options.debounceMs ?? 250,
    );
    sidebar.appendChild(panel.element);
    sidebar.appendChild(
      initSettingsPanel(doc, config, (updated) => {
        saveConsoleConfig(win.localStorage, updated);
        if (lastQueue) renderQueue(lastQueue);
      }),
    );
  };

  const handleRoute = async (route: Route): Promise<void> => {
    if (route.view === "queue") {
      queueState = route.state;
      sidebar.hidden = false;
      await ensurePanel();
      panel?.update(queueState.filters as Record<string, number>, queueState.sort);
      await loadQueue();
      return;
    }
    sidebar.hidden = true;
    if (route.view === "post") {
      try {
        const detail = await api.postDetail(route.id);
        setContent(
          renderPostView(doc, detail, {
            onHoverPostCue: (d, chip) =>
              void onHoverPost(d.id, d.comment_count, chip),
            onHoverCommentCue: (c, chip) => void onHoverComment(c.id, chip),
            onBack: () =>
              void navigate({ view: "queue", state: queueState }),
          }),
        );
      } catch (error) {
        toast.show(describeError(error), "error");
      }
      return;
    }
    try {
      const thread = await api.bestofCurrent();
      setContent(
        renderBestofView(doc, thread, (id) =>
          void navigate({ view: "post", id }),
        ),
      );
    } catch (error) {
      toast.show(describeError(error), "error");
    }
  };

  const navigate = (route: Route): Promise<void> => {
    setHash(routeToHash(route));
    return handleRoute(route);
  };

  win.addEventListener("hashchange", () => {
    const hash = win.location.hash || "#/queue";
    if (hash === appliedHash) return;
    appliedHash = hash;
    void handleRoute(parseHash(hash));
  });

  appliedHash = win.location.hash || "#/queue";
  const ready = handleRoute(parseHash(appliedHash));

  return { element: root, ready, navigate, refreshQueue, api };
}
