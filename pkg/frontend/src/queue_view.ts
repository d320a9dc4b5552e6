import { categoryLabel, formatAge, formatKarma, formatTimestamp } from "./format.js";
import type { ConsoleConfig } from "./config.js";
import { ACTION_BUTTONS } from "./config.js";
import type { ActionVerb, QueueItem, QueueResponse } from "./types.js";

export interface QueueCallbacks {
  onAction(verb: ActionVerb, item: QueueItem, button: HTMLButtonElement): void;
  onOpenPost(id: string): void;
  onHoverCue(item: QueueItem, chip: HTMLElement): void;
  onPage(page: number): void;
}

const ACTION_LABELS: Record<string, string> = {
  award: "\u{1F396} Award",
  flair: "Flair",
  highlight: "Highlight",
  explain: "Explain",
  curate: "Curate",
  upvote: "▲ Upvote",
};

export function renderCueChip(
  doc: Document,
  cue: { category: string; color_token: string },
  score: number,
): HTMLElement {
  const chip = doc.createElement("span");
  // Color and label come straight from the server's category token.
  chip.className = `cue-chip ${cue.color_token}`;
  chip.dataset.category = cue.category;
  chip.innerHTML = "";
  const value = doc.createElement("strong");
  value.className = "cue-score";
  value.textContent = String(score);
  const label = doc.createElement("span");
  label.className = "cue-label";
  label.textContent = categoryLabel(cue.category);
  chip.append(value, label);
  return chip;
}

function renderActionBar(
  doc: Document,
  item: QueueItem,
  config: ConsoleConfig,
  callbacks: QueueCallbacks,
): HTMLElement {
  const bar = doc.createElement("div");
  bar.className = "action-bar";
  for (const verb of ACTION_BUTTONS) {
    if (config.hiddenActions.has(verb)) continue;
    const button = doc.createElement("button");
    button.className = `action-${verb}`;
    button.dataset.verb = verb;
    button.textContent = ACTION_LABELS[verb];
    if (verb === "curate" && item.curated) {
      button.textContent = "Curated";
      button.classList.add("active");
    }
    if (verb === "highlight" && item.highlighted) {
      button.textContent = "Highlighted";
      button.classList.add("active");
    }
    button.addEventListener("click", () =>
      callbacks.onAction(verb, item, button),
    );
    bar.appendChild(button);
  }
  return bar;
}

export function renderQueueItem(
  doc: Document,
  item: QueueItem,
  config: ConsoleConfig,
  callbacks: QueueCallbacks,
): HTMLElement {
  const card = doc.createElement("article");
  card.className = "queue-item";
  card.dataset.id = item.id;

  const chip = renderCueChip(doc, item.cue, item.desirability_score);
  chip.addEventListener("mouseenter", () => callbacks.onHoverCue(item, chip));
  card.appendChild(chip);

  const main = doc.createElement("div");
  main.className = "item-main";

  const title = doc.createElement("a");
  title.className = "item-title";
  title.href = `#/posts/${encodeURIComponent(item.id)}`;
  title.textContent = item.title ?? "(untitled)";
  title.addEventListener("click", (event) => {
    event.preventDefault();
    callbacks.onOpenPost(item.id);
  });
  main.appendChild(title);

  if (item.flair) {
    const flair = doc.createElement("span");
    flair.className = "flair-badge";
    flair.textContent = item.flair;
    main.appendChild(flair);
  }
  if (item.curated) {
    const badge = doc.createElement("span");
    badge.className = "curated-badge";
    badge.textContent = "★ Best of";
    main.appendChild(badge);
  }

  const byline = doc.createElement("div");
  byline.className = "item-byline";
  const score = doc.createElement("span");
  score.className = "score-value";
  score.textContent = String(item.score);
  byline.append(
    doc.createTextNode(
      `${item.author.name} · ${formatKarma(item.author.karma)} karma · ` +
        `account ${formatAge(item.author.account_age_days)} · ` +
        `${formatTimestamp(item.created_utc)} · score `,
    ),
    score,
    doc.createTextNode(` · ${item.comment_count} comments`),
  );
  if (item.award_count > 0) {
    byline.appendChild(doc.createTextNode(` · ${item.award_count} awards`));
  }
  main.appendChild(byline);

  const preview = doc.createElement("p");
  preview.className = "item-preview";
  preview.textContent = item.preview;
  main.appendChild(preview);

  main.appendChild(renderActionBar(doc, item, config, callbacks));
  card.appendChild(main);
  return card;
}

export function renderQueuePage(
  doc: Document,
  response: QueueResponse,
  config: ConsoleConfig,
  callbacks: QueueCallbacks,
): HTMLElement {
  const page = doc.createElement("section");
  page.className = "queue-page";

  const header = doc.createElement("div");
  header.className = "queue-header";
  const count = doc.createElement("span");
  count.className = "count-badge";
  count.textContent = `${response.total} posts`;
  header.appendChild(count);
  page.appendChild(header);

  if (response.items.length === 0) {
    const empty = doc.createElement("div");
    empty.className = "empty-state";
    empty.textContent =
      response.total === 0
        ? "Nothing to review. Loosen the filters or come back later."
        : "No items on this page.";
    page.appendChild(empty);
    return page;
  }

  const list = doc.createElement("div");
  list.className = "queue-list";
  for (const item of response.items) {
    list.appendChild(renderQueueItem(doc, item, config, callbacks));
  }
  page.appendChild(list);

  const pager = doc.createElement("div");
  pager.className = "pager";
  const prev = doc.createElement("button");
  prev.className = "pager-prev";
  prev.textContent = "← Prev";
  prev.disabled = response.page <= 1;
  prev.addEventListener("click", () => callbacks.onPage(response.page - 1));
  const label = doc.createElement("span");
  label.textContent = `page ${response.page} / ${response.pages}`;
  const next = doc.createElement("button");
  next.className = "pager-next";
  next.textContent = "Next →";
  next.disabled = response.page >= response.pages;
  next.addEventListener("click", () => callbacks.onPage(response.page + 1));
  pager.append(prev, label, next);
  page.appendChild(pager);
  return page;
}
