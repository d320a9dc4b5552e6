import { categoryLabel } from "./format.js";
import type { CommentHover, Histogram, PostHover } from "./types.js";

function renderHistogram(
  doc: Document,
  title: string,
  hist: Histogram,
): HTMLElement {
  const block = doc.createElement("div");
  block.className = "hover-histogram";

  const heading = doc.createElement("h4");
  heading.textContent = title;
  block.appendChild(heading);

  const bars = doc.createElement("div");
  bars.className = "histogram-bars";
  const peak = Math.max(1, ...hist.counts);
  hist.counts.forEach((count, i) => {
    const bar = doc.createElement("div");
    bar.className = "histogram-bar";
    // Height is proportional to the tallest bin so the chart always fills.
    bar.style.height = `${Math.round((count / peak) * 100)}%`;
    bar.title = `${hist.bin_edges[i].toFixed(1)} to ${hist.bin_edges[i + 1].toFixed(1)}: ${count}`;
    bar.dataset.count = String(count);
    bars.appendChild(bar);
  });
  block.appendChild(bars);

  const axis = doc.createElement("div");
  axis.className = "histogram-axis";
  const lo = doc.createElement("span");
  lo.textContent = String(hist.value_range[0]);
  const hi = doc.createElement("span");
  hi.textContent = String(hist.value_range[1]);
  axis.append(lo, hi);
  block.appendChild(axis);
  return block;
}

function popoverShell(doc: Document, hover: PostHover | CommentHover): HTMLElement {
  const pop = doc.createElement("div");
  pop.className = "cue-popover";
  pop.setAttribute("role", "tooltip");
  const head = doc.createElement("div");
  head.className = "popover-head";
  head.textContent =
    `${categoryLabel(hover.category)} · desirability ${hover.desirability_score}`;
  pop.appendChild(head);
  return pop;
}

export function renderPostHover(
  doc: Document,
  hover: PostHover,
  commentCount: number,
): HTMLElement {
  const pop = popoverShell(doc, hover);
  if (commentCount === 0) {
    const note = doc.createElement("p");
    note.className = "popover-note";
    note.textContent = "No comments yet.";
    pop.appendChild(note);
    return pop;
  }
  pop.appendChild(
    renderHistogram(doc, "Comment desirability", hover.desirability_histogram),
  );
  pop.appendChild(renderHistogram(doc, "Comment scores", hover.score_histogram));
  return pop;
}

export function renderCommentHover(doc: Document, hover: CommentHover): HTMLElement {
  return popoverShell(doc, hover);
}

/** Attaches `pop` near `anchor` and removes any previous popover in `host`. */
export function showPopover(host: HTMLElement, pop: HTMLElement): void {
  host.querySelectorAll(".cue-popover").forEach((old) => old.remove());
  host.appendChild(pop);
}

export function hidePopover(host: HTMLElement): void {
  host.querySelectorAll(".cue-popover").forEach((old) => old.remove());
}
