import { formatAge, formatKarma, formatTimestamp } from "./format.js";
import { renderCueChip } from "./queue_view.js";
import type { CommentView, PostDetail } from "./types.js";

export interface PostViewCallbacks {
  onHoverPostCue(detail: PostDetail, chip: HTMLElement): void;
  onHoverCommentCue(comment: CommentView, chip: HTMLElement): void;
  onBack(): void;
}

function renderComment(
  doc: Document,
  comment: CommentView,
  callbacks: PostViewCallbacks,
): HTMLElement {
  const node = doc.createElement("div");
  node.className = "comment";
  node.dataset.id = comment.id;

  const chip = renderCueChip(doc, comment.cue, comment.desirability_score);
  chip.addEventListener("mouseenter", () =>
    callbacks.onHoverCommentCue(comment, chip),
  );
  node.appendChild(chip);

  const byline = doc.createElement("div");
  byline.className = "comment-byline";
  byline.textContent =
    `${comment.author.name} · ${formatKarma(comment.author.karma)} karma · ` +
    `score ${comment.score} · ${formatTimestamp(comment.created_utc)}`;
  node.appendChild(byline);

  const body = doc.createElement("p");
  body.className = "comment-body";
  body.textContent = comment.body;
  node.appendChild(body);

  if (comment.replies.length > 0) {
    const replies = doc.createElement("div");
    replies.className = "comment-replies";
    for (const reply of comment.replies) {
      replies.appendChild(renderComment(doc, reply, callbacks));
    }
    node.appendChild(replies);
  }
  return node;
}

export function renderPostView(
  doc: Document,
  detail: PostDetail,
  callbacks: PostViewCallbacks,
): HTMLElement {
  const page = doc.createElement("div");
  page.className = "post-view";

  const back = doc.createElement("a");
  back.className = "back-link";
  back.href = "#/queue";
  back.textContent = "← Back to queue";
  back.addEventListener("click", (event) => {
    event.preventDefault();
    callbacks.onBack();
  });
  page.appendChild(back);

  const header = doc.createElement("header");
  header.className = "post-header";
  const chip = renderCueChip(doc, detail.cue, detail.desirability_score);
  chip.addEventListener("mouseenter", () =>
    callbacks.onHoverPostCue(detail, chip),
  );
  header.appendChild(chip);

  const title = doc.createElement("h1");
  title.textContent = detail.title ?? "(untitled)";
  header.appendChild(title);

  if (detail.flair) {
    const flair = doc.createElement("span");
    flair.className = "flair-badge";
    flair.textContent = detail.flair;
    header.appendChild(flair);
  }
  page.appendChild(header);

  const byline = doc.createElement("div");
  byline.className = "item-byline";
  byline.textContent =
    `${detail.author.name} · ${formatKarma(detail.author.karma)} karma · ` +
    `account ${formatAge(detail.author.account_age_days)} · ` +
    `r/${detail.subreddit} · ${formatTimestamp(detail.created_utc)} · ` +
    `score ${detail.score}`;
  page.appendChild(byline);

  const body = doc.createElement("div");
  body.className = "post-body";
  body.textContent = detail.body;
  page.appendChild(body);

  const commentsHead = doc.createElement("h2");
  commentsHead.textContent = `${detail.comment_count} comments`;
  page.appendChild(commentsHead);

  const tree = doc.createElement("div");
  tree.className = "comment-tree";
  for (const comment of detail.comments) {
    tree.appendChild(renderComment(doc, comment, callbacks));
  }
  page.appendChild(tree);
  return page;
}
