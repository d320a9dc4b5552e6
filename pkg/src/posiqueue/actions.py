"""Reward and norm-setting actions over an append-only log.

Every mutation is an ActionRecord appended to a line-delimited log; live
state is the fold of that log, and replay_log rebuilds it exactly. The
explanation verb is the only one that grows the corpus (a public reply
comment); everything else is overlay state (flairs, votes, awards,
highlights, best-of threads).
"""

from __future__ import annotations

import json
import re
import threading
import time
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from pathlib import Path
from typing import Any, Callable, Iterable, Mapping, Sequence

from .corpus import COMMENT, POST, Author, Contribution, Corpus
from .errors import (
    AlreadyVotedError,
    CapacityError,
    DuplicateError,
    EmptyReasonError,
    EngineError,
    InvalidFlairError,
    NotFoundError,
    ReplayError,
    WrongKindError,
)

ACTIONS = (
    "curate",
    "uncurate",
    "explain",
    "award",
    "flair",
    "highlight",
    "unhighlight",
    "upvote",
)

DEFAULT_FLAIRS = ("Topic Flair", "Format Flair", "Mod Pick Flair")
HIGHLIGHT_CAPACITY = 6
PREVIEW_LIMIT = 200

DEFAULT_REASON_LABELS = (
    "Creative",
    "Helpful",
    "Funny",
    "Informative",
    "High effort",
    "Well formatted",
    "Relevant",
    "Welcoming",
    "Respectful",
    "Well sourced",
    "Thoughtful",
)

# Moderator reply accounts are backdated so replies never predate their author.
_MOD_ACCOUNT_CREATED = 946684800  # 2000-01-01T00:00:00Z


@dataclass(frozen=True)
class ExplainReason:
    id: str
    label: str
    origin: str  # "default" | "custom"


@dataclass(frozen=True)
class BestOfThread:
    period_start: int
    period_end: int
    title: str
    submissions: tuple[tuple[str, str], ...] = ()  # (post_id, title)
    comments: tuple[tuple[str, str], ...] = ()  # (comment_id, preview)


@dataclass
class ModerationState:
    threads: dict[int, BestOfThread] = field(default_factory=dict)
    highlights: list[str] = field(default_factory=list)
    award_counts: dict[str, int] = field(default_factory=dict)
    flairs: dict[str, str] = field(default_factory=dict)
    upvotes: dict[str, list[str]] = field(default_factory=dict)
    replies: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)


# ---------------------------------------------------------------------------
# Periods


def period_bounds(ts: int, mode: str = "weekly") -> tuple[int, int]:
    """[start, end) of the thread period containing ts. Weekly periods begin
    Monday 00:00 UTC; monthly periods on the first of the month."""
    dt = datetime.fromtimestamp(int(ts), tz=timezone.utc)
    if mode == "weekly":
        start_day = (dt - timedelta(days=dt.weekday())).date()
        start = datetime(start_day.year, start_day.month, start_day.day, tzinfo=timezone.utc)
        end = start + timedelta(days=7)
    elif mode == "monthly":
        start = datetime(dt.year, dt.month, 1, tzinfo=timezone.utc)
        end = (
            datetime(dt.year + 1, 1, 1, tzinfo=timezone.utc)
            if dt.month == 12
            else datetime(dt.year, dt.month + 1, 1, tzinfo=timezone.utc)
        )
    else:
        raise ValueError(f"unknown period mode {mode!r}")
    return int(start.timestamp()), int(end.timestamp())


def period_token(period_start: int, mode: str = "weekly") -> str:
    dt = datetime.fromtimestamp(period_start, tz=timezone.utc)
    if mode == "weekly":
        iso = dt.isocalendar()
        return f"{iso.year}-W{iso.week:02d}"
    return f"{dt.year}-{dt.month:02d}"


def parse_period(token: str) -> tuple[int, int, str]:
    """'2024-W05' -> weekly bounds; '2024-05' -> monthly bounds."""
    m = re.fullmatch(r"(\d{4})-W(\d{2})", token)
    if m:
        try:
            start = datetime.fromisocalendar(int(m.group(1)), int(m.group(2)), 1).replace(
                tzinfo=timezone.utc
            )
        except ValueError as exc:
            raise ValueError(f"invalid week token {token!r}: {exc}") from exc
        ts = int(start.timestamp())
        return ts, period_bounds(ts, "weekly")[1], "weekly"
    m = re.fullmatch(r"(\d{4})-(\d{2})", token)
    if m:
        year, month = int(m.group(1)), int(m.group(2))
        if not 1 <= month <= 12:
            raise ValueError(f"invalid month token {token!r}")
        ts = int(datetime(year, month, 1, tzinfo=timezone.utc).timestamp())
        return ts, period_bounds(ts, "monthly")[1], "monthly"
    raise ValueError(f"unparseable period token {token!r}")


def _thread_title(mode: str) -> str:
    return "Best of the week" if mode == "weekly" else "Best of the month"


# ---------------------------------------------------------------------------
# Rendering and templating


def make_preview(body: str, limit: int = PREVIEW_LIMIT) -> str:
    """Single-line body preview, cut at a word boundary, ellipsis when cut."""
    flat = " ".join(body.split())
    if len(flat) <= limit:
        return flat
    cut = flat[:limit]
    if " " in cut:
        cut = cut[: cut.rfind(" ")]
    return cut + "…"


def _escape_md_label(text: str) -> str:
    return text.replace("[", "\\[").replace("]", "\\]")


def render_bestof(thread: BestOfThread) -> str:
    """Deterministic markdown; empty sections carry an em-dash placeholder."""
    lines = [f"# {thread.title}", "", "## Submissions", ""]
    if thread.submissions:
        lines.extend(
            f"- [{_escape_md_label(title)}](/posts/{pid})" for pid, title in thread.submissions
        )
    else:
        lines.append("—")
    lines.extend(["", "## Comments", ""])
    if thread.comments:
        lines.extend(
            f"- [{_escape_md_label(preview)}](/comments/{cid})"
            for cid, preview in thread.comments
        )
    else:
        lines.append("—")
    return "\n".join(lines) + "\n"


def bestof_filename(thread: BestOfThread) -> str:
    day = datetime.fromtimestamp(thread.period_start, tz=timezone.utc).date()
    return f"bestof-{day.isoformat()}.md"


def build_explanation(
    kind: str, selected: Sequence[ExplainReason], custom: Sequence[str]
) -> str:
    """Fig-8 style sentence: reasons lowercased, comma-joined with final 'and'."""
    if kind not in (POST, COMMENT):
        raise ValueError(f"kind must be 'post' or 'comment', got {kind!r}")
    reasons = [r.label.strip().lower() for r in selected]
    reasons.extend(c.strip().lower() for c in custom)
    reasons = [r for r in reasons if r]
    if not reasons:
        raise EmptyReasonError("an explanation needs at least one reason")
    if len(reasons) == 1:
        joined = reasons[0]
    elif len(reasons) == 2:
        joined = f"{reasons[0]} and {reasons[1]}"
    else:
        joined = ", ".join(reasons[:-1]) + f", and {reasons[-1]}"
    return f"The moderators like this {kind} because it is {joined}."


# ---------------------------------------------------------------------------
# Reason store


def _reason_slug(label: str) -> str:
    return re.sub(r"[^a-z0-9]+", "_", label.strip().lower()).strip("_")


DEFAULT_REASONS = tuple(
    ExplainReason(_reason_slug(label), label, "default") for label in DEFAULT_REASON_LABELS
)


class ReasonStore:
    """Eleven fixed default reasons plus persisted custom ones."""

    def __init__(self, path: str | Path | None = None):
        self.path = Path(path) if path else None
        self._customs: list[ExplainReason] = []
        if self.path and self.path.exists():
            with self.path.open("r", encoding="utf-8") as fh:
                for line in fh:
                    if not line.strip():
                        continue
                    rec = json.loads(line)
                    if rec.get("origin") == "custom":
                        self._customs.append(
                            ExplainReason(rec["id"], rec["label"], "custom")
                        )

    def list(self) -> list[ExplainReason]:
        return list(DEFAULT_REASONS) + list(self._customs)

    def by_id(self) -> dict[str, ExplainReason]:
        return {r.id: r for r in self.list()}

    def add_custom(self, label: str) -> ExplainReason:
        label = label.strip()
        if not label:
            raise EmptyReasonError("custom reason label is empty")
        existing = {r.label.lower() for r in self.list()}
        if label.lower() in existing:
            raise DuplicateError(f"reason {label!r} already exists")
        reason = ExplainReason(_reason_slug(label), label, "custom")
        if reason.id in self.by_id():
            raise DuplicateError(f"reason id {reason.id!r} already exists")
        self._customs.append(reason)
        self._save()
        return reason

    def _save(self) -> None:
        if not self.path:
            return
        with self.path.open("w", encoding="utf-8") as fh:
            for r in self._customs:
                fh.write(
                    json.dumps({"id": r.id, "label": r.label, "origin": r.origin}) + "\n"
                )


# ---------------------------------------------------------------------------
# Action log and state fold


def read_action_log(path: str | Path) -> list[dict]:
    records: list[dict] = []
    with Path(path).open("r", encoding="utf-8") as fh:
        position = 0
        for line in fh:
            if not line.strip():
                continue
            position += 1
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ReplayError(f"invalid JSON: {exc.msg}", position) from exc
            records.append(rec)
    return records


def _check_record(record: Mapping[str, Any], position: int) -> None:
    for key, types in (
        ("ts", (int,)),
        ("moderator", (str,)),
        ("action", (str,)),
        ("target_id", (str,)),
        ("payload", (dict,)),
    ):
        if key not in record or not isinstance(record[key], types):
            raise ReplayError(f"missing or invalid field {key!r}", position)
    if record["action"] not in ACTIONS:
        raise ReplayError(f"unknown action {record['action']!r}", position)


def _mod_author_id(moderator: str) -> str:
    return "t2_mod_" + re.sub(r"[^A-Za-z0-9_-]", "_", moderator)


def _apply(
    state: ModerationState,
    corpus: Corpus,
    record: Mapping[str, Any],
    flair_names: Sequence[str],
    period_mode: str,
) -> tuple[Corpus, dict]:
    """Apply one record. Validates before mutating; raises EngineError on
    rejection. Returns (corpus, result view); corpus is new only for explain."""
    action = record["action"]
    target_id = record["target_id"]
    ts = int(record["ts"])
    moderator = record["moderator"]
    payload = record["payload"]
    target = corpus.by_id.get(target_id)
    if target is None:
        raise NotFoundError(f"no contribution with id {target_id!r}")

    if action in ("curate", "uncurate"):
        start, end = period_bounds(ts, period_mode)
        thread = state.threads.get(
            start, BestOfThread(start, end, _thread_title(period_mode))
        )
        if action == "curate":
            section = thread.submissions if target.is_post else thread.comments
            if any(eid == target_id for eid, _ in section):
                state.threads[start] = thread  # idempotent no-op
                return corpus, {"thread": thread, "changed": False}
            if target.is_post:
                entry = (target_id, target.title or "")
                thread = BestOfThread(
                    start, end, thread.title, thread.submissions + (entry,), thread.comments
                )
            else:
                entry = (target_id, make_preview(target.body))
                thread = BestOfThread(
                    start, end, thread.title, thread.submissions, thread.comments + (entry,)
                )
            state.threads[start] = thread
            return corpus, {"thread": thread, "changed": True}
        # uncurate
        submissions = tuple(e for e in thread.submissions if e[0] != target_id)
        comments = tuple(e for e in thread.comments if e[0] != target_id)
        if submissions == thread.submissions and comments == thread.comments:
            state.warnings.append(f"uncurate: {target_id} is not curated in this period")
            state.threads.setdefault(start, thread)
            return corpus, {"thread": thread, "changed": False, "warning": "not curated"}
        thread = BestOfThread(start, end, thread.title, submissions, comments)
        state.threads[start] = thread
        return corpus, {"thread": thread, "changed": True}

    if action == "award":
        state.award_counts[target_id] = state.award_counts.get(target_id, 0) + 1
        return corpus, {"award_count": state.award_counts[target_id]}

    if action == "flair":
        if not target.is_post:
            raise WrongKindError("flair applies to posts only")
        name = payload.get("flair")
        if name not in flair_names:
            raise InvalidFlairError(f"unknown flair {name!r}")
        state.flairs[target_id] = name
        return corpus, {"flair": name}

    if action == "highlight":
        if not target.is_post:
            raise WrongKindError("highlight applies to posts only")
        if target_id in state.highlights:
            raise DuplicateError(f"{target_id} is already highlighted")
        if len(state.highlights) >= HIGHLIGHT_CAPACITY:
            raise CapacityError(f"highlight carousel is full ({HIGHLIGHT_CAPACITY})")
        state.highlights.append(target_id)
        return corpus, {"highlights": list(state.highlights)}

    if action == "unhighlight":
        if target_id not in state.highlights:
            state.warnings.append(f"unhighlight: {target_id} is not highlighted")
            return corpus, {"highlights": list(state.highlights), "warning": "not highlighted"}
        state.highlights.remove(target_id)
        return corpus, {"highlights": list(state.highlights)}

    if action == "upvote":
        voters = state.upvotes.get(target_id, [])
        if moderator in voters:
            raise AlreadyVotedError(f"{moderator} already upvoted {target_id}")
        state.upvotes.setdefault(target_id, []).append(moderator)
        return corpus, {"score": target.score + len(state.upvotes[target_id])}

    if action == "explain":
        text = payload.get("text")
        if not isinstance(text, str) or not text.strip():
            raise EmptyReasonError("explanation text is empty")
        reply_id = payload.get("reply_id") or f"t1_modreply_{len(state.replies):06d}"
        if reply_id in corpus.by_id:
            raise DuplicateError(f"reply id {reply_id!r} already exists")
        author_id = _mod_author_id(moderator)
        authors = list(corpus.authors)
        if author_id not in corpus.authors_by_id:
            authors.append(
                Author(
                    id=author_id,
                    name=moderator,
                    karma=0,
                    created_utc=min(_MOD_ACCOUNT_CREATED, max(ts - 1, 1)),
                )
            )
        link_id = target.id if target.is_post else target.link_id
        reply = Contribution(
            id=reply_id,
            kind=COMMENT,
            subreddit=target.subreddit,
            title=None,
            body=text,
            author_id=author_id,
            created_utc=max(ts, 2),
            score=0,
            parent_id=target.id,
            link_id=link_id,
        )
        new_corpus = Corpus(authors, list(corpus.contributions) + [reply])
        state.replies.append(reply_id)
        return new_corpus, {"reply": reply, "text": text}

    raise ReplayError(f"unknown action {action!r}", 0)


def replay_log(
    records: Iterable[Mapping[str, Any]],
    corpus: Corpus,
    flair_names: Sequence[str] = DEFAULT_FLAIRS,
    period_mode: str = "weekly",
) -> tuple[ModerationState, Corpus]:
    """Deterministic fold of the log over a base corpus."""
    state = ModerationState()
    current = corpus
    for position, record in enumerate(records, start=1):
        _check_record(record, position)
        try:
            current, _ = _apply(state, current, record, flair_names, period_mode)
        except EngineError as exc:
            raise ReplayError(f"action rejected: {exc.detail}", position) from exc
    return state, current


class ActionEngine:
    """Single writer for all mutations; readers see consistent snapshots."""

    def __init__(
        self,
        corpus: Corpus,
        *,
        flair_names: Sequence[str] = DEFAULT_FLAIRS,
        period_mode: str = "weekly",
        log_path: str | Path | None = None,
        now_fn: Callable[[], float] = time.time,
    ):
        self.flair_names = tuple(flair_names)
        self.period_mode = period_mode
        self.now_fn = now_fn
        self.log_path = Path(log_path) if log_path else None
        self._lock = threading.Lock()
        self.base_corpus = corpus
        if self.log_path and self.log_path.exists():
            self.records = read_action_log(self.log_path)
            self.state, self.corpus = replay_log(
                self.records, corpus, self.flair_names, period_mode
            )
        else:
            self.records = []
            self.state = ModerationState()
            self.corpus = corpus

    def do(
        self,
        action: str,
        target_id: str,
        moderator: str,
        payload: Mapping[str, Any] | None = None,
        now: int | None = None,
    ) -> dict:
        if action not in ACTIONS:
            raise ValueError(f"unknown action {action!r}")
        record = {
            "ts": int(now if now is not None else self.now_fn()),
            "moderator": moderator,
            "action": action,
            "target_id": target_id,
            "payload": dict(payload or {}),
        }
        with self._lock:
            if action == "explain" and "reply_id" not in record["payload"]:
                record["payload"]["reply_id"] = f"t1_modreply_{len(self.state.replies):06d}"
            self.corpus, result = _apply(
                self.state, self.corpus, record, self.flair_names, self.period_mode
            )
            self.records.append(record)
            if self.log_path:
                with self.log_path.open("a", encoding="utf-8") as fh:
                    fh.write(json.dumps(record, ensure_ascii=False) + "\n")
                    fh.flush()
        return result

    # Read-side helpers ----------------------------------------------------

    def effective_score(self, c: Contribution) -> int:
        return c.score + len(self.state.upvotes.get(c.id, []))

    def effective_flair(self, c: Contribution) -> str | None:
        return self.state.flairs.get(c.id, c.flair)

    def award_count(self, target_id: str) -> int:
        return self.state.award_counts.get(target_id, 0)

    def is_curated(self, target_id: str, now: int | None = None) -> bool:
        ts = int(now if now is not None else self.now_fn())
        start, _ = period_bounds(ts, self.period_mode)
        thread = self.state.threads.get(start)
        if thread is None:
            return False
        return any(eid == target_id for eid, _ in thread.submissions + thread.comments)

    def current_thread(self, now: int | None = None) -> BestOfThread:
        ts = int(now if now is not None else self.now_fn())
        start, end = period_bounds(ts, self.period_mode)
        return self.state.threads.get(
            start, BestOfThread(start, end, _thread_title(self.period_mode))
        )

    def thread_for_period(self, token: str) -> BestOfThread:
        start, end, mode = parse_period(token)
        return self.state.threads.get(start, BestOfThread(start, end, _thread_title(mode)))
