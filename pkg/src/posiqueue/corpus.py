"""Data model, corpus ingestion, and referential indexes.

A corpus is one community's posts, comments, and authors. It is an immutable
snapshot after construction: mutation elsewhere in the engine happens by
building a new snapshot.

External format is line-delimited JSON. Unknown fields on a record are kept
in ``extra`` and written back on round-trip.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable

from .errors import (
    IngestError,
    NotFoundError,
    ReferentialIntegrityError,
    WrongKindError,
)

POST = "post"
COMMENT = "comment"

# Canonical key order for the external record formats.
_CONTRIBUTION_KEYS = (
    "id",
    "kind",
    "subreddit",
    "title",
    "body",
    "author_id",
    "created_utc",
    "score",
    "parent_id",
    "link_id",
    "flair",
    "num_reports",
)
_AUTHOR_KEYS = ("id", "name", "karma", "created_utc")


@dataclass(frozen=True)
class Author:
    id: str
    name: str
    karma: int
    created_utc: int
    extra: dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class Contribution:
    id: str
    kind: str
    subreddit: str
    title: str | None
    body: str
    author_id: str
    created_utc: int
    score: int
    parent_id: str | None = None
    link_id: str | None = None
    flair: str | None = None
    num_reports: int = 0
    extra: dict[str, Any] = field(default_factory=dict)

    @property
    def is_post(self) -> bool:
        return self.kind == POST

    def text(self) -> str:
        """Text the feature extractors see: title+body for posts, body else."""
        if self.kind == POST and self.title:
            return f"{self.title}\n{self.body}"
        return self.body


class Corpus:
    """Validated, indexed snapshot of one community.

    Collections are held in canonical order (contributions by
    (created_utc, id), authors by id) so equality and round-trips are
    independent of input order.
    """

    def __init__(self, authors: Iterable[Author], contributions: Iterable[Contribution]):
        self.authors: list[Author] = sorted(authors, key=lambda a: a.id)
        self.contributions: list[Contribution] = sorted(
            contributions, key=lambda c: (c.created_utc, c.id)
        )
        self.authors_by_id: dict[str, Author] = {a.id: a for a in self.authors}
        self.by_id: dict[str, Contribution] = {c.id: c for c in self.contributions}
        self.comments_by_post: dict[str, list[Contribution]] = {}
        self.by_author: dict[str, list[Contribution]] = {}
        self.posts: list[Contribution] = []
        self.comments: list[Contribution] = []
        for c in self.contributions:
            self.by_author.setdefault(c.author_id, []).append(c)
            if c.kind == POST:
                self.posts.append(c)
                self.comments_by_post.setdefault(c.id, [])
            else:
                self.comments.append(c)
        for c in self.comments:
            if c.link_id in self.comments_by_post:
                self.comments_by_post[c.link_id].append(c)
        self._validate()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Corpus):
            return NotImplemented
        return self.authors == other.authors and self.contributions == other.contributions

    def __repr__(self) -> str:
        return (
            f"Corpus(posts={len(self.posts)}, comments={len(self.comments)}, "
            f"authors={len(self.authors)})"
        )

    def author_of(self, contribution: Contribution) -> Author:
        return self.authors_by_id[contribution.author_id]

    def _validate(self) -> None:
        offenders: list[str] = []
        problems: list[str] = []
        if len(self.authors_by_id) != len(self.authors):
            seen: set[str] = set()
            for a in self.authors:
                if a.id in seen:
                    offenders.append(a.id)
                    problems.append(f"duplicate author id {a.id!r}")
                seen.add(a.id)
        if len(self.by_id) != len(self.contributions):
            seen = set()
            for c in self.contributions:
                if c.id in seen:
                    offenders.append(c.id)
                    problems.append(f"duplicate contribution id {c.id!r}")
                seen.add(c.id)
        for c in self.contributions:
            author = self.authors_by_id.get(c.author_id)
            if author is None:
                offenders.append(c.id)
                problems.append(f"{c.id}: unknown author_id {c.author_id!r}")
            elif c.created_utc < author.created_utc:
                offenders.append(c.id)
                problems.append(f"{c.id}: created before its author account")
            if c.kind == COMMENT:
                if c.link_id not in self.by_id:
                    offenders.append(c.id)
                    problems.append(f"{c.id}: unknown link_id {c.link_id!r}")
                elif self.by_id[c.link_id].kind != POST:
                    offenders.append(c.id)
                    problems.append(f"{c.id}: link_id {c.link_id!r} is not a post")
                if c.parent_id not in self.by_id:
                    offenders.append(c.id)
                    problems.append(f"{c.id}: unknown parent_id {c.parent_id!r}")
        if problems:
            raise ReferentialIntegrityError("; ".join(problems), offenders)
        # Parent chains must terminate at the root post named by link_id.
        for c in self.comments:
            node = c
            hops = 0
            while node.kind == COMMENT:
                node = self.by_id[node.parent_id]  # type: ignore[index]
                hops += 1
                if hops > len(self.contributions):
                    raise ReferentialIntegrityError(
                        f"{c.id}: parent chain does not terminate (cycle)", [c.id]
                    )
            if node.id != c.link_id:
                raise ReferentialIntegrityError(
                    f"{c.id}: parent chain ends at {node.id!r}, link_id says {c.link_id!r}",
                    [c.id],
                )
        # Thread order within a post: chronological, ties broken by id.
        for comments in self.comments_by_post.values():
            comments.sort(key=lambda c: (c.created_utc, c.id))


def comment_section(corpus: Corpus, post_id: str) -> list[Contribution]:
    """All comments under a post, ordered by created_utc ascending."""
    contribution = corpus.by_id.get(post_id)
    if contribution is None:
        raise NotFoundError(f"no contribution with id {post_id!r}")
    if contribution.kind != POST:
        raise WrongKindError(f"{post_id!r} is a comment, expected a post")
    return list(corpus.comments_by_post[post_id])


# ---------------------------------------------------------------------------
# Record (de)serialization


def _want_str(rec: dict, key: str, problems: list[str]) -> str:
    v = rec.get(key)
    if not isinstance(v, str):
        problems.append(f"{key}: expected string, got {type(v).__name__}")
        return ""
    return v


def _want_int(rec: dict, key: str, problems: list[str], minimum: int | None = None) -> int:
    v = rec.get(key)
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        problems.append(f"{key}: expected integer, got {type(v).__name__}")
        return 0
    if isinstance(v, float):
        if not v.is_integer():
            problems.append(f"{key}: expected integer, got {v}")
            return 0
        v = int(v)
    if minimum is not None and v < minimum:
        problems.append(f"{key}: must be >= {minimum}, got {v}")
        return max(v, minimum)
    return v


def _opt_str(rec: dict, key: str, problems: list[str]) -> str | None:
    v = rec.get(key)
    if v is None or isinstance(v, str):
        return v
    problems.append(f"{key}: expected string or null, got {type(v).__name__}")
    return None


def author_from_record(rec: dict) -> tuple[Author | None, list[str]]:
    problems: list[str] = []
    a = Author(
        id=_want_str(rec, "id", problems),
        name=_want_str(rec, "name", problems),
        karma=_want_int(rec, "karma", problems, minimum=0),
        created_utc=_want_int(rec, "created_utc", problems, minimum=1),
        extra={k: v for k, v in rec.items() if k not in _AUTHOR_KEYS},
    )
    if not a.id:
        problems.append("id: must be a non-empty string")
    return (None, problems) if problems else (a, [])


def contribution_from_record(rec: dict) -> tuple[Contribution | None, list[str]]:
    problems: list[str] = []
    kind = _want_str(rec, "kind", problems)
    if kind not in (POST, COMMENT):
        problems.append(f"kind: expected 'post' or 'comment', got {kind!r}")
    title = _opt_str(rec, "title", problems)
    parent_id = _opt_str(rec, "parent_id", problems)
    link_id = _opt_str(rec, "link_id", problems)
    if kind == POST:
        if title is None:
            problems.append("title: posts require a title")
        if parent_id is not None:
            problems.append("parent_id: must be null for posts")
        if link_id is not None:
            problems.append("link_id: must be null for posts")
    elif kind == COMMENT:
        if title is not None:
            problems.append("title: must be null for comments")
        if parent_id is None:
            problems.append("parent_id: comments require a parent_id")
        if link_id is None:
            problems.append("link_id: comments require a link_id")
    num_reports = 0
    if rec.get("num_reports") is not None:
        num_reports = _want_int(rec, "num_reports", problems, minimum=0)
    c = Contribution(
        id=_want_str(rec, "id", problems),
        kind=kind,
        subreddit=_want_str(rec, "subreddit", problems),
        title=title,
        body=_want_str(rec, "body", problems),
        author_id=_want_str(rec, "author_id", problems),
        created_utc=_want_int(rec, "created_utc", problems, minimum=1),
        score=_want_int(rec, "score", problems),
        parent_id=parent_id,
        link_id=link_id,
        flair=_opt_str(rec, "flair", problems),
        num_reports=num_reports,
        extra={k: v for k, v in rec.items() if k not in _CONTRIBUTION_KEYS},
    )
    if not c.id:
        problems.append("id: must be a non-empty string")
    return (None, problems) if problems else (c, [])


def author_to_record(a: Author) -> dict:
    rec: dict[str, Any] = {
        "id": a.id,
        "name": a.name,
        "karma": a.karma,
        "created_utc": a.created_utc,
    }
    rec.update(a.extra)
    return rec


def contribution_to_record(c: Contribution) -> dict:
    rec: dict[str, Any] = {
        "id": c.id,
        "kind": c.kind,
        "subreddit": c.subreddit,
        "title": c.title,
        "body": c.body,
        "author_id": c.author_id,
        "created_utc": c.created_utc,
        "score": c.score,
        "parent_id": c.parent_id,
        "link_id": c.link_id,
        "flair": c.flair,
        "num_reports": c.num_reports,
    }
    rec.update(c.extra)
    return rec


# ---------------------------------------------------------------------------
# File I/O


def _read_jsonl(path: Path) -> Iterable[tuple[int, dict | None, str]]:
    """Yield (line_number, record, error_message) per non-blank line."""
    with path.open("r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                yield line_no, None, f"invalid JSON: {exc.msg}"
                continue
            if not isinstance(rec, dict):
                yield line_no, None, f"expected object, got {type(rec).__name__}"
                continue
            yield line_no, rec, ""


def ingest_corpus(contributions_path: str | Path, authors_path: str | Path) -> Corpus:
    """Load and validate a corpus from the two line-delimited files.

    Every malformed line is reported in a single error (line number and
    field). Dangling references raise a referential-integrity error listing
    the offending ids.
    """
    contributions_path = Path(contributions_path)
    authors_path = Path(authors_path)
    problems: list[tuple[int, str]] = []
    authors: list[Author] = []
    for line_no, rec, err in _read_jsonl(authors_path):
        if err:
            problems.append((line_no, f"{authors_path.name}: {err}"))
            continue
        author, field_problems = author_from_record(rec)  # type: ignore[arg-type]
        if field_problems:
            problems.extend(
                (line_no, f"{authors_path.name}: {p}") for p in field_problems
            )
        else:
            authors.append(author)  # type: ignore[arg-type]
    contributions: list[Contribution] = []
    for line_no, rec, err in _read_jsonl(contributions_path):
        if err:
            problems.append((line_no, f"{contributions_path.name}: {err}"))
            continue
        contribution, field_problems = contribution_from_record(rec)  # type: ignore[arg-type]
        if field_problems:
            problems.extend(
                (line_no, f"{contributions_path.name}: {p}") for p in field_problems
            )
        else:
            contributions.append(contribution)  # type: ignore[arg-type]
    if problems:
        raise IngestError(problems)
    return Corpus(authors, contributions)


def write_corpus(
    corpus: Corpus, contributions_path: str | Path, authors_path: str | Path
) -> None:
    """Write the corpus back out in the external format (round-trip safe)."""
    with Path(authors_path).open("w", encoding="utf-8") as fh:
        for a in corpus.authors:
            fh.write(json.dumps(author_to_record(a), ensure_ascii=False) + "\n")
    with Path(contributions_path).open("w", encoding="utf-8") as fh:
        for c in corpus.contributions:
            fh.write(json.dumps(contribution_to_record(c), ensure_ascii=False) + "\n")
