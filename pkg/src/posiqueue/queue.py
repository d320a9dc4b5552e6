"""Queue triage: percentile cues, filters, sort keys, and hover data.

Percentile pools are per kind (post scores vs post pool, comment scores vs
comment pool) so small comment values do not compress the post bands. All
functions are pure over immutable snapshots.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

import numpy as np

from .corpus import Contribution, Corpus
from .errors import InsufficientDataError

Number = float | int


@dataclass(frozen=True)
class CueCategory:
    token: str
    color_token: str
    rank: int  # total order, 0 = HighlyUndesirable

    def __str__(self) -> str:
        return self.token


HIGHLY_UNDESIRABLE = CueCategory("highly_undesirable", "cue-strong-negative", 0)
UNDESIRABLE = CueCategory("undesirable", "cue-negative", 1)
NEUTRAL = CueCategory("neutral", "cue-neutral", 2)
DESIRABLE = CueCategory("desirable", "cue-positive", 3)
HIGHLY_DESIRABLE = CueCategory("highly_desirable", "cue-strong-positive", 4)

CUE_CATEGORIES = (HIGHLY_UNDESIRABLE, UNDESIRABLE, NEUTRAL, DESIRABLE, HIGHLY_DESIRABLE)

SORT_KEYS = (
    "newest",
    "oldest",
    "most_reported",
    "most_desirable",
    "highest_score",
    "newest_author",
    "highest_karma",
    "highest_comment_desirability",
    "highest_comment_score",
    "most_newcomer_commenters",
)

# filter token -> metric-table column
FILTER_TO_METRIC = {
    "min_desirability": "desirability",
    "min_score": "score",
    "min_author_karma": "author_karma",
    "min_author_age_days": "author_age_days",
    "min_avg_comment_desirability": "avg_comment_desirability",
    "min_avg_comment_score": "avg_comment_score",
    "min_newcomer_commenters": "newcomer_commenters",
}

# Slider steps: whole numbers everywhere except author age.
METRIC_STEPS = {
    "desirability": 1.0,
    "score": 1.0,
    "author_karma": 1.0,
    "author_age_days": 0.1,
    "avg_comment_desirability": 1.0,
    "avg_comment_score": 1.0,
    "newcomer_commenters": 1.0,
}

DEFAULT_NEWCOMER_THRESHOLD_DAYS = 30.0


@dataclass(frozen=True)
class FilterSpec:
    min_desirability: Number | None = None
    min_score: Number | None = None
    min_author_karma: Number | None = None
    min_author_age_days: Number | None = None
    min_avg_comment_desirability: Number | None = None
    min_avg_comment_score: Number | None = None
    min_newcomer_commenters: Number | None = None

    def __post_init__(self) -> None:
        for name in ("min_desirability", "min_avg_comment_desirability"):
            v = getattr(self, name)
            if v is not None and not 0 <= v <= 100:
                raise ValueError(f"{name} must be within [0, 100], got {v}")

    def thresholds(self) -> dict[str, float]:
        out = {}
        for token, metric in FILTER_TO_METRIC.items():
            v = getattr(self, token)
            if v is not None:
                out[metric] = float(v)
        return out


@dataclass(frozen=True)
class PostAggregates:
    avg_comment_desirability: float
    avg_comment_score: float
    newcomer_commenters: int


@dataclass(frozen=True)
class Histogram:
    bin_edges: list[float]
    counts: list[int]
    value_range: tuple[float, float]


def percentile_rank(values: Sequence[Number] | np.ndarray, x: Number) -> float:
    """Mid-rank percentile: 100 * (count(v < x) + 0.5 * count(v = x)) / n."""
    arr = np.sort(np.asarray(values, dtype=np.float64))
    n = len(arr)
    if n == 0:
        raise InsufficientDataError("percentile_rank over an empty distribution")
    lo = int(np.searchsorted(arr, x, side="left"))
    hi = int(np.searchsorted(arr, x, side="right"))
    return 100.0 * (lo + 0.5 * (hi - lo)) / n


def _band(rank: float) -> CueCategory:
    if rank > 80.0:
        return HIGHLY_DESIRABLE
    if rank > 60.0:
        return DESIRABLE
    if rank > 40.0:
        return NEUTRAL
    if rank > 20.0:
        return UNDESIRABLE
    return HIGHLY_UNDESIRABLE


def cue_category(kind_scores: Sequence[Number] | np.ndarray, score: Number) -> CueCategory:
    """Five percentile bands over same-kind scores; top band is strict > 80."""
    return _band(percentile_rank(kind_scores, score))


def cue_categories_bulk(kind_scores: Sequence[Number] | np.ndarray) -> list[CueCategory]:
    """cue_category of every element against the whole pool, one O(n log n) pass."""
    arr = np.asarray(kind_scores, dtype=np.float64)
    n = len(arr)
    if n == 0:
        return []
    srt = np.sort(arr)
    lo = np.searchsorted(srt, arr, side="left")
    hi = np.searchsorted(srt, arr, side="right")
    ranks = 100.0 * (lo + 0.5 * (hi - lo)) / n
    return [_band(float(r)) for r in ranks]


def compute_post_aggregates(
    corpus: Corpus,
    post: Contribution,
    scores: Mapping[str, int],
    newcomer_threshold_days: float = DEFAULT_NEWCOMER_THRESHOLD_DAYS,
    score_of: Callable[[Contribution], int] | None = None,
) -> PostAggregates:
    """Comment-section averages plus distinct newcomer commenters.

    A commenter is a newcomer when any of their comments under the post was
    written less than the threshold after their account creation.
    """
    comments = corpus.comments_by_post.get(post.id, [])
    if not comments:
        return PostAggregates(0.0, 0.0, 0)
    if score_of is None:
        score_of = lambda c: c.score
    threshold_s = newcomer_threshold_days * 86400.0
    newcomers: set[str] = set()
    for c in comments:
        author = corpus.authors_by_id[c.author_id]
        if c.created_utc - author.created_utc < threshold_s:
            newcomers.add(c.author_id)
    return PostAggregates(
        avg_comment_desirability=float(np.mean([scores[c.id] for c in comments])),
        avg_comment_score=float(np.mean([score_of(c) for c in comments])),
        newcomer_commenters=len(newcomers),
    )


def build_metric_table(
    corpus: Corpus,
    scores: Mapping[str, int],
    newcomer_threshold_days: float = DEFAULT_NEWCOMER_THRESHOLD_DAYS,
    reference_utc: int | None = None,
    score_of: Callable[[Contribution], int] | None = None,
) -> dict[str, dict[str, float]]:
    """Per-post metric rows for filtering and sorting.

    Author age is measured at the snapshot's latest contribution time (not
    the wall clock) so results are reproducible.
    """
    if score_of is None:
        score_of = lambda c: c.score
    if reference_utc is None:
        reference_utc = max((c.created_utc for c in corpus.contributions), default=0)
    table: dict[str, dict[str, float]] = {}
    for post in corpus.posts:
        agg = compute_post_aggregates(
            corpus, post, scores, newcomer_threshold_days, score_of
        )
        author = corpus.authors_by_id[post.author_id]
        table[post.id] = {
            "desirability": float(scores[post.id]),
            "score": float(score_of(post)),
            "author_karma": float(author.karma),
            "author_age_days": (reference_utc - author.created_utc) / 86400.0,
            "avg_comment_desirability": agg.avg_comment_desirability,
            "avg_comment_score": agg.avg_comment_score,
            "newcomer_commenters": float(agg.newcomer_commenters),
            "created_utc": float(post.created_utc),
            "author_created_utc": float(author.created_utc),
            "num_reports": float(post.num_reports),
        }
    return table


def filter_queue(
    posts: Sequence[Contribution],
    spec: FilterSpec,
    metrics: Mapping[str, Mapping[str, float]],
) -> list[Contribution]:
    """Posts meeting every present threshold (metric >= threshold), order kept."""
    thresholds = spec.thresholds()
    if not thresholds:
        return list(posts)
    out = []
    for p in posts:
        row = metrics[p.id]
        if all(row[m] >= t for m, t in thresholds.items()):
            out.append(p)
    return out


_SORT_VALUE: dict[str, Callable[[Mapping[str, float]], float]] = {
    "newest": lambda r: -r["created_utc"],
    "oldest": lambda r: r["created_utc"],
    "most_reported": lambda r: -r["num_reports"],
    "most_desirable": lambda r: -r["desirability"],
    "highest_score": lambda r: -r["score"],
    "newest_author": lambda r: -r["author_created_utc"],
    "highest_karma": lambda r: -r["author_karma"],
    "highest_comment_desirability": lambda r: -r["avg_comment_desirability"],
    "highest_comment_score": lambda r: -r["avg_comment_score"],
    "most_newcomer_commenters": lambda r: -r["newcomer_commenters"],
}


def sort_queue(
    posts: Sequence[Contribution],
    key: str,
    metrics: Mapping[str, Mapping[str, float]],
) -> list[Contribution]:
    """Stable sort by the named key; ties by created_utc desc then id asc."""
    if key not in _SORT_VALUE:
        raise ValueError(f"unknown sort key {key!r}")
    value = _SORT_VALUE[key]
    return sorted(
        posts, key=lambda p: (value(metrics[p.id]), -p.created_utc, p.id)
    )


def ceil_to_step(v: float, step: float) -> float:
    """Smallest step multiple >= v, guarded against float ratio noise."""
    units = math.ceil(round(v / step, 9))
    return round(max(units, 0) * step, 10)


def slider_maxima(
    corpus: Corpus, metrics: Mapping[str, Mapping[str, float]]
) -> dict[str, dict[str, float]]:
    """Dynamic slider maxima: 80th percentile of each metric over posts,
    rounded up to the metric's step. Desirability is the fixed 0..100 scale."""
    meta: dict[str, dict[str, float]] = {}
    post_ids = [p.id for p in corpus.posts]
    for metric, step in METRIC_STEPS.items():
        if metric == "desirability":
            meta[metric] = {"max": 100.0, "step": step}
            continue
        values = [metrics[pid][metric] for pid in post_ids]
        if not values:
            meta[metric] = {"max": 0.0, "step": step}
            continue
        p80 = float(np.percentile(np.asarray(values, dtype=np.float64), 80))
        meta[metric] = {"max": ceil_to_step(p80, step), "step": step}
    return meta


def hover_histograms(
    post: Contribution,
    comment_scores: Sequence[Number],
    comment_reddit_scores: Sequence[Number],
) -> tuple[Histogram, Histogram]:
    """(desirability histogram, platform-score histogram) for a post's comments."""

    def make(values: Sequence[Number], lo: float, hi: float) -> Histogram:
        counts, edges = np.histogram(
            np.asarray(values, dtype=np.float64), bins=10, range=(lo, hi)
        )
        return Histogram(
            bin_edges=[float(e) for e in edges],
            counts=[int(c) for c in counts],
            value_range=(lo, hi),
        )

    if not comment_scores:
        zero = make([], 0.0, 1.0)
        return zero, zero
    des_hi = max(float(max(comment_scores)), 10.0)
    lo = float(min(comment_reddit_scores))
    hi = float(max(comment_reddit_scores))
    if hi == lo:
        hi = lo + 1.0
    return make(comment_scores, 0.0, des_hi), make(comment_reddit_scores, lo, hi)
