"""Synthetic corpus generator for tests and demos.

Account-creation dates follow a left-skewed distribution peaking around the
configured peak year (log-normal account age anchored at the peak, plus a
small share of recent accounts so newcomer features have data). Karma is
log-linear in standardized account age with Gaussian noise, so age and karma
correlate positively. When signal_strength > 0, a designated fraction of
contributions ("gems") get positive-lexicon-dense bodies and elevated scores;
at 0 every item is drawn from the same neutral pools.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from datetime import datetime, timezone

import numpy as np

from .corpus import Author, Contribution, Corpus

# The corpus "now": generation is anchored here, never at the wall clock,
# so a given (config, seed) always produces byte-identical output.
REFERENCE_UTC = 1688083200  # 2023-06-30T00:00:00Z

_RECENT_ACCOUNT_FRACTION = 0.08
_AGE_SIGMA = 0.75
_KARMA_MEDIAN = 9000.0
_KARMA_LOG_SIGMA = 1.2
_POST_WINDOW_DAYS = 180.0

_NEUTRAL_WORDS = (
    "the a this that and with from about into over after before between "
    "under around project thread update schedule detail section note page "
    "draft copy version build server setup guide photo batch list item week "
    "month board panel topic reply entry record file folder archive sample "
    "result report number table chart window screen corner street garden "
    "river stone paper bottle chair basket ladder engine wheel signal switch "
    "cable branch market station ticket camera lantern ribbon tunnel bridge "
    "harbor meadow valley summit canyon orchard"
).split()

_FLAIR_CHOICES = (None, None, None, None, None, None, None, None, "Topic Flair", "Format Flair")


@dataclass(frozen=True)
class SyntheticConfig:
    n_posts: int = 105
    n_authors: int | None = None  # default scales with corpus size
    comments_per_post: float = 3.0  # Poisson mean
    peak_year: int = 2020
    karma_age_correlation: float = 0.6
    noise_scale: float = 1.0  # multiplies the karma noise term
    signal_strength: float = 0.0
    signal_fraction: float = 0.3
    seed: int = 0
    subreddit: str = "synthetic"
    reference_utc: int = REFERENCE_UTC

    def __post_init__(self) -> None:
        if self.n_posts < 1:
            raise ValueError("n_posts must be >= 1")
        if not 0.0 < self.karma_age_correlation < 1.0:
            raise ValueError("karma_age_correlation must be in (0, 1)")
        if self.noise_scale <= 0.0:
            raise ValueError("noise_scale must be > 0")
        if self.signal_strength < 0.0:
            raise ValueError("signal_strength must be >= 0")
        if not 0.0 < self.signal_fraction < 1.0:
            raise ValueError("signal_fraction must be in (0, 1)")
        if self.comments_per_post < 0.0:
            raise ValueError("comments_per_post must be >= 0")
        if self.n_authors is not None and self.n_authors < 2:
            raise ValueError("n_authors must be >= 2")

    def resolved_authors(self) -> int:
        if self.n_authors is not None:
            return self.n_authors
        return max(30, int(round(0.4 * self.n_posts * (1.0 + self.comments_per_post))))


@functools.lru_cache(maxsize=1)
def _signal_words() -> tuple[str, ...]:
    # Positive words present in both the valence lexicon and the
    # positive_emotion category, so the planted signal is visible to
    # every interpretable feature path.
    from .textfeat import default_lexicons

    lex = default_lexicons()
    return tuple(
        sorted(
            w
            for w, v in lex.valence.items()
            if v >= 1.8 and lex.matches_category(w, "positive_emotion")
        )
    )


def _year_start(year: int) -> int:
    return int(datetime(year, 1, 1, tzinfo=timezone.utc).timestamp())


def _make_sentence(rng: np.random.Generator, n_words: int) -> str:
    words = [str(w) for w in rng.choice(_NEUTRAL_WORDS, size=n_words)]
    terminal = "?" if rng.random() < 0.12 else "."
    return words[0].capitalize() + " " + " ".join(words[1:]) + terminal


def _make_body(rng: np.random.Generator, min_sentences: int, max_sentences: int) -> str:
    n = int(rng.integers(min_sentences, max_sentences + 1))
    return " ".join(_make_sentence(rng, int(rng.integers(5, 13))) for _ in range(n))


def _make_title(rng: np.random.Generator) -> str:
    words = [str(w) for w in rng.choice(_NEUTRAL_WORDS, size=int(rng.integers(3, 9)))]
    return words[0].capitalize() + " " + " ".join(words[1:])


def _inject_signal(rng: np.random.Generator, body: str, strength: float) -> str:
    pool = _signal_words()
    k = max(1, int(round((3.0 + 4.0 * min(strength, 2.0)) * rng.uniform(0.8, 1.2))))
    tokens = body.split()
    for w in rng.choice(pool, size=k):
        pos = int(rng.integers(0, len(tokens) + 1))
        tokens.insert(pos, str(w))
    return " ".join(tokens)


def _base_score(rng: np.random.Generator, median: float, sigma: float, neg_p: float) -> int:
    if rng.random() < neg_p:
        return -int(rng.integers(1, 4))
    return int(rng.lognormal(math.log(median), sigma))


def generate_synthetic_corpus(config: SyntheticConfig) -> Corpus:
    rng = np.random.default_rng(config.seed)
    n_authors = config.resolved_authors()
    reference = config.reference_utc

    # Account ages in days: log-normal anchored so the creation-date mode
    # lands mid peak-year, mixed with a recent-account slice.
    mid_peak = _year_start(config.peak_year) + 182 * 86400
    mode_age = max((reference - mid_peak) / 86400.0, 30.0)
    mu = math.log(mode_age) + _AGE_SIGMA**2
    base_age = rng.lognormal(mean=mu, sigma=_AGE_SIGMA, size=n_authors)
    recent = rng.random(n_authors) < _RECENT_ACCOUNT_FRACTION
    recent_age = rng.uniform(1.0, 60.0, size=n_authors)
    age_days = np.clip(np.where(recent, recent_age, base_age), 1.0, 18 * 365.25)
    created = (reference - age_days * 86400.0).astype(np.int64)

    c = config.karma_age_correlation
    slope = c * _KARMA_LOG_SIGMA
    noise_sd = _KARMA_LOG_SIGMA * math.sqrt(1.0 - c * c) * config.noise_scale
    z = (age_days - age_days.mean()) / (age_days.std() + 1e-12)
    log_karma = (
        math.log(_KARMA_MEDIAN) + slope * z + noise_sd * rng.standard_normal(n_authors)
    )
    karma = np.maximum(np.rint(np.exp(log_karma)), 0.0).astype(np.int64)

    authors = [
        Author(
            id=f"t2_{i:06d}",
            name=f"synth_user_{i}",
            karma=int(karma[i]),
            created_utc=int(created[i]),
        )
        for i in range(n_authors)
    ]
    order = np.argsort(created, kind="stable")
    sorted_created = created[order]

    def pick_author(t: int) -> tuple[str, int]:
        """Author existing at least an hour before t; adjusts t if needed."""
        idx = int(np.searchsorted(sorted_created, t - 3600, side="right"))
        if idx <= 0:
            i = int(order[0])
            return authors[i].id, max(t, int(sorted_created[0]) + 3600)
        i = int(order[int(rng.integers(0, idx))])
        return authors[i].id, t

    strength = config.signal_strength
    contributions: list[Contribution] = []
    comment_seq = 0
    for p in range(config.n_posts):
        post_id = f"t3_{p:06d}"
        t = reference - int(rng.uniform(0.0, _POST_WINDOW_DAYS) * 86400.0)
        author_id, t = pick_author(t)
        title = _make_title(rng)
        body = _make_body(rng, 2, 5)
        score = _base_score(rng, median=6.0, sigma=1.0, neg_p=0.05)
        gem = bool(rng.random() < config.signal_fraction)
        if strength > 0.0 and gem:
            body = _inject_signal(rng, body, strength)
            score += int(round(strength * (80.0 + 30.0 * abs(rng.standard_normal()))))
        flair = _FLAIR_CHOICES[int(rng.integers(0, len(_FLAIR_CHOICES)))]
        contributions.append(
            Contribution(
                id=post_id,
                kind="post",
                subreddit=config.subreddit,
                title=title,
                body=body,
                author_id=author_id,
                created_utc=t,
                score=score,
                flair=flair,
            )
        )
        n_comments = int(rng.poisson(config.comments_per_post))
        thread_ids: list[str] = []
        ct = t
        for _ in range(n_comments):
            ct = ct + int(rng.exponential(10800.0)) + 60
            comment_id = f"t1_{comment_seq:06d}"
            comment_seq += 1
            ca, ct = pick_author(ct)
            cbody = _make_body(rng, 1, 3)
            cscore = _base_score(rng, median=2.0, sigma=0.9, neg_p=0.08)
            cgem = bool(rng.random() < config.signal_fraction)
            if strength > 0.0 and cgem:
                cbody = _inject_signal(rng, cbody, strength)
                cscore += int(round(strength * (25.0 + 10.0 * abs(rng.standard_normal()))))
            if thread_ids and rng.random() < 0.35:
                parent = thread_ids[int(rng.integers(0, len(thread_ids)))]
            else:
                parent = post_id
            contributions.append(
                Contribution(
                    id=comment_id,
                    kind="comment",
                    subreddit=config.subreddit,
                    title=None,
                    body=cbody,
                    author_id=ca,
                    created_utc=ct,
                    score=cscore,
                    parent_id=parent,
                    link_id=post_id,
                )
            )
            thread_ids.append(comment_id)
    return Corpus(authors, contributions)
