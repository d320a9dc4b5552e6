"""Text feature extraction.

Four feature groups per contribution:
  1. lexicon category proportions (0..100 per category),
  2. style scalars: sentiment compound, readability grade, interrogative
     ratio, politeness, toxicity,
  3. (toxicity is lexicon noisy-or, see toxicity_score),
  4. a signed feature-hashed unigram+bigram embedding, L2-normalized.

All extractors are pure and total: empty text yields zeros everywhere and a
zero embedding, so degenerate inputs never abort the pipeline. Lexicons are
plain TSV files; defaults ship with the package under ``data/``.
"""

from __future__ import annotations

import base64
import functools
import hashlib
import json
import math
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

from .corpus import Contribution
from .errors import IngestError

SCALAR_NAMES = ("sentiment", "readability", "interrogative_ratio", "politeness", "toxicity")

# Maximal alphanumeric runs, apostrophes allowed mid-word ("don't").
_WORD_RE = re.compile(r"[^\W_]+(?:'[^\W_]+)*", re.UNICODE)
# Sentence boundary: terminal punctuation followed by whitespace. A trailing
# fragment without terminal punctuation still counts as a sentence so that
# every word belongs to exactly one sentence.
_SENT_SPLIT_RE = re.compile(r"(?<=[.!?])\s+")
_QUESTION_END_RE = re.compile(r"\?[.!?]*$")
_VOWEL_GROUP_RE = re.compile(r"[aeiouy]+")
_MD_LINK_RE = re.compile(r"\[([^\]]*)\]\([^)\s]*\)")
_NEGATORS = frozenset({"not", "no", "never"})


@dataclass(frozen=True)
class TokenizedText:
    words: list[str]
    sentences: list[str]
    syllable_counts: list[int]


@dataclass(frozen=True)
class FeatureConfig:
    embedding_dim: int = 384
    lexicon_dir: str | None = None
    count_syllables: bool = True  # False: one syllable per word (degraded mode)

    def __post_init__(self) -> None:
        if self.embedding_dim < 8:
            raise ValueError(f"embedding_dim must be >= 8, got {self.embedding_dim}")


class LexiconSet:
    """Immutable lexicon bundle.

    Category entries ending in '*' are stem prefixes. Politeness strategies
    map to (polarity, phrases); the ``second_person_start`` strategy is
    positional — its phrases match only as the first word of a sentence.
    """

    def __init__(
        self,
        categories: Mapping[str, Iterable[str]],
        valence: Mapping[str, float],
        toxicity: Mapping[str, float],
        politeness: Mapping[str, tuple[int, Iterable[str]]],
    ):
        self.categories = {c: frozenset(ws) for c, ws in categories.items()}
        self.valence = dict(valence)
        self.toxicity = dict(toxicity)
        self.politeness = {
            s: (pol, tuple(tuple(_WORD_RE.findall(p.lower())) for p in phrases))
            for s, (pol, phrases) in politeness.items()
        }
        self._exact: dict[str, frozenset[str]] = {}
        self._stems: dict[str, tuple[str, ...]] = {}
        for cat, entries in self.categories.items():
            exact = {e for e in entries if not e.endswith("*")}
            stems = tuple(sorted(e[:-1] for e in entries if e.endswith("*") and len(e) > 1))
            self._exact[cat] = frozenset(exact)
            self._stems[cat] = stems

    def category_names(self) -> list[str]:
        return sorted(self.categories)

    def matches_category(self, word: str, category: str) -> bool:
        if word in self._exact[category]:
            return True
        stems = self._stems[category]
        return bool(stems) and word.startswith(stems)


def tokenize(text: str) -> TokenizedText:
    """Split text into sentences, case-folded words, and syllable counts.

    Markdown links are reduced to their anchor text first. Sentences split on
    terminal punctuation (. ! ?) followed by whitespace; a trailing fragment
    counts as a sentence.
    """
    text = _MD_LINK_RE.sub(r"\1", text).replace("’", "'")
    sentences = [s for s in _SENT_SPLIT_RE.split(text) if s.strip()]
    words = _WORD_RE.findall(text.lower())
    return TokenizedText(words, sentences, [_syllables(w) for w in words])


def _syllables(word: str) -> int:
    """Vowel-group heuristic: silent trailing 'e' dropped unless '-le'."""
    letters = re.sub(r"[^a-z]", "", word)
    if not letters:
        return 1
    groups = len(_VOWEL_GROUP_RE.findall(letters))
    if groups > 1 and letters.endswith("e") and not letters.endswith("le"):
        groups -= 1
    return max(groups, 1)


def category_proportions(tokens: TokenizedText, lexicons: LexiconSet) -> dict[str, float]:
    """Per category: 100 x matching words / total words; all 0 for empty text."""
    total = len(tokens.words)
    out = {c: 0.0 for c in lexicons.category_names()}
    if total == 0:
        return out
    for cat in out:
        hits = sum(1 for w in tokens.words if lexicons.matches_category(w, cat))
        out[cat] = 100.0 * hits / total
    return out


def sentiment_compound(tokens: TokenizedText, lexicons: LexiconSet) -> float:
    """Summed valence with a 3-token negation window, squashed to [-1, 1]."""
    s = 0.0
    words = tokens.words
    for i, w in enumerate(words):
        v = lexicons.valence.get(w)
        if v is None:
            continue
        for j in range(max(0, i - 3), i):
            prev = words[j]
            if prev in _NEGATORS or prev.endswith("n't"):
                v = -v
                break
        s += v
    if s == 0.0:
        return 0.0
    return max(-1.0, min(1.0, s / math.sqrt(s * s + 15.0)))


def readability(tokens: TokenizedText) -> float:
    """Grade level 0.39*(W/S) + 11.8*(Syl/W) - 15.59; 0 for degenerate input."""
    n_words = len(tokens.words)
    n_sents = len(tokens.sentences)
    if n_words == 0 or n_sents == 0:
        return 0.0
    n_syll = sum(tokens.syllable_counts)
    return 0.39 * (n_words / n_sents) + 11.8 * (n_syll / n_words) - 15.59


def interrogative_ratio(text: str) -> float:
    """Fraction of sentences terminated by a question mark."""
    sentences = tokenize(text).sentences
    if not sentences:
        return 0.0
    questions = sum(1 for s in sentences if _QUESTION_END_RE.search(s.rstrip()))
    return questions / len(sentences)


def _count_phrase(words: list[str], phrase: tuple[str, ...]) -> int:
    if not phrase or len(phrase) > len(words):
        return 0
    n = len(phrase)
    return sum(1 for i in range(len(words) - n + 1) if tuple(words[i : i + n]) == phrase)


def politeness_score(tokens: TokenizedText, lexicons: LexiconSet) -> float:
    """Sum of polarity x strategy matches, normalized by sentence count."""
    if not tokens.sentences:
        return 0.0
    total = 0.0
    sentence_starts: list[str] | None = None
    for strategy, (polarity, phrases) in lexicons.politeness.items():
        if strategy == "second_person_start":
            if sentence_starts is None:
                sentence_starts = []
                for s in tokens.sentences:
                    ws = _WORD_RE.findall(s.lower())
                    if ws:
                        sentence_starts.append(ws[0])
            heads = {p[0] for p in phrases if p}
            matches = sum(1 for w in sentence_starts if w in heads)
        else:
            matches = sum(_count_phrase(tokens.words, p) for p in phrases)
        total += polarity * matches
    return total / len(tokens.sentences)


def toxicity_score(tokens: TokenizedText, lexicons: LexiconSet) -> float:
    """Noisy-or over matched toxic terms, one factor per occurrence."""
    clean = 1.0
    for w in tokens.words:
        weight = lexicons.toxicity.get(w)
        if weight is not None:
            clean *= 1.0 - weight
    return 1.0 - clean


def _embed_words(words: list[str], dim: int) -> np.ndarray:
    v = np.zeros(dim, dtype=np.float64)
    grams = [f"1:{w}" for w in words]
    grams.extend(f"2:{a} {b}" for a, b in zip(words, words[1:]))
    for gram in grams:
        digest = hashlib.blake2b(gram.encode("utf-8"), digest_size=8).digest()
        idx = int.from_bytes(digest[:4], "little") % dim
        sign = 1.0 if digest[4] & 1 else -1.0
        v[idx] += sign
    norm = float(np.linalg.norm(v))
    if norm > 0.0:
        v /= norm
    return v


def embed(text: str, config: FeatureConfig) -> np.ndarray:
    """Signed feature-hashed unigram+bigram vector, unit norm (or zero)."""
    return _embed_words(tokenize(text).words, config.embedding_dim)


@dataclass(eq=False)
class FeatureVector:
    category_proportions: dict[str, float]
    sentiment: float
    readability: float
    interrogative_ratio: float
    politeness: float
    toxicity: float
    embedding: np.ndarray


def extract_features(
    contribution: Contribution, lexicons: LexiconSet, config: FeatureConfig
) -> FeatureVector:
    """All extractors over title+body (posts) or body (comments)."""
    text = contribution.text()
    tokens = tokenize(text)
    if not config.count_syllables:
        tokens = TokenizedText(tokens.words, tokens.sentences, [1] * len(tokens.words))
    return FeatureVector(
        category_proportions=category_proportions(tokens, lexicons),
        sentiment=sentiment_compound(tokens, lexicons),
        readability=readability(tokens),
        interrogative_ratio=interrogative_ratio(text),
        politeness=politeness_score(tokens, lexicons),
        toxicity=toxicity_score(tokens, lexicons),
        embedding=_embed_words(tokens.words, config.embedding_dim),
    )


def feature_names(lexicons: LexiconSet, config: FeatureConfig) -> list[str]:
    """Fixed flattening order: sorted categories, scalars, embedding dims."""
    names = [f"cat_{c}" for c in lexicons.category_names()]
    names.extend(SCALAR_NAMES)
    names.extend(f"emb_{i}" for i in range(config.embedding_dim))
    return names


def flatten(fv: FeatureVector) -> np.ndarray:
    cats = [fv.category_proportions[c] for c in sorted(fv.category_proportions)]
    scalars = [fv.sentiment, fv.readability, fv.interrogative_ratio, fv.politeness, fv.toxicity]
    return np.concatenate([np.asarray(cats + scalars, dtype=np.float64), fv.embedding])


# ---------------------------------------------------------------------------
# Lexicon files: TSV, one record per line, '#' comments allowed.


def _read_tsv(path: Path, n_fields: int) -> Iterable[tuple[int, list[str]]]:
    with path.open("r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != n_fields:
                raise IngestError(
                    [(line_no, f"{path.name}: expected {n_fields} tab-separated fields")]
                )
            yield line_no, parts


def load_lexicons(directory: str | Path) -> LexiconSet:
    """Load categories.tsv, valence.tsv, toxicity.tsv, politeness.tsv."""
    directory = Path(directory)
    problems: list[tuple[int, str]] = []
    categories: dict[str, set[str]] = {}
    for line_no, (cat, word) in _read_tsv(directory / "categories.tsv", 2):
        categories.setdefault(cat, set()).add(word.lower())
    valence: dict[str, float] = {}
    for line_no, (word, score) in _read_tsv(directory / "valence.tsv", 2):
        v = float(score)
        if not -4.0 <= v <= 4.0:
            problems.append((line_no, f"valence.tsv: score out of [-4, 4]: {v}"))
        valence[word.lower()] = v
    toxicity: dict[str, float] = {}
    for line_no, (word, weight) in _read_tsv(directory / "toxicity.tsv", 2):
        w = float(weight)
        if not 0.0 < w <= 1.0:
            problems.append((line_no, f"toxicity.tsv: weight out of (0, 1]: {w}"))
        toxicity[word.lower()] = w
    politeness: dict[str, tuple[int, list[str]]] = {}
    for line_no, (strategy, polarity, phrase) in _read_tsv(directory / "politeness.tsv", 3):
        if polarity not in ("+1", "-1", "1"):
            problems.append((line_no, f"politeness.tsv: polarity must be +1 or -1"))
            continue
        pol = 1 if polarity in ("+1", "1") else -1
        entry = politeness.setdefault(strategy, (pol, []))
        if entry[0] != pol:
            problems.append((line_no, f"politeness.tsv: conflicting polarity for {strategy!r}"))
            continue
        entry[1].append(phrase.lower())
    if problems:
        raise IngestError(problems)
    return LexiconSet(categories, valence, toxicity, politeness)


@functools.lru_cache(maxsize=1)
def default_lexicons() -> LexiconSet:
    """The lexicon set shipped with the package."""
    data_dir = resources.files("posiqueue").joinpath("data")
    with resources.as_file(data_dir) as path:
        return load_lexicons(path)


def lexicons_for(config: FeatureConfig) -> LexiconSet:
    if config.lexicon_dir is None:
        return default_lexicons()
    return load_lexicons(config.lexicon_dir)


# ---------------------------------------------------------------------------
# Feature cache: one JSON record per contribution id. Embeddings are stored
# as base64 little-endian float32 to keep the cache compact.


def _encode_embedding(v: np.ndarray) -> str:
    return base64.b64encode(np.asarray(v, dtype="<f4").tobytes()).decode("ascii")


def _decode_embedding(s: str) -> np.ndarray:
    return np.frombuffer(base64.b64decode(s), dtype="<f4").astype(np.float64)


def write_feature_cache(path: str | Path, features: Mapping[str, FeatureVector]) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        for cid in sorted(features):
            fv = features[cid]
            rec = {
                "id": cid,
                "categories": fv.category_proportions,
                "sentiment": fv.sentiment,
                "readability": fv.readability,
                "interrogative_ratio": fv.interrogative_ratio,
                "politeness": fv.politeness,
                "toxicity": fv.toxicity,
                "embedding_b64": _encode_embedding(fv.embedding),
            }
            fh.write(json.dumps(rec, ensure_ascii=False) + "\n")


def read_feature_cache(path: str | Path) -> dict[str, FeatureVector]:
    out: dict[str, FeatureVector] = {}
    with Path(path).open("r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
                out[rec["id"]] = FeatureVector(
                    category_proportions={c: float(v) for c, v in rec["categories"].items()},
                    sentiment=float(rec["sentiment"]),
                    readability=float(rec["readability"]),
                    interrogative_ratio=float(rec["interrogative_ratio"]),
                    politeness=float(rec["politeness"]),
                    toxicity=float(rec["toxicity"]),
                    embedding=_decode_embedding(rec["embedding_b64"]),
                )
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise IngestError([(line_no, f"feature cache: {exc}")]) from exc
    return out


def extract_all(
    contributions: Iterable[Contribution], lexicons: LexiconSet, config: FeatureConfig
) -> dict[str, FeatureVector]:
    return {c.id: extract_features(c, lexicons, config) for c in contributions}
