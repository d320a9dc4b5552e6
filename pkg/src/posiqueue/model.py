"""Desirability model: quartile labels, boosted trees, scoring, evaluation.

Labels come from score quartiles per kind: top quartile positive, bottom two
negative, third quartile discarded as a buffer. The classifier is a from-
scratch gradient-boosted tree ensemble under binary logistic loss with
second-order (Newton) leaf weights and exact greedy splits over presorted
feature columns. The split search is a numba kernel over a transposed
(feature-major) matrix; corpora here are desk-scale so exact splits beat
histogram approximations on simplicity with acceptable speed.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np
from numba import njit

from .corpus import Contribution, Corpus
from .errors import (
    DegenerateTrainingError,
    IngestError,
    InsufficientDataError,
    NotFoundError,
    ShapeError,
    StratificationError,
    UndefinedAUCError,
)
from .textfeat import FeatureVector, flatten

_LAMBDA = 1.0  # L2 regularization on leaf weights
_MIN_GAIN = 1e-12
MODEL_FORMAT = 1


@dataclass(frozen=True)
class TrainConfig:
    max_depth: int = 6
    rounds: int = 200
    learning_rate: float = 0.1
    min_leaf: int = 10
    split_ratio: float = 0.8
    seed: int = 0
    stratified: bool = True

    def __post_init__(self) -> None:
        if self.max_depth < 1:
            raise ValueError("max_depth must be >= 1")
        if not 0.0 < self.learning_rate <= 1.0:
            raise ValueError("learning_rate must be in (0, 1]")
        if not 0.0 < self.split_ratio < 1.0:
            raise ValueError("split_ratio must be in (0, 1)")
        if self.rounds < 0:
            raise ValueError("rounds must be >= 0")
        if self.min_leaf < 1:
            raise ValueError("min_leaf must be >= 1")


@dataclass
class LabeledExample:
    contribution_id: str
    features: np.ndarray
    label: int


@dataclass
class Tree:
    feature: np.ndarray  # int32; -1 marks a leaf
    threshold: np.ndarray  # float64; route left when x < threshold
    left: np.ndarray  # int32
    right: np.ndarray  # int32
    value: np.ndarray  # float64; leaf weight (already shrunk)

    def max_depth(self) -> int:
        deepest = 0
        stack = [(0, 0)]
        while stack:
            node, d = stack.pop()
            if self.feature[node] < 0:
                deepest = max(deepest, d)
            else:
                stack.append((int(self.left[node]), d + 1))
                stack.append((int(self.right[node]), d + 1))
        return deepest

    def leaf_supports(self, X: np.ndarray) -> list[int]:
        """Row count reaching each leaf; used by structural tests."""
        node_of = np.zeros(len(X), dtype=np.int64)
        for _ in range(64):
            moved = False
            for nd in np.unique(node_of):
                if self.feature[nd] < 0:
                    continue
                rows = np.where(node_of == nd)[0]
                goes_left = X[rows, self.feature[nd]] < self.threshold[nd]
                node_of[rows[goes_left]] = self.left[nd]
                node_of[rows[~goes_left]] = self.right[nd]
                moved = True
            if not moved:
                break
        return [int((node_of == nd).sum()) for nd in np.where(self.feature < 0)[0]]


@dataclass
class GBDTModel:
    kind: str
    feature_order: list[str]
    base_score: float
    config: TrainConfig
    trees: list[Tree]
    loss_trace: list[float]
    n_train: int
    _packed: tuple | None = field(default=None, repr=False, compare=False)


@dataclass
class EvalReport:
    kind: str
    accuracy: float
    auc: float
    n_train: int
    n_test: int
    confusion: dict[str, int]  # keys tp, fp, tn, fn

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "accuracy": self.accuracy,
            "auc": self.auc,
            "n_train": self.n_train,
            "n_test": self.n_test,
            "confusion": dict(self.confusion),
        }


# ---------------------------------------------------------------------------
# Labels and splits


def build_labels(
    corpus: Corpus, kind: str, features: Mapping[str, FeatureVector]
) -> list[LabeledExample]:
    """Quartile labels by score rank (ties by id): Q4 -> 1, Q1+Q2 -> 0, Q3 dropped."""
    items = [c for c in corpus.contributions if c.kind == kind]
    n = len(items)
    if n < 4:
        raise InsufficientDataError(f"need >= 4 {kind}s to build labels, have {n}")
    ranked = sorted(items, key=lambda c: (c.score, c.id))
    rank_of = {c.id: r for r, c in enumerate(ranked)}
    c2, c3 = (2 * n) // 4, (3 * n) // 4
    out: list[LabeledExample] = []
    for c in items:
        r = rank_of[c.id]
        if c2 <= r < c3:
            continue  # buffer quartile
        fv = features.get(c.id)
        if fv is None:
            raise NotFoundError(f"no cached features for {c.id!r}")
        out.append(LabeledExample(c.id, flatten(fv), 1 if r >= c3 else 0))
    return out


def split_train_test(
    examples: Sequence[LabeledExample], config: TrainConfig
) -> tuple[list[LabeledExample], list[LabeledExample]]:
    n = len(examples)
    if n < 5:
        raise InsufficientDataError(f"need >= 5 examples to split, have {n}")
    rng = np.random.default_rng(config.seed)
    n_train = int(math.floor(config.split_ratio * n + 0.5))
    if not config.stratified:
        perm = rng.permutation(n)
        train_idx, test_idx = perm[:n_train], perm[n_train:]
    else:
        by_class: dict[int, np.ndarray] = {}
        for label in (0, 1):
            idx = np.array([i for i, ex in enumerate(examples) if ex.label == label])
            if len(idx):
                by_class[label] = rng.permutation(idx)
        # Largest-remainder allocation keeps |train| exact and classes balanced.
        raw = {lbl: config.split_ratio * len(idx) for lbl, idx in by_class.items()}
        alloc = {lbl: int(math.floor(r)) for lbl, r in raw.items()}
        leftover = n_train - sum(alloc.values())
        for lbl in sorted(by_class, key=lambda l: (-(raw[l] - alloc[l]), l))[:leftover]:
            alloc[lbl] += 1
        for lbl, idx in by_class.items():
            if alloc[lbl] == 0 or alloc[lbl] == len(idx):
                raise StratificationError(
                    f"class {lbl} would be empty on one side of the split"
                )
        train_idx = np.concatenate([idx[: alloc[lbl]] for lbl, idx in by_class.items()])
        test_idx = np.concatenate([idx[alloc[lbl] :] for lbl, idx in by_class.items()])
        train_idx = rng.permutation(train_idx)
        test_idx = rng.permutation(test_idx)
    return [examples[i] for i in train_idx], [examples[i] for i in test_idx]


# ---------------------------------------------------------------------------
# Training


@njit(cache=True)
def _best_splits_level(
    order_T, X_T, g, h, node_of_row, n_nodes, lam, min_leaf, node_G, node_H, node_count
):
    """Exact greedy split search for every active node at one tree level.

    Scans each presorted feature column once, accumulating left-side gradient
    sums per node. Rows whose node is finalized carry node id -1.
    """
    F, n = X_T.shape
    best_gain = np.zeros((n_nodes, F))
    best_thresh = np.zeros((n_nodes, F))
    acc_g = np.zeros(n_nodes)
    acc_h = np.zeros(n_nodes)
    cnt = np.zeros(n_nodes, dtype=np.int64)
    prev_x = np.zeros(n_nodes)
    has_prev = np.zeros(n_nodes, dtype=np.uint8)
    for f in range(F):
        for k in range(n_nodes):
            acc_g[k] = 0.0
            acc_h[k] = 0.0
            cnt[k] = 0
            has_prev[k] = 0
        xrow = X_T[f]
        orow = order_T[f]
        for i in range(n):
            r = orow[i]
            nd = node_of_row[r]
            if nd < 0:
                continue
            x = xrow[r]
            if has_prev[nd] == 1 and x > prev_x[nd]:
                nl = cnt[nd]
                nr = node_count[nd] - nl
                if nl >= min_leaf and nr >= min_leaf:
                    gl = acc_g[nd]
                    hl = acc_h[nd]
                    gr = node_G[nd] - gl
                    hr = node_H[nd] - hl
                    gain = (
                        gl * gl / (hl + lam)
                        + gr * gr / (hr + lam)
                        - node_G[nd] * node_G[nd] / (node_H[nd] + lam)
                    )
                    if gain > best_gain[nd, f]:
                        best_gain[nd, f] = gain
                        best_thresh[nd, f] = (prev_x[nd] + x) * 0.5
            acc_g[nd] += g[r]
            acc_h[nd] += h[r]
            cnt[nd] += 1
            prev_x[nd] = x
            has_prev[nd] = 1
    return best_gain, best_thresh


@njit(cache=True)
def _predict_forest(X, feat, thresh, left, right, value, tree_offsets, out):
    n = X.shape[0]
    n_trees = tree_offsets.shape[0] - 1
    for i in range(n):
        s = 0.0
        for t in range(n_trees):
            node = tree_offsets[t]
            while feat[node] >= 0:
                if X[i, feat[node]] < thresh[node]:
                    node = left[node]
                else:
                    node = right[node]
            s += value[node]
        out[i] += s


def _build_tree(
    X_T: np.ndarray,
    order_T: np.ndarray,
    g: np.ndarray,
    h: np.ndarray,
    config: TrainConfig,
) -> tuple[Tree, np.ndarray]:
    """One tree, grown level-wise. Returns (tree, per-row leaf contribution)."""
    n = X_T.shape[1]
    lr = config.learning_rate
    feature = [-1]
    threshold = [0.0]
    left = [-1]
    right = [-1]
    value = [0.0]
    node_of_row = np.zeros(n, dtype=np.int32)
    row_value = np.zeros(n)
    active = [0]

    def finalize(nd: int, rows: np.ndarray, g_sum: float, h_sum: float) -> None:
        w = -lr * g_sum / (h_sum + _LAMBDA)
        value[nd] = w
        row_value[rows] = w
        node_of_row[rows] = -1

    for depth in range(config.max_depth):
        if not active:
            break
        n_nodes = len(feature)
        live = node_of_row[node_of_row >= 0]
        node_count = np.bincount(live, minlength=n_nodes).astype(np.int64)
        node_G = np.bincount(live, weights=g[node_of_row >= 0], minlength=n_nodes)
        node_H = np.bincount(live, weights=h[node_of_row >= 0], minlength=n_nodes)
        best_gain, best_thresh = _best_splits_level(
            order_T,
            X_T,
            g,
            h,
            node_of_row,
            n_nodes,
            _LAMBDA,
            config.min_leaf,
            node_G,
            node_H,
            node_count,
        )
        next_active: list[int] = []
        for nd in active:
            rows = np.where(node_of_row == nd)[0]
            f_best = int(np.argmax(best_gain[nd]))
            gain = float(best_gain[nd, f_best])
            if gain <= _MIN_GAIN:
                finalize(nd, rows, float(node_G[nd]), float(node_H[nd]))
                continue
            thr = float(best_thresh[nd, f_best])
            left_id = len(feature)
            right_id = left_id + 1
            feature[nd] = f_best
            threshold[nd] = thr
            left[nd] = left_id
            right[nd] = right_id
            for _ in range(2):
                feature.append(-1)
                threshold.append(0.0)
                left.append(-1)
                right.append(-1)
                value.append(0.0)
            goes_left = X_T[f_best, rows] < thr
            node_of_row[rows[goes_left]] = left_id
            node_of_row[rows[~goes_left]] = right_id
            next_active.extend((left_id, right_id))
        active = next_active
    for nd in active:
        rows = np.where(node_of_row == nd)[0]
        finalize(nd, rows, float(g[rows].sum()), float(h[rows].sum()))
    tree = Tree(
        feature=np.asarray(feature, dtype=np.int32),
        threshold=np.asarray(threshold, dtype=np.float64),
        left=np.asarray(left, dtype=np.int32),
        right=np.asarray(right, dtype=np.int32),
        value=np.asarray(value, dtype=np.float64),
    )
    return tree, row_value


def _sigmoid(m: np.ndarray) -> np.ndarray:
    return 1.0 / (1.0 + np.exp(-np.clip(m, -50.0, 50.0)))


def _logloss(y: np.ndarray, p: np.ndarray) -> float:
    p = np.clip(p, 1e-15, 1.0 - 1e-15)
    return float(-(y * np.log(p) + (1.0 - y) * np.log(1.0 - p)).mean())


def train_gbdt(
    train: Sequence[LabeledExample],
    config: TrainConfig,
    feature_order: list[str] | None = None,
    kind: str = "post",
) -> GBDTModel:
    if not train:
        raise InsufficientDataError("empty training set")
    y = np.array([ex.label for ex in train], dtype=np.float64)
    pos = float(y.sum())
    if pos == 0.0 or pos == len(y):
        raise DegenerateTrainingError("training set contains a single class")
    X = np.stack([ex.features for ex in train]).astype(np.float64)
    if feature_order is None:
        feature_order = [f"f{i}" for i in range(X.shape[1])]
    if len(feature_order) != X.shape[1]:
        raise ShapeError(
            f"feature_order has {len(feature_order)} names, matrix has {X.shape[1]} columns"
        )
    X_T = np.ascontiguousarray(X.T)
    order_T = np.ascontiguousarray(np.argsort(X_T, axis=1, kind="stable").astype(np.int32))
    prior = pos / len(y)
    base = math.log(prior / (1.0 - prior))
    margin = np.full(len(y), base)
    trees: list[Tree] = []
    trace = [_logloss(y, _sigmoid(margin))]
    for _ in range(config.rounds):
        p = _sigmoid(margin)
        g = p - y
        h = p * (1.0 - p)
        tree, row_value = _build_tree(X_T, order_T, g, h, config)
        margin += row_value
        trees.append(tree)
        trace.append(_logloss(y, _sigmoid(margin)))
    return GBDTModel(
        kind=kind,
        feature_order=list(feature_order),
        base_score=base,
        config=config,
        trees=trees,
        loss_trace=trace,
        n_train=len(train),
    )


# ---------------------------------------------------------------------------
# Prediction and evaluation


def _pack(model: GBDTModel):
    if model._packed is None:
        feats, thrs, lefts, rights, vals, offsets = [], [], [], [], [], [0]
        base = 0
        for t in model.trees:
            feats.append(t.feature)
            thrs.append(t.threshold)
            lefts.append(np.where(t.left >= 0, t.left + base, -1))
            rights.append(np.where(t.right >= 0, t.right + base, -1))
            vals.append(t.value)
            base += len(t.feature)
            offsets.append(base)
        if model.trees:
            packed = (
                np.concatenate(feats).astype(np.int32),
                np.concatenate(thrs),
                np.concatenate(lefts).astype(np.int32),
                np.concatenate(rights).astype(np.int32),
                np.concatenate(vals),
                np.asarray(offsets, dtype=np.int64),
            )
        else:
            packed = (
                np.zeros(0, np.int32),
                np.zeros(0),
                np.zeros(0, np.int32),
                np.zeros(0, np.int32),
                np.zeros(0),
                np.zeros(1, np.int64),
            )
        model._packed = packed
    return model._packed


def predict_probabilities(model: GBDTModel, X: np.ndarray) -> np.ndarray:
    X = np.ascontiguousarray(np.atleast_2d(np.asarray(X, dtype=np.float64)))
    if X.shape[1] != len(model.feature_order):
        raise ShapeError(
            f"expected {len(model.feature_order)} features, got {X.shape[1]}"
        )
    margin = np.full(X.shape[0], model.base_score)
    if model.trees:
        feat, thr, left, right, value, offsets = _pack(model)
        _predict_forest(X, feat, thr, left, right, value, offsets, margin)
    return _sigmoid(margin)


def predict_probability(model: GBDTModel, features: np.ndarray) -> float:
    features = np.asarray(features, dtype=np.float64)
    if features.ndim != 1:
        raise ShapeError(f"expected a 1-D feature vector, got shape {features.shape}")
    return float(predict_probabilities(model, features[None, :])[0])


def score_from_probability(p: float) -> int:
    """Integer 0..100, round-half-up (guarded against cases like 100*0.615)."""
    return int(math.floor(round(100.0 * p, 6) + 0.5))


def desirability_score(
    model: GBDTModel, contribution: Contribution, features: Mapping[str, FeatureVector]
) -> int:
    fv = features.get(contribution.id)
    if fv is None:
        raise NotFoundError(f"no cached features for {contribution.id!r}")
    return score_from_probability(predict_probability(model, flatten(fv)))


def auc(scores: Sequence[float], labels: Sequence[int]) -> float:
    """Rank-based AUC with mid-rank tie handling: P(s+ > s-) + 0.5 P(tie)."""
    s = np.asarray(scores, dtype=np.float64)
    y = np.asarray(labels)
    n_pos = int((y == 1).sum())
    n_neg = int((y == 0).sum())
    if n_pos == 0 or n_neg == 0:
        raise UndefinedAUCError("AUC needs both classes present")
    order = np.argsort(s, kind="mergesort")
    ranks = np.empty(len(s), dtype=np.float64)
    sorted_s = s[order]
    i = 0
    while i < len(s):
        j = i
        while j + 1 < len(s) and sorted_s[j + 1] == sorted_s[i]:
            j += 1
        ranks[order[i : j + 1]] = (i + j + 2) / 2.0  # 1-based mid-rank
        i = j + 1
    pos_rank_sum = float(ranks[y == 1].sum())
    return (pos_rank_sum - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)


def evaluate(
    model: GBDTModel, test: Sequence[LabeledExample], threshold: float = 0.5
) -> EvalReport:
    if not test:
        raise InsufficientDataError("empty test set")
    X = np.stack([ex.features for ex in test])
    y = np.array([ex.label for ex in test])
    p = predict_probabilities(model, X)
    pred = (p >= threshold).astype(int)
    tp = int(((pred == 1) & (y == 1)).sum())
    tn = int(((pred == 0) & (y == 0)).sum())
    fp = int(((pred == 1) & (y == 0)).sum())
    fn = int(((pred == 0) & (y == 1)).sum())
    return EvalReport(
        kind=model.kind,
        accuracy=(tp + tn) / len(test),
        auc=auc(p, y),
        n_train=model.n_train,
        n_test=len(test),
        confusion={"tp": tp, "fp": fp, "tn": tn, "fn": fn},
    )


def report_table(reports: Sequence[EvalReport], subreddit: str) -> str:
    """Human-readable accuracy/AUC table, one row per community."""
    cells = {"post": "    -/-    ", "comment": "    -/-    "}
    for r in reports:
        cells[r.kind] = f"{r.accuracy:.3f}/{r.auc:.3f}"
    header = f"{'Subreddit':<20} | {'Posts Acc/AUC':<14} | {'Comments Acc/AUC':<16}"
    rule = "-" * len(header)
    row = f"{subreddit:<20} | {cells['post']:<14} | {cells['comment']:<16}"
    return "\n".join([header, rule, row])


# ---------------------------------------------------------------------------
# Serialization


def save_model(model: GBDTModel, path: str | Path) -> None:
    doc = {
        "format": MODEL_FORMAT,
        "kind": model.kind,
        "feature_order": model.feature_order,
        "base_score": model.base_score,
        "n_train": model.n_train,
        "config": {
            "max_depth": model.config.max_depth,
            "rounds": model.config.rounds,
            "learning_rate": model.config.learning_rate,
            "min_leaf": model.config.min_leaf,
            "split_ratio": model.config.split_ratio,
            "seed": model.config.seed,
            "stratified": model.config.stratified,
        },
        "loss_trace": model.loss_trace,
        "trees": [
            {
                "feature": t.feature.tolist(),
                "threshold": t.threshold.tolist(),
                "left": t.left.tolist(),
                "right": t.right.tolist(),
                "value": t.value.tolist(),
            }
            for t in model.trees
        ],
    }
    Path(path).write_text(json.dumps(doc), encoding="utf-8")


def load_model(path: str | Path) -> GBDTModel:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise IngestError([(1, f"model file: invalid JSON: {exc.msg}")]) from exc
    if not isinstance(doc, dict) or doc.get("format") != MODEL_FORMAT:
        raise IngestError([(1, f"model file: unsupported format {doc.get('format')!r}")])
    cfg = doc["config"]
    trees = [
        Tree(
            feature=np.asarray(t["feature"], dtype=np.int32),
            threshold=np.asarray(t["threshold"], dtype=np.float64),
            left=np.asarray(t["left"], dtype=np.int32),
            right=np.asarray(t["right"], dtype=np.int32),
            value=np.asarray(t["value"], dtype=np.float64),
        )
        for t in doc["trees"]
    ]
    return GBDTModel(
        kind=doc["kind"],
        feature_order=list(doc["feature_order"]),
        base_score=float(doc["base_score"]),
        config=TrainConfig(
            max_depth=cfg["max_depth"],
            rounds=cfg["rounds"],
            learning_rate=cfg["learning_rate"],
            min_leaf=cfg["min_leaf"],
            split_ratio=cfg["split_ratio"],
            seed=cfg["seed"],
            stratified=cfg["stratified"],
        ),
        trees=trees,
        loss_trace=[float(x) for x in doc.get("loss_trace", [])],
        n_train=int(doc.get("n_train", 0)),
    )
