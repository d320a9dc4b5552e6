"""Shared fixtures: a small synthetic corpus, cached features, and tiny
trained models reused by the service and CLI tests."""

from __future__ import annotations

from pathlib import Path

import pytest

import posiqueue as pq
from posiqueue.textfeat import write_feature_cache


def make_author(aid: str, karma: int = 100, created: int = 1_500_000_000, name: str | None = None) -> pq.Author:
    return pq.Author(id=aid, name=name or aid, karma=karma, created_utc=created)


def make_post(
    pid: str,
    author: str = "a1",
    created: int = 1_600_000_000,
    score: int = 10,
    title: str = "A title",
    body: str = "A body.",
    subreddit: str = "unit",
    flair: str | None = None,
    num_reports: int = 0,
) -> pq.Contribution:
    return pq.Contribution(
        id=pid,
        kind="post",
        subreddit=subreddit,
        title=title,
        body=body,
        author_id=author,
        created_utc=created,
        score=score,
        flair=flair,
        num_reports=num_reports,
    )


def make_comment(
    cid: str,
    parent: str,
    link: str,
    author: str = "a1",
    created: int = 1_600_000_100,
    score: int = 3,
    body: str = "A comment body.",
    subreddit: str = "unit",
) -> pq.Contribution:
    return pq.Contribution(
        id=cid,
        kind="comment",
        subreddit=subreddit,
        title=None,
        body=body,
        author_id=author,
        created_utc=created,
        score=score,
        parent_id=parent,
        link_id=link,
    )


@pytest.fixture(scope="session")
def lexicons() -> pq.LexiconSet:
    return pq.default_lexicons()


@pytest.fixture(scope="session")
def feat_config() -> pq.FeatureConfig:
    return pq.FeatureConfig(embedding_dim=16)


@pytest.fixture(scope="session")
def tiny_corpus() -> pq.Corpus:
    return pq.generate_synthetic_corpus(pq.SyntheticConfig(n_posts=12, seed=3))


@pytest.fixture(scope="session")
def engine_assets(tmp_path_factory, lexicons, feat_config):
    """Corpus files, feature cache, and two trained models in one directory."""
    base = tmp_path_factory.mktemp("assets")
    corpus = pq.generate_synthetic_corpus(
        pq.SyntheticConfig(n_posts=24, seed=4, signal_strength=0.8)
    )
    pq.write_corpus(corpus, base / "contributions.jsonl", base / "authors.jsonl")
    features = pq.extract_all(corpus.contributions, lexicons, feat_config)
    write_feature_cache(base / "features.jsonl", features)
    order = pq.feature_names(lexicons, feat_config)
    config = pq.TrainConfig(rounds=8, max_depth=3, min_leaf=3, seed=1)
    for kind in ("post", "comment"):
        examples = pq.build_labels(corpus, kind, features)
        train, _ = pq.split_train_test(examples, config)
        model = pq.train_gbdt(train, config, feature_order=order, kind=kind)
        pq.save_model(model, base / f"{kind}_model.json")
    return {"dir": base, "corpus": corpus, "features": features}


@pytest.fixture()
def service_client(engine_assets, tmp_path):
    """A TestClient over fresh action state; corpus and models are shared."""
    from fastapi.testclient import TestClient

    from posiqueue.service import ServiceConfig, create_app

    base: Path = engine_assets["dir"]
    config = ServiceConfig(
        corpus_dir=str(base),
        post_model=str(base / "post_model.json"),
        comment_model=str(base / "comment_model.json"),
        features=str(base / "features.jsonl"),
        action_log=str(tmp_path / "actions.jsonl"),
        reasons=str(tmp_path / "reasons.jsonl"),
    )
    app = create_app(config, now_fn=lambda: 1_700_000_000.0)
    with TestClient(app) as client:
        yield client
