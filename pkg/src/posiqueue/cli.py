"""Command line front end.

Exit codes: 0 success, 2 for input or validation problems (malformed files,
dangling references, bad arguments), 3 for unexpected runtime failures.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
import traceback
from pathlib import Path

from .actions import (
    BestOfThread,
    DEFAULT_FLAIRS,
    bestof_filename,
    parse_period,
    read_action_log,
    render_bestof,
    replay_log,
)
from .corpus import Contribution, Corpus, ingest_corpus, write_corpus
from .errors import EngineError, ReplayError
from .model import (
    TrainConfig,
    build_labels,
    evaluate,
    load_model,
    predict_probability,
    report_table,
    save_model,
    score_from_probability,
    split_train_test,
    train_gbdt,
)
from .synth import SyntheticConfig, generate_synthetic_corpus
from .textfeat import (
    FeatureConfig,
    extract_all,
    extract_features,
    feature_names,
    flatten,
    lexicons_for,
    read_feature_cache,
    write_feature_cache,
)

_CONTRIBUTIONS = "contributions.jsonl"
_AUTHORS = "authors.jsonl"


def _corpus_paths(args: argparse.Namespace) -> tuple[Path, Path]:
    base = Path(args.corpus)
    return base / _CONTRIBUTIONS, base / _AUTHORS


def _load_corpus(args: argparse.Namespace) -> Corpus:
    contributions, authors = _corpus_paths(args)
    return ingest_corpus(contributions, authors)


def _feature_config_for_cache(features: dict, lexicon_dir: str | None) -> FeatureConfig:
    any_fv = next(iter(features.values()))
    return FeatureConfig(embedding_dim=len(any_fv.embedding), lexicon_dir=lexicon_dir)


# ---------------------------------------------------------------------------
# Subcommands


def _cmd_ingest(args: argparse.Namespace) -> int:
    corpus = _load_corpus(args)
    print(
        f"posts={len(corpus.posts)} comments={len(corpus.comments)} "
        f"authors={len(corpus.authors)}"
    )
    return 0


def _cmd_synth(args: argparse.Namespace) -> int:
    overrides: dict = {}
    if args.config:
        raw = json.loads(Path(args.config).read_text(encoding="utf-8"))
        valid = {f.name for f in dataclasses.fields(SyntheticConfig)}
        unknown = sorted(set(raw) - valid)
        if unknown:
            raise ValueError(f"unknown synthetic config keys: {', '.join(unknown)}")
        overrides.update(raw)
    for name in (
        "n_posts",
        "seed",
        "peak_year",
        "comments_per_post",
        "karma_age_correlation",
        "signal_strength",
        "signal_fraction",
        "subreddit",
    ):
        v = getattr(args, name)
        if v is not None:
            overrides[name] = v
    config = SyntheticConfig(**overrides)
    corpus = generate_synthetic_corpus(config)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_corpus(corpus, out / _CONTRIBUTIONS, out / _AUTHORS)
    print(
        f"wrote {out / _CONTRIBUTIONS} and {out / _AUTHORS}: "
        f"posts={len(corpus.posts)} comments={len(corpus.comments)} "
        f"authors={len(corpus.authors)} seed={config.seed}"
    )
    return 0


def _cmd_features(args: argparse.Namespace) -> int:
    corpus = _load_corpus(args)
    config = FeatureConfig(
        embedding_dim=args.embedding_dim, lexicon_dir=args.lexicons
    )
    lexicons = lexicons_for(config)
    features = extract_all(corpus.contributions, lexicons, config)
    write_feature_cache(args.out, features)
    print(f"features={len(features)} dim={len(feature_names(lexicons, config))} -> {args.out}")
    return 0


def _cmd_train(args: argparse.Namespace) -> int:
    corpus = _load_corpus(args)
    features = read_feature_cache(args.features)
    config = TrainConfig(
        max_depth=args.max_depth,
        rounds=args.rounds,
        learning_rate=args.learning_rate,
        min_leaf=args.min_leaf,
        split_ratio=args.split_ratio,
        seed=args.seed,
    )
    examples = build_labels(corpus, args.kind, features)
    train, test = split_train_test(examples, config)
    feat_config = _feature_config_for_cache(features, args.lexicons)
    order = feature_names(lexicons_for(feat_config), feat_config)
    model = train_gbdt(train, config, feature_order=order, kind=args.kind)
    save_model(model, args.out)
    print(
        f"trained kind={args.kind} trees={len(model.trees)} "
        f"train={len(train)} test={len(test)} "
        f"loss {model.loss_trace[0]:.4f} -> {model.loss_trace[-1]:.4f} -> {args.out}"
    )
    return 0


def _cmd_eval(args: argparse.Namespace) -> int:
    corpus = _load_corpus(args)
    features = read_feature_cache(args.features)
    reports = []
    for path in args.model:
        model = load_model(path)
        examples = build_labels(corpus, model.kind, features)
        _, test = split_train_test(examples, model.config)
        report = evaluate(model, test)
        reports.append(report)
        out_path = Path(path).with_suffix(Path(path).suffix + ".eval.json")
        out_path.write_text(json.dumps(report.to_dict(), indent=2) + "\n", encoding="utf-8")
    print(report_table(reports, args.subreddit or corpus.contributions[0].subreddit))
    return 0


def _cmd_score(args: argparse.Namespace) -> int:
    model = load_model(args.model)
    if args.text == "-":
        text = sys.stdin.read()
    elif args.file:
        text = Path(args.file).read_text(encoding="utf-8")
    else:
        text = args.text or ""
    emb_dim = sum(1 for n in model.feature_order if n.startswith("emb_"))
    config = FeatureConfig(embedding_dim=emb_dim, lexicon_dir=args.lexicons)
    lexicons = lexicons_for(config)
    expected = feature_names(lexicons, config)
    if expected != model.feature_order:
        raise ValueError(
            "model feature schema does not match the lexicons; pass the "
            "--lexicons directory the model was trained with"
        )
    stub = Contribution(
        id="adhoc",
        kind=model.kind,
        subreddit="adhoc",
        title=None,
        body=text,
        author_id="adhoc",
        created_utc=0,
        score=0,
    )
    fv = extract_features(stub, lexicons, config)
    print(score_from_probability(predict_probability(model, flatten(fv))))
    return 0


def _cmd_bestof(args: argparse.Namespace) -> int:
    corpus = _load_corpus(args)
    start, end, mode = parse_period(args.period)
    records = read_action_log(args.log) if Path(args.log).exists() else []
    flairs = tuple(args.flair) if args.flair else DEFAULT_FLAIRS
    state, _ = replay_log(records, corpus, flairs, mode)
    title = "Best of the week" if mode == "weekly" else "Best of the month"
    thread = state.threads.get(start, BestOfThread(start, end, title))
    markdown = render_bestof(thread)
    print(markdown, end="")
    if args.out:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        target = out_dir / bestof_filename(thread)
        target.write_text(markdown, encoding="utf-8")
        print(f"wrote {target}", file=sys.stderr)
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    from .service import CONFIG_ENV_VAR, create_app, load_service_config

    config_path = args.config or os.environ.get(CONFIG_ENV_VAR)
    if not config_path:
        raise ValueError(
            f"pass --config or set {CONFIG_ENV_VAR} to the service config path"
        )
    config = load_service_config(config_path)
    if args.host:
        config.host = args.host
    if args.port:
        config.port = args.port
    app = create_app(config)
    service = app.state.service
    print(
        f"serving http://{config.host}:{config.port} "
        f"posts={len(service.snap.corpus.posts)} "
        f"comments={len(service.snap.corpus.comments)}",
        flush=True,
    )
    import uvicorn

    uvicorn.run(app, host=config.host, port=config.port, log_level="warning")
    return 0


# ---------------------------------------------------------------------------
# Parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="posiqueue",
        description="Positive-moderation queue engine: ingest, train, score, serve.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="validate a corpus directory")
    p.add_argument("--corpus", required=True, help="directory with contributions.jsonl and authors.jsonl")
    p.set_defaults(func=_cmd_ingest)

    p = sub.add_parser("synth", help="generate a synthetic corpus")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--config", help="JSON file of generator settings")
    p.add_argument("--posts", dest="n_posts", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--peak-year", dest="peak_year", type=int)
    p.add_argument("--comments-per-post", dest="comments_per_post", type=float)
    p.add_argument("--karma-age-correlation", dest="karma_age_correlation", type=float)
    p.add_argument("--signal-strength", dest="signal_strength", type=float)
    p.add_argument("--signal-fraction", dest="signal_fraction", type=float)
    p.add_argument("--subreddit")
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("features", help="extract and cache text features")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True, help="feature cache path (jsonl)")
    p.add_argument("--lexicons", help="lexicon directory (defaults to the bundled set)")
    p.add_argument("--embedding-dim", dest="embedding_dim", type=int, default=384)
    p.set_defaults(func=_cmd_features)

    p = sub.add_parser("train", help="train a desirability model")
    p.add_argument("--corpus", required=True)
    p.add_argument("--features", required=True)
    p.add_argument("--kind", choices=("post", "comment"), required=True)
    p.add_argument("--out", required=True, help="model output path (json)")
    p.add_argument("--lexicons")
    p.add_argument("--max-depth", dest="max_depth", type=int, default=6)
    p.add_argument("--rounds", type=int, default=200)
    p.add_argument("--learning-rate", dest="learning_rate", type=float, default=0.1)
    p.add_argument("--min-leaf", dest="min_leaf", type=int, default=10)
    p.add_argument("--split-ratio", dest="split_ratio", type=float, default=0.8)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("eval", help="evaluate models on their held-out split")
    p.add_argument("--model", action="append", required=True)
    p.add_argument("--corpus", required=True)
    p.add_argument("--features", required=True)
    p.add_argument("--subreddit", help="label for the report row")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("score", help="score a text through a trained model")
    p.add_argument("--model", required=True)
    p.add_argument("--text", help="text to score, or '-' for stdin")
    p.add_argument("--file", help="read text from a file")
    p.add_argument("--lexicons")
    p.set_defaults(func=_cmd_score)

    p = sub.add_parser("bestof", help="render a best-of thread from the action log")
    p.add_argument("--log", required=True, help="action log path")
    p.add_argument("--corpus", required=True)
    p.add_argument("--period", required=True, help="e.g. 2024-W05 (weekly) or 2024-05 (monthly)")
    p.add_argument("--out", help="directory for the rendered markdown file")
    p.add_argument("--flair", action="append", help="configured flair (repeatable)")
    p.set_defaults(func=_cmd_bestof)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--config", help="service config path (or POSIQUEUE_CONFIG)")
    p.add_argument("--host")
    p.add_argument("--port", type=int)
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ReplayError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (EngineError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception:  # pragma: no cover - unexpected
        traceback.print_exc()
        return 3


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
