"""HTTP+JSON service exposing the queue, hover cards, and reward actions.

All mutations go through a single ActionEngine; desirability scores and
visual cues are frozen per corpus snapshot and rebuilt only when the corpus
itself changes (an explanation posts a reply comment). Query parameters are
parsed by hand so malformed tokens and out-of-range thresholds return 400
while structurally valid requests that miss (page beyond range, bad action
payloads) return 422.
"""

from __future__ import annotations

import json
import math
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Mapping

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from . import __version__
from .actions import (
    ACTIONS,
    ActionEngine,
    BestOfThread,
    DEFAULT_FLAIRS,
    ReasonStore,
    build_explanation,
    make_preview,
    period_token,
    render_bestof,
)
from .corpus import Contribution, Corpus, comment_section, ingest_corpus
from .errors import EngineError, IngestError
from .model import GBDTModel, desirability_score, load_model
from .queue import (
    CUE_CATEGORIES,
    CueCategory,
    DEFAULT_NEWCOMER_THRESHOLD_DAYS,
    FILTER_TO_METRIC,
    FilterSpec,
    SORT_KEYS,
    build_metric_table,
    cue_categories_bulk,
    hover_histograms,
    slider_maxima,
    sort_queue,
)
from .textfeat import (
    FeatureConfig,
    FeatureVector,
    extract_all,
    extract_features,
    feature_names,
    lexicons_for,
    read_feature_cache,
    write_feature_cache,
)

CONFIG_ENV_VAR = "POSIQUEUE_CONFIG"
DEFAULT_PAGE_SIZE = 25
MAX_PAGE_SIZE = 100

FILTER_LABELS = {
    "min_desirability": "Desirability",
    "min_score": "Score",
    "min_author_karma": "Author karma",
    "min_author_age_days": "Author account age (days)",
    "min_avg_comment_desirability": "Avg comment desirability",
    "min_avg_comment_score": "Avg comment score",
    "min_newcomer_commenters": "Newcomer commenters",
}

# Implemented but hidden from default UI controls.
DISABLED_SORTS = ("most_reported",)


@dataclass
class ServiceConfig:
    corpus_dir: str
    post_model: str
    comment_model: str
    features: str | None = None
    lexicons: str | None = None
    newcomer_threshold_days: float = DEFAULT_NEWCOMER_THRESHOLD_DAYS
    bestof_period: str = "weekly"
    flairs: tuple[str, ...] = DEFAULT_FLAIRS
    moderator: str = "mod"
    action_log: str | None = None
    reasons: str | None = None
    auth_token: str | None = None
    cors_origins: tuple[str, ...] = ("*",)
    host: str = "127.0.0.1"
    port: int = 8787

    def __post_init__(self) -> None:
        if self.bestof_period not in ("weekly", "monthly"):
            raise ValueError(
                f"bestof_period must be 'weekly' or 'monthly', got {self.bestof_period!r}"
            )
        if not self.flairs:
            raise ValueError("flairs must not be empty")


def load_service_config(path: str | Path) -> ServiceConfig:
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError as exc:
        raise IngestError([(0, f"{path}: config file not found")]) from exc
    except json.JSONDecodeError as exc:
        raise IngestError([(exc.lineno, f"{path}: invalid JSON: {exc.msg}")]) from exc
    if not isinstance(raw, dict):
        raise IngestError([(0, f"{path}: config must be a JSON object")])
    problems: list[tuple[int, str]] = []
    for key in ("corpus_dir", "post_model", "comment_model"):
        if not isinstance(raw.get(key), str):
            problems.append((0, f"{path}: missing or non-string {key!r}"))
    if problems:
        raise IngestError(problems)
    kwargs: dict[str, Any] = {
        "corpus_dir": raw["corpus_dir"],
        "post_model": raw["post_model"],
        "comment_model": raw["comment_model"],
    }
    for key in ("features", "lexicons", "moderator", "action_log", "reasons",
                "auth_token", "bestof_period", "host"):
        if key in raw and raw[key] is not None:
            kwargs[key] = str(raw[key])
    if "newcomer_threshold_days" in raw:
        kwargs["newcomer_threshold_days"] = float(raw["newcomer_threshold_days"])
    if "port" in raw:
        kwargs["port"] = int(raw["port"])
    if "flairs" in raw:
        kwargs["flairs"] = tuple(str(f) for f in raw["flairs"])
    if "cors_origins" in raw:
        kwargs["cors_origins"] = tuple(str(o) for o in raw["cors_origins"])
    try:
        return ServiceConfig(**kwargs)
    except ValueError as exc:
        raise IngestError([(0, f"{path}: {exc}")]) from exc


class ApiError(Exception):
    def __init__(self, status: int, code: str, detail: str):
        self.status = status
        self.code = code
        self.detail = detail
        super().__init__(detail)


# EngineError code -> HTTP status. Wrong-kind maps to 404: the id exists but
# not under this resource type, and the detail carries a redirect hint.
_STATUS_FOR_CODE = {
    "not_found": 404,
    "wrong_kind": 404,
    "duplicate": 409,
    "capacity": 409,
    "already_voted": 409,
    "invalid_flair": 422,
    "empty_reason": 422,
    "ingest_error": 400,
}


def _as_api_error(exc: EngineError) -> ApiError:
    status = _STATUS_FOR_CODE.get(exc.code, 500)
    return ApiError(status, exc.code, exc.detail)


@dataclass
class Snapshot:
    """Immutable view derived from one corpus state."""

    corpus: Corpus
    features: dict[str, FeatureVector]
    scores: dict[str, int]
    cues: dict[str, CueCategory]
    reference_utc: int = field(init=False)

    def __post_init__(self) -> None:
        self.reference_utc = max(
            (c.created_utc for c in self.corpus.contributions), default=0
        )


class EngineService:
    """Owns the models, the action engine, and the per-snapshot caches."""

    def __init__(self, config: ServiceConfig, now_fn: Callable[[], float] = time.time):
        self.config = config
        self.now_fn = now_fn
        corpus_dir = Path(config.corpus_dir)
        corpus = ingest_corpus(
            corpus_dir / "contributions.jsonl", corpus_dir / "authors.jsonl"
        )
        self.post_model = load_model(config.post_model)
        self.comment_model = load_model(config.comment_model)
        emb_dims = [
            sum(1 for n in m.feature_order if n.startswith("emb_"))
            for m in (self.post_model, self.comment_model)
        ]
        if emb_dims[0] != emb_dims[1]:
            raise IngestError([(0, "post and comment models disagree on embedding size")])
        self.feature_config = FeatureConfig(
            embedding_dim=emb_dims[0], lexicon_dir=config.lexicons
        )
        self.lexicons = lexicons_for(self.feature_config)
        expected = feature_names(self.lexicons, self.feature_config)
        for m in (self.post_model, self.comment_model):
            if m.feature_order != expected:
                raise IngestError(
                    [(0, f"{m.kind} model feature schema does not match the lexicons")]
                )
        features: dict[str, FeatureVector] = {}
        if config.features and Path(config.features).exists():
            features = read_feature_cache(config.features)
        missing = [c for c in corpus.contributions if c.id not in features]
        if missing:
            features.update(extract_all(missing, self.lexicons, self.feature_config))
            if config.features:
                write_feature_cache(config.features, features)
        log_path = config.action_log or str(corpus_dir / "actions.jsonl")
        reasons_path = config.reasons or str(corpus_dir / "reasons.jsonl")
        self.engine = ActionEngine(
            corpus,
            flair_names=config.flairs,
            period_mode=config.bestof_period,
            log_path=log_path,
            now_fn=now_fn,
        )
        self.reasons = ReasonStore(reasons_path)
        self._feature_cache = features
        self._mutate = threading.Lock()
        self.snap = self._build_snapshot(self.engine.corpus)

    def _build_snapshot(self, corpus: Corpus) -> Snapshot:
        for c in corpus.contributions:
            if c.id not in self._feature_cache:
                self._feature_cache[c.id] = extract_features(
                    c, self.lexicons, self.feature_config
                )
        scores: dict[str, int] = {}
        for c in corpus.contributions:
            model = self.post_model if c.is_post else self.comment_model
            scores[c.id] = desirability_score(model, c, self._feature_cache)
        cues: dict[str, CueCategory] = {}
        for pool in (corpus.posts, corpus.comments):
            if not pool:
                continue
            pool_scores = [scores[c.id] for c in pool]
            for c, cue in zip(pool, cue_categories_bulk(pool_scores)):
                cues[c.id] = cue
        return Snapshot(corpus, dict(self._feature_cache), scores, cues)

    def act(
        self, action: str, target_id: str, moderator: str, payload: Mapping[str, Any]
    ) -> dict:
        with self._mutate:
            result = self.engine.do(action, target_id, moderator, payload)
            if self.engine.corpus is not self.snap.corpus:
                self.snap = self._build_snapshot(self.engine.corpus)
            return result

    # Views -----------------------------------------------------------------

    def metric_table(self, snap: Snapshot) -> dict[str, dict[str, float]]:
        return build_metric_table(
            snap.corpus,
            snap.scores,
            self.config.newcomer_threshold_days,
            reference_utc=snap.reference_utc,
            score_of=self.engine.effective_score,
        )

    def _author_view(self, snap: Snapshot, author_id: str) -> dict:
        a = snap.corpus.authors_by_id[author_id]
        age_days = (snap.reference_utc - a.created_utc) / 86400.0
        return {
            "id": a.id,
            "name": a.name,
            "karma": a.karma,
            "account_age_days": round(age_days, 1),
        }

    def _cue_view(self, snap: Snapshot, cid: str) -> dict:
        cue = snap.cues[cid]
        return {"category": cue.token, "color_token": cue.color_token, "rank": cue.rank}

    def queue_item_view(
        self, snap: Snapshot, post: Contribution, metrics: Mapping[str, Mapping[str, float]]
    ) -> dict:
        now = int(self.now_fn())
        row = metrics[post.id]
        return {
            "id": post.id,
            "kind": post.kind,
            "title": post.title,
            "preview": make_preview(post.body),
            "subreddit": post.subreddit,
            "created_utc": post.created_utc,
            "score": self.engine.effective_score(post),
            "num_reports": post.num_reports,
            "desirability_score": snap.scores[post.id],
            "cue": self._cue_view(snap, post.id),
            "author": self._author_view(snap, post.author_id),
            "metrics": {k: row[k] for k in FILTER_TO_METRIC.values()},
            "comment_count": len(snap.corpus.comments_by_post.get(post.id, [])),
            "award_count": self.engine.award_count(post.id),
            "flair": self.engine.effective_flair(post),
            "curated": self.engine.is_curated(post.id, now),
            "highlighted": post.id in self.engine.state.highlights,
            "upvote_count": len(self.engine.state.upvotes.get(post.id, [])),
        }

    def comment_view(self, snap: Snapshot, c: Contribution) -> dict:
        now = int(self.now_fn())
        return {
            "id": c.id,
            "kind": c.kind,
            "body": c.body,
            "created_utc": c.created_utc,
            "score": self.engine.effective_score(c),
            "desirability_score": snap.scores[c.id],
            "cue": self._cue_view(snap, c.id),
            "author": self._author_view(snap, c.author_id),
            "award_count": self.engine.award_count(c.id),
            "upvote_count": len(self.engine.state.upvotes.get(c.id, [])),
            "curated": self.engine.is_curated(c.id, now),
        }

    def comment_tree(self, snap: Snapshot, post: Contribution) -> list[dict]:
        flat = snap.corpus.comments_by_post.get(post.id, [])
        children: dict[str, list[Contribution]] = {}
        for c in flat:
            children.setdefault(c.parent_id, []).append(c)

        def build(parent_id: str) -> list[dict]:
            out = []
            for c in children.get(parent_id, []):
                view = self.comment_view(snap, c)
                view["replies"] = build(c.id)
                out.append(view)
            return out

        return build(post.id)

    def thread_view(self, thread: BestOfThread) -> dict:
        return {
            "period": period_token(thread.period_start, self.config.bestof_period),
            "period_start": thread.period_start,
            "period_end": thread.period_end,
            "title": thread.title,
            "submissions": [{"id": i, "title": t} for i, t in thread.submissions],
            "comments": [{"id": i, "preview": p} for i, p in thread.comments],
        }


def _histogram_view(h) -> dict:
    return {
        "bin_edges": h.bin_edges,
        "counts": h.counts,
        "value_range": list(h.value_range),
    }


def _parse_float(name: str, raw: str) -> float:
    try:
        v = float(raw)
    except ValueError:
        raise ApiError(400, "bad_request", f"{name} must be a number, got {raw!r}")
    if math.isnan(v) or math.isinf(v):
        raise ApiError(400, "bad_request", f"{name} must be finite")
    return v


def _parse_int(name: str, raw: str) -> int:
    try:
        return int(raw)
    except ValueError:
        raise ApiError(400, "bad_request", f"{name} must be an integer, got {raw!r}")


def create_app(
    config: ServiceConfig, now_fn: Callable[[], float] = time.time
) -> FastAPI:
    service = EngineService(config, now_fn)
    app = FastAPI(title="posiqueue", version=__version__, docs_url=None, redoc_url=None)
    app.state.service = service

    if config.cors_origins:
        app.add_middleware(
            CORSMiddleware,
            allow_origins=list(config.cors_origins),
            allow_methods=["*"],
            allow_headers=["*"],
        )

    @app.exception_handler(ApiError)
    async def _api_error(request: Request, exc: ApiError):
        return JSONResponse(
            status_code=exc.status, content={"error": exc.code, "detail": exc.detail}
        )

    @app.exception_handler(EngineError)
    async def _engine_error(request: Request, exc: EngineError):
        err = _as_api_error(exc)
        return JSONResponse(
            status_code=err.status, content={"error": err.code, "detail": err.detail}
        )

    @app.exception_handler(RequestValidationError)
    async def _validation_error(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=422,
            content={"error": "invalid_payload", "detail": str(exc.errors()[:3])},
        )

    if config.auth_token:

        @app.middleware("http")
        async def _auth(request: Request, call_next):
            path = request.url.path
            if path.startswith("/api/") and path != "/api/health" \
                    and request.method != "OPTIONS":
                expected = f"Bearer {config.auth_token}"
                if request.headers.get("authorization") != expected:
                    return JSONResponse(
                        status_code=401,
                        content={"error": "unauthorized", "detail": "bearer token required"},
                    )
            return await call_next(request)

    # Read side --------------------------------------------------------------

    @app.get("/api/health")
    def health() -> dict:
        snap = service.snap
        return {
            "status": "ok",
            "version": __version__,
            "posts": len(snap.corpus.posts),
            "comments": len(snap.corpus.comments),
            "moderator": config.moderator,
        }

    @app.get("/api/queue")
    def queue(request: Request) -> dict:
        snap = service.snap
        params = request.query_params
        known = {"sort", "page", "page_size", *FILTER_TO_METRIC.keys()}
        for key in params.keys():
            if key not in known:
                raise ApiError(400, "bad_request", f"unknown query parameter {key!r}")
        sort = params.get("sort", "newest")
        if sort not in SORT_KEYS:
            raise ApiError(
                400, "bad_request",
                f"unknown sort key {sort!r}; expected one of {', '.join(SORT_KEYS)}",
            )
        page = _parse_int("page", params.get("page", "1"))
        if page < 1:
            raise ApiError(400, "bad_request", f"page must be >= 1, got {page}")
        page_size = _parse_int("page_size", params.get("page_size", str(DEFAULT_PAGE_SIZE)))
        if not 1 <= page_size <= MAX_PAGE_SIZE:
            raise ApiError(
                400, "bad_request",
                f"page_size must be within [1, {MAX_PAGE_SIZE}], got {page_size}",
            )
        filter_args: dict[str, float] = {}
        for token in FILTER_TO_METRIC:
            raw = params.get(token)
            if raw is not None:
                filter_args[token] = _parse_float(token, raw)
        try:
            spec = FilterSpec(**filter_args)
        except ValueError as exc:
            raise ApiError(400, "bad_request", str(exc))
        metrics = service.metric_table(snap)
        selected = [
            p
            for p in snap.corpus.posts
            if all(metrics[p.id][m] >= t for m, t in spec.thresholds().items())
        ]
        ordered = sort_queue(selected, sort, metrics)
        total = len(ordered)
        pages = max(1, math.ceil(total / page_size))
        if page > pages:
            raise ApiError(
                422, "page_out_of_range", f"page {page} is beyond the last page ({pages})"
            )
        window = ordered[(page - 1) * page_size : page * page_size]
        return {
            "items": [service.queue_item_view(snap, p, metrics) for p in window],
            "total": total,
            "page": page,
            "page_size": page_size,
            "pages": pages,
            "sort": sort,
            "filters": filter_args,
        }

    @app.get("/api/posts/{post_id}")
    def post_detail(post_id: str) -> dict:
        snap = service.snap
        comment_section(snap.corpus, post_id)  # raises 404 / wrong-kind
        post = snap.corpus.by_id[post_id]
        metrics = service.metric_table(snap)
        view = service.queue_item_view(snap, post, metrics)
        view["body"] = post.body
        view["comments"] = service.comment_tree(snap, post)
        return view

    @app.get("/api/posts/{post_id}/hover")
    def post_hover(post_id: str) -> dict:
        snap = service.snap
        c = snap.corpus.by_id.get(post_id)
        if c is None:
            raise ApiError(404, "not_found", f"no contribution with id {post_id!r}")
        if not c.is_post:
            raise ApiError(
                404, "wrong_kind",
                f"{post_id} is a comment; use /api/comments/{post_id}/hover",
            )
        section = snap.corpus.comments_by_post.get(post_id, [])
        des, red = hover_histograms(
            c,
            [snap.scores[x.id] for x in section],
            [service.engine.effective_score(x) for x in section],
        )
        cue = snap.cues[post_id]
        return {
            "id": post_id,
            "desirability_score": snap.scores[post_id],
            "category": cue.token,
            "color_token": cue.color_token,
            "desirability_histogram": _histogram_view(des),
            "score_histogram": _histogram_view(red),
        }

    @app.get("/api/comments/{comment_id}/hover")
    def comment_hover(comment_id: str) -> dict:
        snap = service.snap
        c = snap.corpus.by_id.get(comment_id)
        if c is None:
            raise ApiError(404, "not_found", f"no contribution with id {comment_id!r}")
        if c.is_post:
            raise ApiError(
                404, "wrong_kind",
                f"{comment_id} is a post; use /api/posts/{comment_id}/hover",
            )
        cue = snap.cues[comment_id]
        return {
            "id": comment_id,
            "desirability_score": snap.scores[comment_id],
            "category": cue.token,
            "color_token": cue.color_token,
        }

    @app.get("/api/filters/meta")
    def filters_meta() -> dict:
        snap = service.snap
        metrics = service.metric_table(snap)
        maxima = slider_maxima(snap.corpus, metrics)
        filters = []
        for token, metric in FILTER_TO_METRIC.items():
            entry = maxima[metric]
            filters.append(
                {
                    "key": token,
                    "metric": metric,
                    "label": FILTER_LABELS[token],
                    "max": entry["max"],
                    "step": entry["step"],
                }
            )
        return {
            "filters": filters,
            "sorts": list(SORT_KEYS),
            "disabled_sorts": list(DISABLED_SORTS),
            "default_sort": "newest",
            "newcomer_threshold_days": service.config.newcomer_threshold_days,
            "cue_categories": [
                {"category": c.token, "color_token": c.color_token, "rank": c.rank}
                for c in CUE_CATEGORIES
            ],
            "flairs": list(config.flairs),
            "page_size": {"default": DEFAULT_PAGE_SIZE, "max": MAX_PAGE_SIZE},
        }

    @app.get("/api/explain/preview")
    def explain_preview(request: Request) -> dict:
        params = request.query_params
        kind = params.get("kind", "post")
        if kind not in ("post", "comment"):
            raise ApiError(400, "bad_request", f"kind must be post or comment, got {kind!r}")
        ids = params.getlist("reason")
        custom = params.getlist("custom")
        by_id = service.reasons.by_id()
        selected = []
        for rid in ids:
            if rid not in by_id:
                raise ApiError(422, "invalid_payload", f"unknown reason id {rid!r}")
            selected.append(by_id[rid])
        text = build_explanation(kind, selected, custom)
        return {"kind": kind, "text": text}

    @app.get("/api/bestof/current")
    def bestof_current() -> dict:
        thread = service.engine.current_thread()
        view = service.thread_view(thread)
        view["rendered_markdown"] = render_bestof(thread)
        return view

    @app.get("/api/config/reasons")
    def list_reasons() -> dict:
        return {
            "reasons": [
                {"id": r.id, "label": r.label, "origin": r.origin}
                for r in service.reasons.list()
            ]
        }

    @app.put("/api/config/reasons")
    def add_reason(body: dict) -> dict:
        label = body.get("label")
        if not isinstance(label, str):
            raise ApiError(422, "invalid_payload", "body must carry a string 'label'")
        added = service.reasons.add_custom(label)
        return {
            "added": {"id": added.id, "label": added.label, "origin": added.origin},
            "reasons": [
                {"id": r.id, "label": r.label, "origin": r.origin}
                for r in service.reasons.list()
            ],
        }

    # Write side --------------------------------------------------------------

    @app.post("/api/actions/{verb}")
    def act(verb: str, body: dict) -> dict:
        if verb not in ACTIONS:
            raise ApiError(404, "not_found", f"unknown action {verb!r}")
        target_id = body.get("target_id")
        if not isinstance(target_id, str) or not target_id:
            raise ApiError(422, "invalid_payload", "body must carry a string 'target_id'")
        moderator = body.get("moderator", config.moderator)
        if not isinstance(moderator, str) or not moderator:
            raise ApiError(422, "invalid_payload", "'moderator' must be a non-empty string")
        payload: dict[str, Any] = {}
        if verb == "flair":
            payload["flair"] = body.get("flair")
        elif verb == "explain":
            ids = body.get("reasons", [])
            custom = body.get("custom", [])
            if not isinstance(ids, list) or not all(isinstance(r, str) for r in ids):
                raise ApiError(422, "invalid_payload", "'reasons' must be a list of ids")
            if not isinstance(custom, list) or not all(isinstance(c, str) for c in custom):
                raise ApiError(422, "invalid_payload", "'custom' must be a list of strings")
            snap = service.snap
            target = snap.corpus.by_id.get(target_id)
            if target is None:
                raise ApiError(404, "not_found", f"no contribution with id {target_id!r}")
            by_id = service.reasons.by_id()
            selected = []
            for rid in ids:
                if rid not in by_id:
                    raise ApiError(422, "invalid_payload", f"unknown reason id {rid!r}")
                selected.append(by_id[rid])
            payload["reasons"] = ids
            payload["custom"] = custom
            payload["text"] = build_explanation(target.kind, selected, custom)

        result = service.act(verb, target_id, moderator, payload)
        snap = service.snap
        out: dict[str, Any] = {"action": verb, "target_id": target_id}
        if verb in ("curate", "uncurate"):
            out["thread"] = service.thread_view(result["thread"])
            out["changed"] = result["changed"]
            if "warning" in result:
                out["warning"] = result["warning"]
            out["rendered_markdown"] = render_bestof(result["thread"])
        elif verb == "award":
            out["award_count"] = result["award_count"]
        elif verb == "flair":
            out["flair"] = result["flair"]
        elif verb in ("highlight", "unhighlight"):
            out["highlights"] = result["highlights"]
            if "warning" in result:
                out["warning"] = result["warning"]
        elif verb == "upvote":
            out["score"] = result["score"]
        elif verb == "explain":
            out["text"] = result["text"]
            out["reply"] = service.comment_view(snap, result["reply"])
        return out

    return app
