"""posiqueue: a positive-moderation queue engine.

Ingests a small community corpus, trains a desirability model over
interpretable text features, and serves a filterable, sortable queue with
visual desirability cues plus reward actions (curation, explanations,
awards, flair, highlights, moderator upvotes) over an append-only log.
"""

from .corpus import (
    Author,
    Contribution,
    Corpus,
    comment_section,
    ingest_corpus,
    write_corpus,
)
from .errors import (
    AlreadyVotedError,
    CapacityError,
    DegenerateTrainingError,
    DuplicateError,
    EmptyReasonError,
    EngineError,
    IngestError,
    InsufficientDataError,
    InvalidFlairError,
    NotFoundError,
    ReferentialIntegrityError,
    ReplayError,
    ShapeError,
    StratificationError,
    UndefinedAUCError,
    WrongKindError,
)
from .model import (
    EvalReport,
    GBDTModel,
    LabeledExample,
    TrainConfig,
    auc,
    build_labels,
    desirability_score,
    evaluate,
    load_model,
    predict_probabilities,
    predict_probability,
    save_model,
    score_from_probability,
    split_train_test,
    train_gbdt,
)
from .queue import (
    CUE_CATEGORIES,
    FilterSpec,
    SORT_KEYS,
    cue_category,
    filter_queue,
    hover_histograms,
    percentile_rank,
    slider_maxima,
    sort_queue,
)
from .synth import SyntheticConfig, generate_synthetic_corpus
from .textfeat import (
    FeatureConfig,
    FeatureVector,
    LexiconSet,
    default_lexicons,
    extract_all,
    extract_features,
    feature_names,
    flatten,
    load_lexicons,
)
from .actions import (
    ACTIONS,
    ActionEngine,
    BestOfThread,
    DEFAULT_FLAIRS,
    DEFAULT_REASONS,
    ExplainReason,
    HIGHLIGHT_CAPACITY,
    ModerationState,
    ReasonStore,
    build_explanation,
    parse_period,
    period_bounds,
    read_action_log,
    render_bestof,
    replay_log,
)

__version__ = "0.1.0"

__all__ = [
    "ACTIONS",
    "ActionEngine",
    "AlreadyVotedError",
    "Author",
    "BestOfThread",
    "CUE_CATEGORIES",
    "CapacityError",
    "Contribution",
    "Corpus",
    "DEFAULT_FLAIRS",
    "DEFAULT_REASONS",
    "DegenerateTrainingError",
    "DuplicateError",
    "EmptyReasonError",
    "EngineError",
    "EvalReport",
    "ExplainReason",
    "FeatureConfig",
    "FeatureVector",
    "FilterSpec",
    "GBDTModel",
    "HIGHLIGHT_CAPACITY",
    "IngestError",
    "InsufficientDataError",
    "InvalidFlairError",
    "LabeledExample",
    "LexiconSet",
    "ModerationState",
    "NotFoundError",
    "ReasonStore",
    "ReferentialIntegrityError",
    "ReplayError",
    "SORT_KEYS",
    "ShapeError",
    "StratificationError",
    "SyntheticConfig",
    "TrainConfig",
    "UndefinedAUCError",
    "WrongKindError",
    "auc",
    "build_explanation",
    "build_labels",
    "comment_section",
    "cue_category",
    "default_lexicons",
    "desirability_score",
    "evaluate",
    "extract_all",
    "extract_features",
    "feature_names",
    "filter_queue",
    "flatten",
    "generate_synthetic_corpus",
    "hover_histograms",
    "ingest_corpus",
    "load_lexicons",
    "load_model",
    "parse_period",
    "percentile_rank",
    "period_bounds",
    "predict_probabilities",
    "predict_probability",
    "read_action_log",
    "render_bestof",
    "replay_log",
    "save_model",
    "score_from_probability",
    "slider_maxima",
    "sort_queue",
    "split_train_test",
    "train_gbdt",
    "write_corpus",
]
