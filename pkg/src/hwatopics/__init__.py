"""hwatopics: windowed topic detection for short posts by human word association."""

__version__ = "0.1.0"

from hwatopics.association import (  # noqa: E402
    AssociationTable,
    MaxAssociation,
    agf,
    build_association_table,
    cimawa,
    cooccurrence,
    max_association,
    max_associations,
)
from hwatopics.clustering import (  # noqa: E402
    NOISE,
    Clustering,
    Dendrogram,
    HdbscanParams,
    build_hierarchy,
    core_distances,
    extract_clusters,
    hdbscan,
    mutual_reachability,
)
from hwatopics.config import Config, resolve_config  # noqa: E402
from hwatopics.corpus import (  # noqa: E402
    Post,
    RawPost,
    Token,
    TokenKind,
    Window,
    preprocess,
    tokenize,
    window,
)
from hwatopics.embedding import (  # noqa: E402
    DistanceMatrix,
    PatternEmbedding,
    VectorStore,
    distance_matrix,
    embed_pattern,
    load_vectors,
)
from hwatopics.errors import (  # noqa: E402
    ConfigError,
    GroundTruthError,
    HwaError,
    InputError,
    InvariantViolation,
)
from hwatopics.evaluation import (  # noqa: E402
    EvalReport,
    GroundTruthTopic,
    keyword_metrics,
    match,
    topic_metrics,
    topk_recall_curve,
)
from hwatopics.patterns import (  # noqa: E402
    Pattern,
    PatternSet,
    extract_all,
    extract_pattern,
    merge_subsets,
)
from hwatopics.pipeline import DetectionResults, WindowResult, run_detection  # noqa: E402
from hwatopics.ranking import (  # noqa: E402
    KeywordSet,
    WordStats,
    keyword_rating,
    score,
    select_keywords,
    term_frequencies,
    utility,
)
from hwatopics.topics import Topic, TopicSource, extract_topics, rank_clusters  # noqa: E402

__all__ = [
    # Corpus
    "RawPost",
    "Token",
    "TokenKind",
    "Post",
    "Window",
    "tokenize",
    "preprocess",
    "window",
    # Ranking
    "WordStats",
    "KeywordSet",
    "term_frequencies",
    "score",
    "utility",
    "keyword_rating",
    "select_keywords",
    # Association
    "AssociationTable",
    "MaxAssociation",
    "cooccurrence",
    "cimawa",
    "agf",
    "max_association",
    "max_associations",
    "build_association_table",
    # Patterns
    "Pattern",
    "PatternSet",
    "extract_pattern",
    "extract_all",
    "merge_subsets",
    # Embedding
    "VectorStore",
    "PatternEmbedding",
    "DistanceMatrix",
    "load_vectors",
    "embed_pattern",
    "distance_matrix",
    # Clustering
    "NOISE",
    "HdbscanParams",
    "Dendrogram",
    "Clustering",
    "core_distances",
    "mutual_reachability",
    "build_hierarchy",
    "extract_clusters",
    "hdbscan",
    # Topics
    "Topic",
    "TopicSource",
    "rank_clusters",
    "extract_topics",
    # Evaluation
    "GroundTruthTopic",
    "EvalReport",
    "match",
    "topic_metrics",
    "topk_recall_curve",
    "keyword_metrics",
    # Pipeline and configuration
    "Config",
    "resolve_config",
    "DetectionResults",
    "WindowResult",
    "run_detection",
    # Errors
    "HwaError",
    "ConfigError",
    "InputError",
    "GroundTruthError",
    "InvariantViolation",
]
