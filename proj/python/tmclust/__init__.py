"""Topic-map document clustering toolkit."""

from ._core import (
    DOC_ROOT_LABEL,
    ROOT,
    Error,
    IoError,
    ParseError,
    TopicForest,
    UsageError,
    ValidationError,
    cluster,
    entropy,
    experiment,
    fallback_forest,
    forest_matrix,
    hac,
    max_common_subtree,
    parse_xtm_forest,
    purity,
    similarity,
    tm_similarity,
    tokenize,
    vector_matrix,
)

__version__ = "0.1.0"
