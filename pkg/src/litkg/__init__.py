"""Joint embeddings for knowledge graph terms and abstract words.

The pipeline parses an N-Triples graph, builds a personalized-walk
co-occurrence matrix over the graph and a window co-occurrence matrix
over entity-linked abstracts, rescales and sums the two, and trains
weighted least-squares embeddings on the result.
"""

from .errors import (
    ConfigError,
    DimensionMismatch,
    DivergenceDetected,
    EmptyMatrix,
    LitkgError,
    MalformedLine,
    NonPositiveCount,
    SeedNotFound,
    StageError,
    TermKindError,
    UnknownTerm,
)
from .glove import (
    Combine,
    EmbeddingModel,
    GloveParams,
    cell_gradients,
    cell_loss,
    emit_embeddings,
    glove_weight,
    init_model,
    read_embeddings,
    total_loss,
    train,
)
from .graph import AdjacencyView, Direction, build_adjacency
from .matrix import (
    SparseMatrix,
    fmt_float,
    merge_sum,
    normalize_columns,
    scale_by_kth_largest,
)
from .pipeline import (
    PipelineConfig,
    STAGES,
    build_config,
    parse_config_file,
    run_pipeline,
    validate_config,
)
from .ppr import PprParams, ScoreVector, bca_ppr, graph_cooccurrence
from .rdf import (
    KnowledgeGraph,
    ParseResult,
    ParseStats,
    parse_ntriples,
    read_vocab_tsv,
    write_ntriples,
    write_vocab_tsv,
)
from .text import (
    EntityMatcher,
    TextCoocParams,
    Weighting,
    build_matcher,
    link_text,
    text_cooccurrence,
    tokenize,
    write_linked_corpus,
)
from .vocab import TermId, TermKind, Vocabulary, entity_label, local_name

__version__ = "0.1.0"

__all__ = [
    "AdjacencyView",
    "Combine",
    "ConfigError",
    "DimensionMismatch",
    "Direction",
    "DivergenceDetected",
    "EmbeddingModel",
    "EmptyMatrix",
    "EntityMatcher",
    "GloveParams",
    "KnowledgeGraph",
    "LitkgError",
    "MalformedLine",
    "NonPositiveCount",
    "ParseResult",
    "ParseStats",
    "PipelineConfig",
    "PprParams",
    "STAGES",
    "ScoreVector",
    "SeedNotFound",
    "SparseMatrix",
    "StageError",
    "TermId",
    "TermKind",
    "TermKindError",
    "TextCoocParams",
    "UnknownTerm",
    "Vocabulary",
    "Weighting",
    "bca_ppr",
    "build_adjacency",
    "build_config",
    "build_matcher",
    "cell_gradients",
    "cell_loss",
    "emit_embeddings",
    "entity_label",
    "fmt_float",
    "glove_weight",
    "graph_cooccurrence",
    "init_model",
    "link_text",
    "local_name",
    "merge_sum",
    "normalize_columns",
    "parse_config_file",
    "parse_ntriples",
    "read_embeddings",
    "read_vocab_tsv",
    "run_pipeline",
    "scale_by_kth_largest",
    "text_cooccurrence",
    "tokenize",
    "total_loss",
    "train",
    "validate_config",
    "write_linked_corpus",
    "write_ntriples",
    "write_vocab_tsv",
]
