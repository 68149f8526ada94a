"""alignkit: a word-alignment toolkit for low-resource language pairs.

Statistical aligners (EM-trained, with a diagonal-prior reparameterization),
alignment extraction from exported contextual embeddings, symmetrization
heuristics, AER/precision/recall/F scoring, POS/NER annotation projection,
and subset/length/bootstrap analysis harnesses.  The ``alignkit`` CLI wires
the same operations over plain text files.
"""

__version__ = "0.1.0"

from .analysis import (
    AnalysisReport,
    SplitMix64,
    bootstrap_aer,
    ibm_alignment_method,
    length_analysis,
    subset_analysis,
)
from .corpus import (
    AlignmentSet,
    EmbeddedSentencePair,
    ParallelCorpus,
    ParseError,
    SentenceAlignment,
    SentencePair,
    Subword,
    TaggedCorpus,
    TaggedSentence,
    parse_bitext,
    parse_conll,
    parse_embeddings,
    parse_pharaoh,
    serialize_bitext,
    serialize_conll,
    serialize_embeddings,
    serialize_pharaoh,
)
from .embed import (
    EmbeddingAligner,
    ExtractorConfig,
    aggregate_to_words,
    extract_alignment,
    extract_subword_links,
    similarity_matrix,
)
from .ibm import (
    NULL_TOKEN,
    DiagonalParams,
    Direction,
    IbmAligner,
    ModelKind,
    TrainConfig,
    TranslationTable,
    decode,
    diag_weight,
    load_model,
    parse_model,
    save_model,
    serialize_model,
    train,
)
from .metrics import EvalCounts, EvalReport, evaluate, report_table
from .projection import (
    ProjectionConfig,
    ProjectionStats,
    TagProjector,
    TypeDictionary,
    build_type_dictionary,
    project,
    token_project,
)
from .symmetrize import Heuristic, symmetrize, symmetrize_corpus

__all__ = [
    "__version__",
    "AlignmentSet",
    "AnalysisReport",
    "DiagonalParams",
    "Direction",
    "EmbeddedSentencePair",
    "EmbeddingAligner",
    "EvalCounts",
    "EvalReport",
    "ExtractorConfig",
    "Heuristic",
    "IbmAligner",
    "ModelKind",
    "NULL_TOKEN",
    "ParallelCorpus",
    "ParseError",
    "ProjectionConfig",
    "ProjectionStats",
    "SentenceAlignment",
    "SentencePair",
    "SplitMix64",
    "Subword",
    "TagProjector",
    "TaggedCorpus",
    "TaggedSentence",
    "TrainConfig",
    "TranslationTable",
    "TypeDictionary",
    "aggregate_to_words",
    "bootstrap_aer",
    "build_type_dictionary",
    "decode",
    "diag_weight",
    "evaluate",
    "extract_alignment",
    "extract_subword_links",
    "ibm_alignment_method",
    "length_analysis",
    "load_model",
    "parse_bitext",
    "parse_conll",
    "parse_embeddings",
    "parse_model",
    "parse_pharaoh",
    "project",
    "report_table",
    "save_model",
    "serialize_bitext",
    "serialize_conll",
    "serialize_embeddings",
    "serialize_model",
    "serialize_pharaoh",
    "similarity_matrix",
    "subset_analysis",
    "symmetrize",
    "symmetrize_corpus",
    "token_project",
    "train",
]
