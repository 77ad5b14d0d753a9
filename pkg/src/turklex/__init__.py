"""turklex: cognate and etymology annotation for the eight-way Turkic dictionary.

Subpackages by concern: model (domain types, code grammar, validation),
codec (file formats), agreement (kappa and partition metrics), suggest
(similarity baseline), service (HTTP annotation service), cli, fixtures
(bundled reference data), reports (rendering).
"""

from .model import (
    AnnotationCode,
    BadLength,
    ClassOutOfRange,
    CodeError,
    CognatePartition,
    DanglingSlot,
    Diagnostic,
    DictionaryEntry,
    EntryAnnotation,
    EtymologyCode,
    Language,
    Lexeme,
    MAX_COGNATE_CLASS,
    MIN_COGNATE_CLASS,
    RESTRICTED_EXCLUDED_CODES,
    Script,
    UnknownEtymologyLetter,
    UnknownLanguage,
    canonicalize,
    parse_code,
    partition_of,
    validate_entry,
    validate_entry_annotation,
)
from .codec import (
    AnnotationRecord,
    parse_annotations,
    parse_dataset,
    serialize_annotations,
    serialize_dataset,
)
from .agreement import (
    ContingencyMatrix,
    EmptyIntersection,
    KappaResult,
    PartitionAgreement,
    SlotSetMismatch,
    build_contingency,
    cohen_kappa,
    partition_agreement,
    restricted_kappa,
)
from .suggest import (
    SimilarityConfig,
    evaluate_suggestions,
    normalize_form,
    propose_partition,
    similarity,
)

__version__ = "0.1.0"

__all__ = [
    "AnnotationCode",
    "AnnotationRecord",
    "BadLength",
    "ClassOutOfRange",
    "CodeError",
    "CognatePartition",
    "ContingencyMatrix",
    "DanglingSlot",
    "Diagnostic",
    "DictionaryEntry",
    "EmptyIntersection",
    "EntryAnnotation",
    "EtymologyCode",
    "KappaResult",
    "Language",
    "Lexeme",
    "MAX_COGNATE_CLASS",
    "MIN_COGNATE_CLASS",
    "PartitionAgreement",
    "RESTRICTED_EXCLUDED_CODES",
    "Script",
    "SimilarityConfig",
    "SlotSetMismatch",
    "UnknownEtymologyLetter",
    "UnknownLanguage",
    "build_contingency",
    "canonicalize",
    "cohen_kappa",
    "evaluate_suggestions",
    "normalize_form",
    "parse_annotations",
    "parse_code",
    "parse_dataset",
    "partition_agreement",
    "partition_of",
    "propose_partition",
    "restricted_kappa",
    "serialize_annotations",
    "serialize_dataset",
    "similarity",
    "validate_entry",
    "validate_entry_annotation",
]
