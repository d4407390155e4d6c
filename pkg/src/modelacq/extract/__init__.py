"""Action-model extractors and the registry used to match them to token types."""

from ..observation import ExtractorInfo, ExtractorRegistry, TokenType
from .arms import ArmsParams, Unsatisfiable, dump_wcnf, encode_arms, extract_arms, hard_clauses_hold
from .common import ExtractionError, IncompatibleTokens
from .observer import InconsistentTransitions, extract_observer
from .replay import ReplayReport, TraceReport, VocabularyMismatch, replay_consistency

DEFAULT_REGISTRY = ExtractorRegistry([
    ExtractorInfo("observer", frozenset({TokenType.IDENTITY}), extract_observer,
                  "set intersections over fully observed, noise-free traces"),
    ExtractorInfo("arms", frozenset({TokenType.IDENTITY, TokenType.PARTIAL_STATE}), extract_arms,
                  "weighted MaxSAT over partially observed traces"),
    ExtractorInfo("slaf", frozenset({TokenType.IDENTITY, TokenType.PARTIAL_STATE}), None,
                  "logical filtering; known, unimplemented"),
    ExtractorInfo("amdn", frozenset({TokenType.IDENTITY, TokenType.PARTIAL_STATE, TokenType.NOISY_STATE}),
                  None, "disordered, parallel and noisy traces; known, unimplemented"),
])

__all__ = [
    "ArmsParams", "Unsatisfiable", "dump_wcnf", "encode_arms", "extract_arms", "hard_clauses_hold", "ExtractionError",
    "IncompatibleTokens", "InconsistentTransitions", "extract_observer", "ReplayReport", "TraceReport",
    "VocabularyMismatch", "replay_consistency", "DEFAULT_REGISTRY",
]
