"""Probability logic over finite vocabularies."""

from pathlib import Path

from ._core import (
    Belief,
    Error,
    InfeasibleError,
    InputError,
    KnowledgeBase,
    ParseError,
    Projection,
    ResourceError,
    UndefinedConditional,
    VocabularyMismatch,
    confirmation_check,
    posterior_universal,
    predictive,
    prefix_prob,
    run_cli,
    universal_prob,
)

__all__ = [
    "Belief",
    "Error",
    "InfeasibleError",
    "InputError",
    "KnowledgeBase",
    "ParseError",
    "Projection",
    "ResourceError",
    "UndefinedConditional",
    "VocabularyMismatch",
    "confirmation_check",
    "load",
    "posterior_universal",
    "predictive",
    "prefix_prob",
    "run_cli",
    "universal_prob",
]


def load(path, world_cap=20):
    """Parse a .plog file into a KnowledgeBase."""
    return KnowledgeBase(Path(path).read_text(), world_cap)
