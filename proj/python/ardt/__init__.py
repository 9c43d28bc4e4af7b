"""Autoregressive decision trees: compiled constructions, a tree language model and tools."""

from ._core import (
    ArdtError,
    Ensemble,
    LanguageModel,
    Projection,
    TaskClassifier,
    __version__,
    aggregate,
    detokenize,
    direct_parity_leaves,
    export_dot,
    feature_importance,
    fit_ensemble,
    generate_examples,
    kmeans,
    label_of,
    make_split,
    orthogonalize,
    parity_ardt_leaves,
    read_corpus,
    simulate_automaton,
    simulate_circuit,
    simulate_turing,
    tokenize,
    train_lm,
    train_task_classifier,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
