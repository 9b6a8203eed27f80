"""Heuristic classifiers and the tabular boosted-tree baseline."""

from salience.baselines.features import FeatureVector, extract_features
from salience.baselines.gbdt import (
    DegenerateLabelsWarning,
    GBDTParams,
    StumpBoostingTrainer,
    get_gbdt_trainer,
    load_gbdt,
    predict_gbdt,
    save_gbdt,
    train_gbdt,
)
from salience.baselines.heuristics import (
    SweepRow,
    first_sentence_heuristic,
    frequency_heuristic,
    positional_headline,
    positional_headline_lead,
    sweep_frequency_threshold,
    write_sweep_csv,
)
from salience.baselines.sentences import (
    first_sentence_boundary,
    lead_sentence_index,
    sentence_index_of,
    sentence_spans,
)

__all__ = [
    "DegenerateLabelsWarning",
    "FeatureVector",
    "GBDTParams",
    "StumpBoostingTrainer",
    "SweepRow",
    "extract_features",
    "first_sentence_boundary",
    "first_sentence_heuristic",
    "frequency_heuristic",
    "get_gbdt_trainer",
    "lead_sentence_index",
    "load_gbdt",
    "positional_headline",
    "positional_headline_lead",
    "predict_gbdt",
    "save_gbdt",
    "sentence_index_of",
    "sentence_spans",
    "sweep_frequency_threshold",
    "train_gbdt",
    "write_sweep_csv",
]
