"""Full-scale reference points, kept as documentation rather than CI gates.

These numbers describe behavior on the original benchmark corpora with
full-size pretrained backbones. The raw corpora are licensed and not bundled,
and the bundled encoder/LLM test doubles are deliberately tiny, so none of
this is reproducible inside this repository. The values are recorded here so
a full-scale run (loaders pointed at the real exports, pretrained adapters
plugged in) has concrete targets to compare against.
"""

from __future__ import annotations

import pytest

# dataset -> summary statistics of the full corpus
CORPUS_REFERENCE = {
    "WN": {"docs": 6956, "mentions": 145081, "salient_fraction": 0.27},
    "NYT": {"docs": 110463, "mentions": 4405066, "salient_fraction": 0.14},
    "SEL": {"docs": 365, "mentions": 19729, "salient_fraction": 0.10},
    "ENTSUM": {"docs": 693, "mentions": 20784, "salient_fraction": 0.39},
}

# dataset -> (train, val, test) doc-entity pair counts after the temporal split
SPLIT_REFERENCE = {
    "NYT": (1342092, 405335, 162787),
    "WN": (41625, 11902, 9009),
    "SEL": (6106, 2400, 3751),
    "ENTSUM": (5206, 1861, 2867),
}

# (model, dataset) -> (precision, recall, f1) on the positive class, percent
MODEL_REFERENCE = {
    ("features_gbdt", "ENTSUM"): (60.7, 52.0, 56.0),
    ("target_masking_roberta", "WN"): (57.0, 65.4, 60.9),
    ("cross_encoder_deberta", "NYT"): (77.5, 87.4, 82.1),
    ("cross_encoder_deberta", "WN"): (71.5, 78.3, 74.8),
    ("flan_ul2_zeroshot", "NYT"): (31.1, 72.4, 43.5),
    ("llama2_chat_zeroshot", "SEL"): (9.49, 100.0, 17.3),
}


def test_reference_tables_are_well_formed():
    for stats in CORPUS_REFERENCE.values():
        assert stats["docs"] > 0 and stats["mentions"] > 0
        assert 0.0 < stats["salient_fraction"] < 1.0
    for counts in SPLIT_REFERENCE.values():
        assert len(counts) == 3 and all(c > 0 for c in counts)
    for p, r, f1 in MODEL_REFERENCE.values():
        assert 0 <= p <= 100 and 0 <= r <= 100 and 0 <= f1 <= 100


@pytest.mark.skip(
    reason="requires the licensed source corpora and full-size pretrained "
    "backbone/LLM adapters; reference points only"
)
def test_full_scale_runs_match_reference_points():
    raise NotImplementedError(
        "point the loaders at the real dataset exports, plug in pretrained "
        "adapters, and compare pipeline reports against the tables above"
    )
