"""Boosted-tree baseline behind a pluggable trainer contract.

Any engine that can fit tabular features and emit a positive-class probability
satisfies the contract. Two engines ship:

* ``StumpBoostingTrainer`` - dependency-free gradient boosting with decision
  stumps on logistic loss. Deterministic, JSON-serializable, used in tests.
* ``SklearnGBDTTrainer`` - thin adapter over scikit-learn's
  GradientBoostingClassifier, available when scikit-learn is installed.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Protocol, Sequence

import numpy as np

from salience.baselines.features import FeatureVector
from salience.errors import ConfigError, EmptyTrainingSet


class DegenerateLabelsWarning(UserWarning):
    """Training labels contain a single class; the model is constant."""


class GBDTModel(Protocol):
    def predict_proba_one(self, fv: FeatureVector) -> float: ...
    def predict_proba(self, X: np.ndarray) -> np.ndarray: ...


class GBDTTrainer(Protocol):
    def fit(self, X: np.ndarray, y: np.ndarray) -> GBDTModel: ...


@dataclass(frozen=True)
class GBDTParams:
    n_rounds: int = 200
    learning_rate: float = 0.2
    seed: int = 13


def _sigmoid(z: np.ndarray | float) -> np.ndarray | float:
    return 1.0 / (1.0 + np.exp(-np.clip(z, -60.0, 60.0)))


def _to_matrix(features: Sequence[FeatureVector]) -> np.ndarray:
    return np.asarray([fv.as_tuple() for fv in features], dtype=float)


@dataclass(frozen=True)
class Stump:
    feature: int
    threshold: float
    left_value: float   # x[feature] < threshold
    right_value: float

    def apply(self, X: np.ndarray) -> np.ndarray:
        return np.where(X[:, self.feature] < self.threshold, self.left_value, self.right_value)


@dataclass
class StumpBoostingModel:
    base_score: float
    learning_rate: float
    stumps: list[Stump] = field(default_factory=list)

    def decision_function(self, X: np.ndarray) -> np.ndarray:
        f = np.full(X.shape[0], self.base_score)
        for stump in self.stumps:
            f += self.learning_rate * stump.apply(X)
        return f

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        return _sigmoid(self.decision_function(X))

    def predict_proba_one(self, fv: FeatureVector) -> float:
        return float(self.predict_proba(_to_matrix([fv]))[0])

    def to_dict(self) -> dict:
        return {
            "kind": "stump_boosting",
            "base_score": self.base_score,
            "learning_rate": self.learning_rate,
            "stumps": [
                {
                    "feature": s.feature,
                    "threshold": s.threshold,
                    "left_value": s.left_value,
                    "right_value": s.right_value,
                }
                for s in self.stumps
            ],
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "StumpBoostingModel":
        return cls(
            base_score=obj["base_score"],
            learning_rate=obj["learning_rate"],
            stumps=[
                Stump(s["feature"], s["threshold"], s["left_value"], s["right_value"])
                for s in obj["stumps"]
            ],
        )


@dataclass
class ConstantModel:
    probability: float

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        return np.full(X.shape[0], self.probability)

    def predict_proba_one(self, fv: FeatureVector) -> float:
        return self.probability

    def to_dict(self) -> dict:
        return {"kind": "constant", "probability": self.probability}

    @classmethod
    def from_dict(cls, obj: dict) -> "ConstantModel":
        return cls(probability=obj["probability"])


def _best_stump(X: np.ndarray, residuals: np.ndarray, hessian: np.ndarray) -> Stump | None:
    """Exhaustive stump search minimizing squared error of the residuals.

    Leaf values are Newton steps for logistic loss: sum(residual) / sum(hessian).
    Returns None when no split separates the data.
    """
    n, d = X.shape
    best: tuple[float, int, float] | None = None  # (sse, feature, threshold)
    total_sum = residuals.sum()
    total_sq = float(residuals @ residuals)
    for j in range(d):
        order = np.argsort(X[:, j], kind="stable")
        xs = X[order, j]
        rs = residuals[order]
        csum = np.cumsum(rs)
        # Split after position i (0-based) is valid when xs[i] < xs[i+1].
        for i in range(n - 1):
            if xs[i] == xs[i + 1]:
                continue
            n_left = i + 1
            left_sum = csum[i]
            right_sum = total_sum - left_sum
            sse = total_sq - left_sum**2 / n_left - right_sum**2 / (n - n_left)
            if best is None or sse < best[0] - 1e-12:
                best = (sse, j, (xs[i] + xs[i + 1]) / 2.0)
    if best is None:
        return None
    _, j, threshold = best
    left = X[:, j] < threshold
    right = ~left

    def newton(mask: np.ndarray) -> float:
        h = hessian[mask].sum()
        return float(residuals[mask].sum() / h) if h > 0 else 0.0

    return Stump(feature=j, threshold=float(threshold), left_value=newton(left), right_value=newton(right))


class StumpBoostingTrainer:
    """Gradient boosting of depth-1 trees on logistic loss."""

    def __init__(self, params: GBDTParams = GBDTParams()):
        self.params = params

    def fit(self, X: np.ndarray, y: np.ndarray) -> StumpBoostingModel:
        pos_rate = float(np.clip(y.mean(), 1e-6, 1.0 - 1e-6))
        model = StumpBoostingModel(
            base_score=math.log(pos_rate / (1.0 - pos_rate)),
            learning_rate=self.params.learning_rate,
        )
        f = np.full(X.shape[0], model.base_score)
        for _ in range(self.params.n_rounds):
            p = _sigmoid(f)
            residuals = y - p
            hessian = p * (1.0 - p)
            stump = _best_stump(X, residuals, hessian)
            if stump is None:
                break
            model.stumps.append(stump)
            f += model.learning_rate * stump.apply(X)
        return model


class SklearnGBDTTrainer:
    """Adapter over sklearn's GradientBoostingClassifier (optional extra)."""

    def __init__(self, params: GBDTParams = GBDTParams()):
        self.params = params

    def fit(self, X: np.ndarray, y: np.ndarray):
        from sklearn.ensemble import GradientBoostingClassifier

        clf = GradientBoostingClassifier(
            n_estimators=self.params.n_rounds,
            learning_rate=self.params.learning_rate,
            random_state=self.params.seed,
        )
        clf.fit(X, y)

        class _Wrapped:
            def __init__(self, inner):
                self._inner = inner

            def predict_proba(self, X: np.ndarray) -> np.ndarray:
                return self._inner.predict_proba(X)[:, 1]

            def predict_proba_one(self, fv: FeatureVector) -> float:
                return float(self.predict_proba(_to_matrix([fv]))[0])

        return _Wrapped(clf)


def get_gbdt_trainer(name: str, params: GBDTParams = GBDTParams()) -> GBDTTrainer:
    if name == "stump":
        return StumpBoostingTrainer(params)
    if name == "sklearn":
        return SklearnGBDTTrainer(params)
    raise ConfigError(f"unknown GBDT engine {name!r}; expected 'stump' or 'sklearn'")


def train_gbdt(
    examples: Sequence[tuple[FeatureVector, int]],
    params: GBDTParams = GBDTParams(),
    trainer: GBDTTrainer | None = None,
) -> GBDTModel:
    """Fit a boosted model on (features, label) pairs.

    Raises EmptyTrainingSet on zero examples. A single-class training set
    produces a constant predictor and emits DegenerateLabelsWarning.
    """
    if not examples:
        raise EmptyTrainingSet("no examples to train on")
    X = _to_matrix([fv for fv, _ in examples])
    y = np.asarray([label for _, label in examples], dtype=float)
    classes = set(y.tolist())
    if len(classes) == 1:
        warnings.warn(
            "training labels contain a single class; returning a constant model",
            DegenerateLabelsWarning,
        )
        return ConstantModel(probability=float(np.clip(y[0], 1e-6, 1.0 - 1e-6)))
    engine = trainer if trainer is not None else StumpBoostingTrainer(params)
    return engine.fit(X, y)


def predict_gbdt(model: GBDTModel, fv: FeatureVector) -> float:
    """Positive-class probability in [0, 1] for one feature vector."""
    return float(np.clip(model.predict_proba_one(fv), 0.0, 1.0))


def save_gbdt(model: GBDTModel, path: str | Path) -> None:
    if not hasattr(model, "to_dict"):
        raise ConfigError("only the built-in engines support JSON serialization")
    Path(path).write_text(json.dumps(model.to_dict(), sort_keys=True), encoding="utf-8")


def load_gbdt(path: str | Path):
    obj = json.loads(Path(path).read_text(encoding="utf-8"))
    if obj.get("kind") == "stump_boosting":
        return StumpBoostingModel.from_dict(obj)
    if obj.get("kind") == "constant":
        return ConstantModel.from_dict(obj)
    raise ConfigError(f"unknown model kind {obj.get('kind')!r} in {path}")
