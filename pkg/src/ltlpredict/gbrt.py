"""Gradient boosted regression trees for binary classification.

Binomial deviance with labels in {-1, +1}: the score F is half the log-odds,
so P(y = 1 | x) = logistic(2 F). Each stage fits a least-squares regression
tree to the pseudo-residuals 2y / (1 + exp(2yF)) and sets leaf values with a
single Newton step.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import jsonschema
import numpy as np

FORMAT_NAME = "ltlpredict.gbrt"
FORMAT_VERSION = 1
INTERCEPT_CLAMP = 10.0


@dataclass(frozen=True)
class GbrtParams:
    n_trees: int = 100
    max_depth: int = 4
    learning_rate: float = 0.1
    min_leaf: int = 1
    threshold: float = 0.5
    seed: int = 0  # no subsampling yet, so training is deterministic without it

    def __post_init__(self):
        if self.n_trees < 1:
            raise ValueError("n_trees must be >= 1")
        if self.max_depth < 1:
            raise ValueError("max_depth must be >= 1")
        if not 0 < self.learning_rate <= 1:
            raise ValueError("learning_rate must be in (0, 1]")
        if self.min_leaf < 1:
            raise ValueError("min_leaf must be >= 1")
        if not 0 < self.threshold < 1:
            raise ValueError("threshold must be in (0, 1)")


@dataclass
class RegressionTree:
    """Flat binary tree; node 0 is the root, ``feature[i] == -1`` marks a leaf.

    A sample goes left at node ``i`` when ``x[feature[i]] <= threshold[i]``.
    """

    feature: list[int] = field(default_factory=list)
    threshold: list[float] = field(default_factory=list)
    left: list[int] = field(default_factory=list)
    right: list[int] = field(default_factory=list)
    value: list[float] = field(default_factory=list)

    def add_node(self) -> int:
        for column, blank in ((self.feature, -1), (self.threshold, 0.0), (self.left, -1),
                              (self.right, -1), (self.value, 0.0)):
            column.append(blank)
        return len(self.feature) - 1

    def predict_one(self, x) -> float:
        i = 0
        feature, threshold = self.feature, self.threshold
        while feature[i] >= 0:
            i = self.left[i] if x[feature[i]] <= threshold[i] else self.right[i]
        return self.value[i]

    def predict(self, X: np.ndarray) -> np.ndarray:
        feature = np.asarray(self.feature)
        threshold = np.asarray(self.threshold)
        left, right = np.asarray(self.left), np.asarray(self.right)
        node = np.zeros(len(X), dtype=np.int64)
        rows = np.arange(len(X))
        while True:
            inner = feature[node] >= 0
            if not inner.any():
                break
            f = np.where(inner, feature[node], 0)
            go_left = X[rows, f] <= threshold[node]
            node = np.where(inner, np.where(go_left, left[node], right[node]), node)
        return np.asarray(self.value)[node]

    def depth(self) -> int:
        def walk(i: int) -> int:
            if self.feature[i] < 0:
                return 0
            return 1 + max(walk(self.left[i]), walk(self.right[i]))

        return walk(0)


@dataclass
class GbrtModel:
    intercept: float
    trees: list[RegressionTree]
    learning_rate: float
    threshold: float
    n_features: int
    layout: str = ""
    train_deviance: list[float] = field(default_factory=list)

    def _check(self, x) -> None:
        if len(x) != self.n_features:
            raise ValueError(f"feature vector has {len(x)} entries, model expects {self.n_features}")

    def predict_score(self, x) -> float:
        self._check(x)
        total = 0.0
        for tree in self.trees:
            total += tree.predict_one(x)
        return self.intercept + self.learning_rate * total

    def classify(self, x) -> int:
        return int(logistic(2.0 * self.predict_score(x)) > self.threshold)

    def predict_scores(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X)
        if X.ndim != 2 or X.shape[1] != self.n_features:
            raise ValueError(f"expected an (n, {self.n_features}) feature matrix, got {X.shape}")
        total = np.zeros(len(X))
        for tree in self.trees:
            total += tree.predict(X)
        return self.intercept + self.learning_rate * total

    def classify_many(self, X: np.ndarray) -> np.ndarray:
        probs = 1.0 / (1.0 + np.exp(-2.0 * self.predict_scores(X)))
        return (probs > self.threshold).astype(np.int64)


def logistic(z: float) -> float:
    if z >= 0:
        return 1.0 / (1.0 + math.exp(-z))
    e = math.exp(z)
    return e / (1.0 + e)


def deviance(y_pm: np.ndarray, F: np.ndarray) -> float:
    return float(np.logaddexp(0.0, -2.0 * y_pm * F).sum())


def _best_split(Xn: np.ndarray, r: np.ndarray, min_leaf: int):
    """Best (feature, threshold) by squared-error reduction, or None.

    Ties go to the lowest feature index, then the smallest threshold.
    """
    n = len(r)
    order = np.argsort(Xn, axis=0, kind="stable")
    xs = np.take_along_axis(Xn, order, axis=0).astype(np.float64)
    cs = np.cumsum(r[order], axis=0)
    total = cs[-1]
    n_left = np.arange(1, n, dtype=np.float64)[:, None]
    left = cs[:-1]
    gain = left**2 / n_left + (total - left) ** 2 / (n - n_left) - total**2 / n
    valid = (xs[:-1] != xs[1:]) & (n_left >= min_leaf) & (n - n_left >= min_leaf)
    if not valid.any():
        return None
    gain = np.where(valid, gain, -np.inf)
    best = gain.max()
    rows, cols = np.nonzero(gain >= best - 1e-10 * max(1.0, abs(best)))
    thresholds = (xs[rows, cols] + xs[rows + 1, cols]) / 2.0
    pick = np.lexsort((thresholds, cols))[0]
    return int(cols[pick]), float(thresholds[pick])


def _newton_value(r: np.ndarray) -> float:
    den = float(np.sum(np.abs(r) * (2.0 - np.abs(r))))
    if den <= 0.0:
        return 0.0
    return float(np.sum(r)) / den


def _grow_tree(X: np.ndarray, r: np.ndarray, params: GbrtParams) -> RegressionTree:
    tree = RegressionTree()
    stack = [(tree.add_node(), np.arange(len(r)), 0)]
    while stack:
        node, idx, depth = stack.pop()
        rn = r[idx]
        split = None
        if depth < params.max_depth and len(idx) >= 2 * params.min_leaf and np.ptp(rn) > 1e-12:
            split = _best_split(X[idx], rn, params.min_leaf)
        if split is None:
            tree.value[node] = _newton_value(rn)
            continue
        feat, thr = split
        go_left = X[idx, feat] <= thr
        tree.feature[node] = feat
        tree.threshold[node] = thr
        tree.left[node] = tree.add_node()
        tree.right[node] = tree.add_node()
        # left subtree is grown first
        stack.append((tree.right[node], idx[~go_left], depth + 1))
        stack.append((tree.left[node], idx[go_left], depth + 1))
    return tree


def fit(X, y, params: GbrtParams = GbrtParams(), layout: str = "") -> GbrtModel:
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y)
    if X.ndim != 2 or len(X) == 0:
        raise ValueError("fit needs a nonempty 2-D feature matrix")
    if len(y) != len(X):
        raise ValueError(f"{len(X)} feature rows but {len(y)} labels")
    if not np.isin(y, (0, 1)).all():
        raise ValueError("labels must be 0 or 1")
    y_pm = 2.0 * y.astype(np.float64) - 1.0
    mean = y_pm.mean()
    if mean >= 1.0:
        intercept = INTERCEPT_CLAMP
    elif mean <= -1.0:
        intercept = -INTERCEPT_CLAMP
    else:
        intercept = float(np.clip(0.5 * math.log((1 + mean) / (1 - mean)),
                                  -INTERCEPT_CLAMP, INTERCEPT_CLAMP))
    model = GbrtModel(intercept, [], params.learning_rate, params.threshold, X.shape[1], layout)
    F = np.full(len(y), intercept)
    model.train_deviance.append(deviance(y_pm, F))
    if abs(mean) >= 1.0:
        return model  # single class: the clamped intercept decides everything
    for _ in range(params.n_trees):
        residual = 2.0 * y_pm / (1.0 + np.exp(2.0 * y_pm * F))
        tree = _grow_tree(X, residual, params)
        model.trees.append(tree)
        F = F + params.learning_rate * tree.predict(X)
        model.train_deviance.append(deviance(y_pm, F))
    return model


# ---------------------------------------------------------------------------
# serialization

_NUMBER_LIST = {"type": "array", "items": {"type": "number"}}
_INT_LIST = {"type": "array", "items": {"type": "integer"}}

MODEL_SCHEMA = {
    "type": "object",
    "required": ["format", "version", "intercept", "learning_rate", "threshold",
                 "n_features", "layout", "trees"],
    "properties": {
        "format": {"const": FORMAT_NAME},
        "version": {"type": "integer"},
        "intercept": {"type": "number"},
        "learning_rate": {"type": "number", "exclusiveMinimum": 0, "maximum": 1},
        "threshold": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
        "n_features": {"type": "integer", "minimum": 1},
        "layout": {"type": "string"},
        "train_deviance": _NUMBER_LIST,
        "trees": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["feature", "threshold", "left", "right", "value"],
                "additionalProperties": False,
                "properties": {
                    "feature": _INT_LIST,
                    "threshold": _NUMBER_LIST,
                    "left": _INT_LIST,
                    "right": _INT_LIST,
                    "value": _NUMBER_LIST,
                },
            },
        },
    },
}


class ModelFormatError(ValueError):
    pass


def serialize_model(m: GbrtModel) -> str:
    doc = {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "intercept": m.intercept,
        "learning_rate": m.learning_rate,
        "threshold": m.threshold,
        "n_features": m.n_features,
        "layout": m.layout,
        "train_deviance": m.train_deviance,
        "trees": [
            {
                "feature": t.feature,
                "threshold": t.threshold,
                "left": t.left,
                "right": t.right,
                "value": t.value,
            }
            for t in m.trees
        ],
    }
    return json.dumps(doc, indent=1) + "\n"


def _check_tree(t: RegressionTree, n_features: int) -> None:
    size = len(t.feature)
    if size == 0 or any(len(col) != size for col in (t.threshold, t.left, t.right, t.value)):
        raise ModelFormatError("tree columns must be nonempty and of equal length")
    reached = {0}
    for i in range(size):
        if t.feature[i] < 0:
            continue
        if t.feature[i] >= n_features:
            raise ModelFormatError(f"split on feature {t.feature[i]} >= n_features")
        for child in (t.left[i], t.right[i]):
            if not i < child < size or child in reached:
                raise ModelFormatError(f"bad child index {child} at node {i}")
            reached.add(child)
    if len(reached) != size:
        raise ModelFormatError("tree has unreachable nodes")


def deserialize_model(text: str) -> GbrtModel:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"not a JSON document: {exc}") from exc
    if isinstance(doc, dict) and doc.get("format") == FORMAT_NAME and doc.get("version") != FORMAT_VERSION:
        raise ModelFormatError(f"unsupported model version {doc.get('version')!r}")
    try:
        jsonschema.validate(doc, MODEL_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise ModelFormatError(f"model document violates schema: {exc.message}") from exc
    trees = [RegressionTree(**t) for t in doc["trees"]]
    for t in trees:
        _check_tree(t, doc["n_features"])
    return GbrtModel(
        intercept=doc["intercept"],
        trees=trees,
        learning_rate=doc["learning_rate"],
        threshold=doc["threshold"],
        n_features=doc["n_features"],
        layout=doc["layout"],
        train_deviance=doc.get("train_deviance", []),
    )
