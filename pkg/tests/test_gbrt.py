import json
import math

import numpy as np
import pytest

from ltlpredict import gbrt
from ltlpredict.gbrt import GbrtModel, GbrtParams, ModelFormatError, RegressionTree
from ltlpredict.rng import SplitMix64


def separable_set():
    rng = SplitMix64(100)
    x = np.array([2.0 * rng.random() - 1.0 for _ in range(200)])
    return x[:, None], (x >= 0).astype(int)


XOR_X = np.array([[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]])
XOR_Y = np.array([0, 1, 1, 0])


def straight_line_score(doc: dict, x) -> float:
    """Evaluate a serialized model directly from its JSON document."""
    total = 0.0
    for t in doc["trees"]:
        i = 0
        while t["feature"][i] != -1:
            go_left = x[t["feature"][i]] <= t["threshold"][i]
            i = t["left"][i] if go_left else t["right"][i]
        total += t["value"][i]
    return doc["intercept"] + doc["learning_rate"] * total


def test_params_validation():
    for bad in ({"n_trees": 0}, {"max_depth": 0}, {"learning_rate": 0.0},
                {"learning_rate": 1.5}, {"min_leaf": 0}, {"threshold": 1.0}):
        with pytest.raises(ValueError):
            GbrtParams(**bad)


def test_single_class_is_clamped():
    X = np.arange(6.0)[:, None]
    m = gbrt.fit(X, np.ones(6, dtype=int))
    assert m.intercept == gbrt.INTERCEPT_CLAMP and m.trees == []
    assert m.classify([123.0]) == 1
    m0 = gbrt.fit(X, np.zeros(6, dtype=int))
    assert m0.intercept == -gbrt.INTERCEPT_CLAMP and m0.classify([0.0]) == 0


def test_intercept_is_half_log_odds():
    X = np.zeros((4, 1))
    m = gbrt.fit(X, [1, 1, 1, 0], GbrtParams(n_trees=1))
    assert m.intercept == pytest.approx(0.5 * math.log(3.0))


def test_fit_input_errors():
    with pytest.raises(ValueError):
        gbrt.fit(np.zeros((0, 2)), [])
    with pytest.raises(ValueError):
        gbrt.fit(np.zeros((3, 2)), [0, 1])
    with pytest.raises(ValueError):
        gbrt.fit(np.zeros((2, 2)), [0, 2])


def test_separable_set():
    X, y = separable_set()
    m = gbrt.fit(X, y, GbrtParams(n_trees=10, max_depth=1, learning_rate=0.5))
    assert (m.classify_many(X) == y).all()
    assert [m.classify(x) for x in X.tolist()] == y.tolist()
    assert (np.diff(m.train_deviance) <= 0).all()
    assert all(t.depth() <= 1 for t in m.trees)


def test_xor():
    m = gbrt.fit(XOR_X, XOR_Y, GbrtParams(n_trees=50, max_depth=2, learning_rate=0.3))
    assert (m.classify_many(XOR_X) == XOR_Y).all()
    assert (np.diff(m.train_deviance) <= 0).all()


def test_first_xor_split_is_a_zero_gain_split_on_feature_0():
    # at the root of the first tree every split has zero gain; the tie rule picks x0 <= 0.5
    m = gbrt.fit(XOR_X, XOR_Y, GbrtParams(n_trees=1, max_depth=2))
    t = m.trees[0]
    assert (t.feature[0], t.threshold[0]) == (0, 0.5)


def test_tie_prefers_lowest_feature():
    X = np.array([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0], [3.0, 3.0]])
    m = gbrt.fit(X, [0, 0, 1, 1], GbrtParams(n_trees=1, max_depth=1))
    assert (m.trees[0].feature[0], m.trees[0].threshold[0]) == (0, 1.5)


def test_tie_prefers_smallest_threshold():
    X = np.array([[0.0], [1.0], [2.0], [3.0]])
    m = gbrt.fit(X, [1, 0, 0, 1], GbrtParams(n_trees=1, max_depth=1))
    assert (m.trees[0].feature[0], m.trees[0].threshold[0]) == (0, 0.5)


def test_better_gain_beats_lower_index():
    X = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
    m = gbrt.fit(X, [0, 0, 1, 1], GbrtParams(n_trees=1, max_depth=1))
    assert m.trees[0].feature[0] == 1


def test_thresholds_are_midpoints():
    rng = SplitMix64(3)
    X = np.array([[rng.randbelow(10), rng.randbelow(10)] for _ in range(80)], dtype=float)
    y = np.array([rng.bit() for _ in range(80)])
    m = gbrt.fit(X, y, GbrtParams(n_trees=5, max_depth=3))
    for t in m.trees:
        assert t.depth() <= 3
        stack = [(0, np.arange(len(X)))]
        while stack:
            node, idx = stack.pop()
            f = t.feature[node]
            if f < 0:
                continue
            col = X[idx, f]
            below, above = col[col <= t.threshold[node]], col[col > t.threshold[node]]
            assert t.threshold[node] == (below.max() + above.min()) / 2
            stack += [(t.left[node], idx[col <= t.threshold[node]]),
                      (t.right[node], idx[col > t.threshold[node]])]


def test_min_leaf_respected():
    X, y = separable_set()
    m = gbrt.fit(X, y, GbrtParams(n_trees=3, max_depth=4, min_leaf=30))
    for t in m.trees:
        leaves = t.predict(X)
        for v in set(leaves.tolist()):
            assert (leaves == v).sum() >= 30


def test_zero_tree_model_and_boundary():
    m = GbrtModel(0.0, [], 0.1, 0.5, 2)
    assert m.predict_score([1, 2]) == 0.0
    assert m.classify([1, 2]) == 0  # logistic(0) = 0.5 is not > 0.5
    assert GbrtModel(50.0, [], 0.1, 0.5, 1).classify([0]) == 1
    assert GbrtModel(-50.0, [], 0.1, 0.5, 1).classify([0]) == 0
    with pytest.raises(ValueError):
        m.predict_score([1])
    with pytest.raises(ValueError):
        m.predict_scores(np.zeros((3, 3)))


def test_all_zero_leaves_give_intercept():
    tree = RegressionTree()
    tree.add_node()
    m = GbrtModel(0.25, [tree] * 5, 0.7, 0.5, 1)
    assert m.predict_score([9]) == 0.25


def test_logistic_is_stable():
    assert gbrt.logistic(-1000.0) == 0.0 and gbrt.logistic(1000.0) == 1.0
    assert gbrt.logistic(0.0) == 0.5


def _random_problem(seed, n=150, d=6):
    rng = SplitMix64(seed)
    X = np.array([[rng.randbelow(5) for _ in range(d)] for _ in range(n)], dtype=float)
    noise = np.array([rng.random() < 0.1 for _ in range(n)])
    y = ((X[:, 0] + X[:, 3] > 4) ^ noise).astype(int)
    return X, y


def test_determinism():
    X, y = _random_problem(1)
    a = gbrt.serialize_model(gbrt.fit(X, y, GbrtParams(n_trees=20)))
    b = gbrt.serialize_model(gbrt.fit(X, y, GbrtParams(n_trees=20)))
    assert a == b


def test_straight_line_evaluator_agrees():
    X, y = _random_problem(2)
    m = gbrt.fit(X, y, GbrtParams(n_trees=30))
    doc = json.loads(gbrt.serialize_model(m))
    rng = SplitMix64(9)
    for _ in range(1000):
        x = [float(rng.randbelow(7)) - 1.0 for _ in range(6)]
        assert m.predict_score(x) == straight_line_score(doc, x)
    Xr = np.array([[rng.randbelow(7) - 1.0 for _ in range(6)] for _ in range(200)])
    assert np.allclose(m.predict_scores(Xr), [m.predict_score(x) for x in Xr.tolist()],
                       rtol=0, atol=1e-12)


def test_serialization_round_trip():
    X, y = _random_problem(3)
    m = gbrt.fit(X, y, GbrtParams(n_trees=25), layout="kripke:5x3x8;ltl-prefix:25;vocab:v1")
    text = gbrt.serialize_model(m)
    m2 = gbrt.deserialize_model(text)
    assert gbrt.serialize_model(m2) == text
    assert m2.layout == m.layout
    rng = SplitMix64(10)
    for _ in range(100):
        x = [rng.random() * 6 - 1 for _ in range(6)]
        assert m.predict_score(x) == m2.predict_score(x)


def test_empty_model_round_trip():
    m = GbrtModel(-0.123456789012345, [], 0.1, 0.5, 3)
    m2 = gbrt.deserialize_model(gbrt.serialize_model(m))
    assert m2.intercept == m.intercept and m2.trees == []


def _doc():
    X, y = _random_problem(4)
    return json.loads(gbrt.serialize_model(gbrt.fit(X, y, GbrtParams(n_trees=2))))


@pytest.mark.parametrize(
    "corrupt",
    [
        lambda d: d.update(version=2),
        lambda d: d.update(format="other"),
        lambda d: d.pop("intercept"),
        lambda d: d.update(threshold=1.5),
        lambda d: d["trees"][0].update(value="x"),
        lambda d: d["trees"][0]["left"].__setitem__(0, 0),
        lambda d: d["trees"][0]["feature"].__setitem__(0, 99),
        lambda d: d["trees"][0]["value"].pop(),
        lambda d: d["trees"][0].update(extra=[1]),
    ],
)
def test_corrupted_documents_rejected(corrupt):
    doc = _doc()
    corrupt(doc)
    with pytest.raises(ModelFormatError):
        gbrt.deserialize_model(json.dumps(doc))


def test_non_json_rejected():
    with pytest.raises(ModelFormatError):
        gbrt.deserialize_model("{not json")
    with pytest.raises(ModelFormatError):
        gbrt.deserialize_model("[]")
