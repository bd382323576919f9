import numpy as np
import pytest

from hydrocast.cart import TreeConfig, fit_tree
from hydrocast.errors import DuplicateKind, ShapeMismatch, SingularSystem
from hydrocast.learners import (
    KIND_ORDER,
    LearnerSpec,
    default_specs,
    fit,
    fit_all,
    model_from_dict,
    model_to_dict,
    predict,
)
from hydrocast.learners.base import (
    KNNConfig,
    LRConfig,
    MLPConfig,
    RFConfig,
    Standardization,
    SVRConfig,
)
from hydrocast.learners.mlp import init_params, loss_and_grads
from hydrocast.learners.svm import SVRModel


# --- linear regression ---

def test_lr_recovers_exact_affine_function():
    rng = np.random.default_rng(0)
    X = rng.standard_normal((40, 1))
    y = 2.0 * X[:, 0] + 1.0
    model = fit(LearnerSpec("lr"), X, y)
    assert model.weights[0] == pytest.approx(2.0, abs=1e-10)
    assert model.bias == pytest.approx(1.0, abs=1e-10)
    assert np.abs(y - model.predict_batch(X)).mean() < 1e-8
    assert predict(model, np.array([3.0])) == pytest.approx(7.0, abs=1e-9)


def test_lr_multifeature_recovery():
    rng = np.random.default_rng(1)
    X = rng.standard_normal((100, 4))
    w = np.array([1.5, -2.0, 0.0, 3.25])
    y = X @ w + 0.75
    model = fit(LearnerSpec("lr"), X, y)
    np.testing.assert_allclose(model.weights, w, atol=1e-9)
    assert model.bias == pytest.approx(0.75, abs=1e-9)


def test_lr_residuals_orthogonal_to_columns():
    rng = np.random.default_rng(2)
    X = rng.standard_normal((60, 3))
    y = X[:, 0] - X[:, 2] + rng.standard_normal(60)
    model = fit(LearnerSpec("lr"), X, y)
    residual = y - model.predict_batch(X)
    Z = Standardization.fit(X).transform(X)
    for col in range(3):
        assert abs(residual @ Z[:, col]) < 1e-6
    assert abs(residual.sum()) < 1e-6  # intercept column


def test_lr_singular_gram_falls_back_to_ridge():
    rng = np.random.default_rng(3)
    x = rng.standard_normal(30)
    X = np.column_stack([x, x])  # exactly colinear
    y = 3.0 * x + 2.0
    model = fit(LearnerSpec("lr"), X, y)
    pred = model.predict_batch(X)
    np.testing.assert_allclose(pred, y, atol=1e-4)
    with pytest.raises(SingularSystem):
        fit(LearnerSpec("lr", LRConfig(ridge_fallback=False)), X, y)


def test_lr_prediction_contract():
    model = fit(LearnerSpec("lr"), np.arange(10.0).reshape(-1, 1), np.arange(10.0))
    assert predict(model, np.array([3.0])) == pytest.approx(3.0, abs=1e-9)
    with pytest.raises(ShapeMismatch):
        predict(model, np.array([1.0, 2.0]))


# --- k nearest neighbors ---

def test_knn_k1_is_exact_on_training_points():
    rng = np.random.default_rng(4)
    X = rng.standard_normal((25, 3))
    y = rng.standard_normal(25)
    model = fit(LearnerSpec("knn", KNNConfig(k=1)), X, y)
    for i in range(25):
        assert predict(model, X[i]) == y[i]


def test_knn_k3_hand_case():
    X = np.array([[0.0], [1.0], [2.0], [3.0]])
    y = np.array([0.0, 10.0, 20.0, 30.0])
    model = fit(LearnerSpec("knn", KNNConfig(k=3)), X, y)
    # neighbors of 0.9 are x=1, 0, 2 -> mean(10, 0, 20)
    assert predict(model, np.array([0.9])) == pytest.approx(10.0)


def test_knn_k_larger_than_train_uses_all():
    X = np.array([[0.0], [1.0]])
    y = np.array([2.0, 4.0])
    model = fit(LearnerSpec("knn", KNNConfig(k=10)), X, y)
    assert predict(model, np.array([0.5])) == pytest.approx(3.0)


# --- random forest ---

def test_rf_single_tree_no_bootstrap_equals_cart():
    rng = np.random.default_rng(5)
    X = rng.standard_normal((60, 4))
    y = X[:, 1] * 2 + rng.standard_normal(60) * 0.3
    cfg = RFConfig(n_trees=1, bootstrap=False, feature_mode="all",
                   max_depth=None, min_samples_leaf=5)
    forest = fit(LearnerSpec("rf", cfg, seed=123), X, y)
    tree = fit_tree(X, y, TreeConfig(max_depth=None, min_samples_leaf=5))
    Xq = rng.standard_normal((30, 4))
    np.testing.assert_array_equal(forest.predict_batch(Xq), tree.predict_batch(Xq))


def test_rf_constant_target_predicts_constant():
    rng = np.random.default_rng(6)
    X = rng.standard_normal((30, 2))
    y = np.full(30, 7.25)
    model = fit(LearnerSpec("rf", RFConfig(n_trees=10)), X, y)
    np.testing.assert_allclose(model.predict_batch(rng.standard_normal((10, 2))), 7.25)


def test_rf_variance_reduction_over_single_trees():
    wins = 0
    for seed in range(20):
        rng = np.random.default_rng(seed)
        X = rng.standard_normal((120, 5))
        y = np.sin(X[:, 0] * 2) + X[:, 1] + rng.standard_normal(120) * 0.4
        Xq = rng.standard_normal((200, 5))
        yq = np.sin(Xq[:, 0] * 2) + Xq[:, 1]
        forest = fit(LearnerSpec("rf", RFConfig(n_trees=40), seed=seed), X, y)
        forest_mse = np.mean((yq - forest.predict_batch(Xq)) ** 2)
        tree_mses = sorted(
            np.mean((yq - t.predict_batch(Xq)) ** 2) for t in forest.trees
        )
        median_tree = tree_mses[len(tree_mses) // 2]
        if forest_mse <= median_tree:
            wins += 1
    assert wins >= 18  # statistical: at least 90% of seeds


def test_rf_is_deterministic_given_seed():
    rng = np.random.default_rng(7)
    X = rng.standard_normal((50, 3))
    y = rng.standard_normal(50)
    m1 = fit(LearnerSpec("rf", RFConfig(n_trees=8), seed=9), X, y)
    m2 = fit(LearnerSpec("rf", RFConfig(n_trees=8), seed=9), X, y)
    Xq = rng.standard_normal((20, 3))
    np.testing.assert_array_equal(m1.predict_batch(Xq), m2.predict_batch(Xq))


# --- support vector regression ---

def test_svr_fixed_parameters_predict_constant():
    model = SVRModel(np.zeros(3), 5.0, SVRConfig(), (0, 1, 2), Standardization.identity(3))
    assert predict(model, np.array([4.0, -2.0, 0.5])) == 5.0


def test_svr_epsilon_tube_on_noiseless_linear_data():
    rng = np.random.default_rng(8)
    X = rng.standard_normal((50, 3))
    y = X @ np.array([1.5, -2.0, 0.7]) + 0.8
    cfg = SVRConfig(c=1000.0, epsilon=0.1, epochs=2000, step=0.2)
    model = fit(LearnerSpec("svr", cfg, seed=5), X, y)
    residuals = np.abs(y - model.predict_batch(X))
    assert residuals.max() <= cfg.epsilon + 1e-3


def test_svr_is_deterministic_given_seed():
    rng = np.random.default_rng(9)
    X = rng.standard_normal((40, 2))
    y = X[:, 0] + rng.standard_normal(40) * 0.1
    m1 = fit(LearnerSpec("svr", seed=3), X, y)
    m2 = fit(LearnerSpec("svr", seed=3), X, y)
    np.testing.assert_array_equal(m1.weights, m2.weights)
    assert m1.bias == m2.bias


# --- multilayer perceptron ---

def test_mlp_gradients_match_central_differences():
    rng = np.random.default_rng(10)
    worst = 0.0
    for _ in range(3):
        params = init_params([3, 4, 1], rng)
        Z = rng.standard_normal((6, 3))
        targets = rng.standard_normal(6)
        _, grads = loss_and_grads(params, Z, targets)
        h = 1e-5
        for layer, (W, b) in enumerate(params):
            for slot, arr in enumerate((W, b)):
                flat = arr.ravel()
                for k in range(flat.size):
                    orig = flat[k]
                    flat[k] = orig + h
                    up, _ = loss_and_grads(params, Z, targets)
                    flat[k] = orig - h
                    down, _ = loss_and_grads(params, Z, targets)
                    flat[k] = orig
                    numeric = (up - down) / (2 * h)
                    analytic = grads[layer][slot].ravel()[k]
                    denom = max(abs(numeric) + abs(analytic), 1e-8)
                    worst = max(worst, abs(numeric - analytic) / denom)
    assert worst < 1e-4


def test_mlp_fits_linear_function_reasonably():
    rng = np.random.default_rng(11)
    X = rng.standard_normal((200, 2))
    y = 3.0 * X[:, 0] - X[:, 1] + 50.0  # offset checks target scaling
    model = fit(LearnerSpec("mlp", MLPConfig(epochs=400), seed=1), X, y)
    pred = model.predict_batch(X)
    assert np.isfinite(pred).all()
    assert np.corrcoef(pred, y)[0, 1] > 0.95


def test_mlp_is_deterministic_given_seed():
    rng = np.random.default_rng(12)
    X = rng.standard_normal((50, 3))
    y = rng.standard_normal(50)
    m1 = fit(LearnerSpec("mlp", MLPConfig(epochs=50), seed=4), X, y)
    m2 = fit(LearnerSpec("mlp", MLPConfig(epochs=50), seed=4), X, y)
    for (w1, b1), (w2, b2) in zip(m1.params, m2.params):
        np.testing.assert_array_equal(w1, w2)
        np.testing.assert_array_equal(b1, b2)


def test_mlp_hidden_sizes_must_be_nonempty():
    with pytest.raises(ValueError):
        MLPConfig(hidden_sizes=())


# --- shared contract ---

def test_fit_all_returns_all_five_default_models():
    rng = np.random.default_rng(13)
    X = rng.standard_normal((60, 4))
    y = X[:, 0] * 2 + rng.standard_normal(60) * 0.2 + 10
    specs = default_specs(seed=7)
    light = []
    for spec in specs:
        if spec.kind == "rf":
            spec = LearnerSpec("rf", RFConfig(n_trees=10), seed=spec.seed)
        elif spec.kind == "mlp":
            spec = LearnerSpec("mlp", MLPConfig(epochs=50), seed=spec.seed)
        elif spec.kind == "svr":
            spec = LearnerSpec("svr", SVRConfig(epochs=50), seed=spec.seed)
        light.append(spec)
    models = fit_all(light, X, y)
    assert set(models) == set(KIND_ORDER)
    for model in models.values():
        assert np.isfinite(model.predict_batch(X)).all()


def test_fit_all_empty_specs_gives_empty_map():
    assert fit_all([], np.zeros((5, 2)), np.zeros(5)) == {}


def test_fit_all_rejects_duplicate_kinds():
    with pytest.raises(DuplicateKind):
        fit_all([LearnerSpec("lr"), LearnerSpec("lr")], np.zeros((5, 2)), np.zeros(5))


def test_fit_all_tags_failing_kind():
    rng = np.random.default_rng(14)
    x = rng.standard_normal(20)
    X = np.column_stack([x, x])
    y = x * 2
    with pytest.raises(SingularSystem) as err:
        fit_all([LearnerSpec("lr", LRConfig(ridge_fallback=False))], X, y)
    assert "[lr]" in str(err.value)


def test_spec_validation():
    with pytest.raises(ValueError):
        LearnerSpec("boost")
    with pytest.raises(ValueError):
        LearnerSpec("lr", KNNConfig())
    with pytest.raises(ValueError):
        KNNConfig(k=0)
    with pytest.raises(ValueError):
        RFConfig(n_trees=0)
    with pytest.raises(ValueError):
        SVRConfig(epsilon=-0.1)


@pytest.mark.parametrize("kind,hyper", [
    ("lr", None),
    ("knn", KNNConfig(k=2)),
    ("rf", RFConfig(n_trees=5)),
    ("svr", SVRConfig(epochs=30)),
    ("mlp", MLPConfig(epochs=30)),
])
def test_serialization_round_trip(kind, hyper):
    import json

    rng = np.random.default_rng(15)
    X = rng.standard_normal((40, 3))
    y = X[:, 0] + rng.standard_normal(40) * 0.1
    model = fit(LearnerSpec(kind, hyper, seed=2), X, y, feature_indices=(4, 9, 13))
    clone = model_from_dict(json.loads(json.dumps(model_to_dict(model))))
    assert clone.kind == kind
    assert clone.feature_indices == (4, 9, 13)
    Xq = rng.standard_normal((15, 3))
    np.testing.assert_array_equal(model.predict_batch(Xq), clone.predict_batch(Xq))
