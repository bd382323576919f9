"""Single-hidden-layer perceptron trained full batch with Adam.

Squared-error loss, rectified-linear hidden units, fixed epoch budget, no
early stopping. Inputs and targets are both z-scored from the training
data (predictions are mapped back), otherwise the small fixed step budget
cannot leave the initialization scale on targets measured in tens of
millimeters.
"""

from __future__ import annotations

import numpy as np

from ..errors import NonConvergence
from .base import MLP, FittedModel, MLPConfig, Standardization, standardization_from_dict


class MLPModel(FittedModel):
    kind = MLP

    def __init__(self, params, y_mean, y_std, hyper, feature_indices, standardization):
        super().__init__(feature_indices, standardization)
        self.params = [(np.asarray(W, dtype=np.float64), np.asarray(b, dtype=np.float64))
                       for W, b in params]
        self.y_mean = float(y_mean)
        self.y_std = float(y_std)
        self.hyper = hyper

    def predict(self, x) -> float:
        x = self._check(x)
        return float(self.predict_batch(x.reshape(1, -1))[0])

    def predict_batch(self, X) -> np.ndarray:
        X = self._check_batch(X)
        out = forward(self.params, self.standardization.transform(X))
        return self.y_mean + self.y_std * out

    def to_dict(self) -> dict:
        payload = self._base_dict(self.hyper)
        payload["layers"] = [{"W": W.tolist(), "b": b.tolist()} for W, b in self.params]
        payload["y_mean"] = self.y_mean
        payload["y_std"] = self.y_std
        return payload

    @classmethod
    def from_dict(cls, payload: dict) -> "MLPModel":
        hyper = payload["hyper"].copy()
        hyper["hidden_sizes"] = tuple(hyper["hidden_sizes"])
        return cls(
            [(layer["W"], layer["b"]) for layer in payload["layers"]],
            payload["y_mean"],
            payload["y_std"],
            MLPConfig(**hyper),
            payload["feature_indices"],
            standardization_from_dict(payload["standardization"]),
        )


def init_params(sizes, rng) -> list[tuple[np.ndarray, np.ndarray]]:
    """He-scaled normal weights, zero biases, one (W, b) pair per layer."""
    params = []
    for fan_in, fan_out in zip(sizes, sizes[1:]):
        W = rng.standard_normal((fan_in, fan_out)) * np.sqrt(2.0 / fan_in)
        params.append((W, np.zeros(fan_out)))
    return params


def forward(params, Z) -> np.ndarray:
    a = Z
    last = len(params) - 1
    for layer, (W, b) in enumerate(params):
        a = a @ W + b
        if layer < last:
            a = np.maximum(a, 0.0)
    return a[:, 0]


def loss_and_grads(params, Z, targets):
    """Mean squared error and its analytic gradients per layer.

    Returns ``(loss, grads)`` with grads shaped like params. Kept separate
    from the training loop so finite-difference checks can call it
    directly.
    """
    n = Z.shape[0]
    activations = [Z]
    pre = []
    a = Z
    last = len(params) - 1
    for layer, (W, b) in enumerate(params):
        z = a @ W + b
        pre.append(z)
        a = np.maximum(z, 0.0) if layer < last else z
        activations.append(a)

    pred = activations[-1][:, 0]
    diff = pred - targets
    loss = float(np.mean(diff**2))

    grads = [None] * len(params)
    delta = (2.0 / n) * diff.reshape(-1, 1)
    for layer in range(len(params) - 1, -1, -1):
        W, _ = params[layer]
        grads[layer] = (activations[layer].T @ delta, delta.sum(axis=0))
        if layer > 0:
            delta = (delta @ W.T) * (pre[layer - 1] > 0.0)
    return loss, grads


def fit_mlp(cfg: MLPConfig, X, y, feature_indices, seed: int) -> MLPModel:
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    stats = Standardization.fit(X)
    Z = stats.transform(X)

    y_mean = float(y.mean())
    y_std = float(y.std()) or 1.0
    t_targets = (y - y_mean) / y_std

    rng = np.random.default_rng(seed)
    sizes = [Z.shape[1], *cfg.hidden_sizes, 1]
    params = init_params(sizes, rng)

    m = [[np.zeros_like(W), np.zeros_like(b)] for W, b in params]
    v = [[np.zeros_like(W), np.zeros_like(b)] for W, b in params]
    for step in range(1, cfg.epochs + 1):
        loss, grads = loss_and_grads(params, Z, t_targets)
        if not np.isfinite(loss):
            raise NonConvergence("MLP loss became non-finite")
        bc1 = 1.0 - cfg.beta1**step
        bc2 = 1.0 - cfg.beta2**step
        for layer in range(len(params)):
            updated = []
            for slot in range(2):
                g = grads[layer][slot]
                m[layer][slot] = cfg.beta1 * m[layer][slot] + (1 - cfg.beta1) * g
                v[layer][slot] = cfg.beta2 * v[layer][slot] + (1 - cfg.beta2) * g * g
                m_hat = m[layer][slot] / bc1
                v_hat = v[layer][slot] / bc2
                updated.append(
                    params[layer][slot] - cfg.learning_rate * m_hat / (np.sqrt(v_hat) + cfg.eps)
                )
            params[layer] = tuple(updated)

    return MLPModel(params, y_mean, y_std, cfg, feature_indices, stats)
