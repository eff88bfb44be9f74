"""Minimal dense value network and its training math, in 64-bit numpy.

The network is a fixed-topology chain of affine layers with rectifier
nonlinearities on the hidden layers and a linear output. Training uses
mean-squared error restricted to masked (selected-action) outputs, an
Adam-style adaptive update, and decoupled L2 shrinkage applied to weight
matrices only (never biases, never folded into the moment estimates).
"""

from __future__ import annotations

import json
import math
from typing import Sequence

import numpy as np

DEFAULT_DIMS = (3, 64, 64, 64, 64, 10)

Gradients = tuple[list[np.ndarray], list[np.ndarray]]


def relu(z: np.ndarray) -> np.ndarray:
    return np.maximum(z, 0.0)


class QNetwork:
    """Fully connected action-value network.

    ``weights[i]`` has shape (out, in); ``biases[i]`` has shape (out,).
    """

    def __init__(self, weights: Sequence[np.ndarray], biases: Sequence[np.ndarray]):
        if len(weights) != len(biases) or not weights:
            raise ValueError("weights and biases must be non-empty and parallel")
        for k, (w, b) in enumerate(zip(weights, biases)):
            if w.ndim != 2 or b.ndim != 1 or w.shape[0] != b.shape[0]:
                raise ValueError(f"layer {k}: weight {w.shape} / bias {b.shape} mismatch")
            if k > 0 and w.shape[1] != weights[k - 1].shape[0]:
                raise ValueError(f"layer {k}: input dim {w.shape[1]} breaks the chain")
        self.weights = [np.asarray(w, dtype=np.float64) for w in weights]
        self.biases = [np.asarray(b, dtype=np.float64) for b in biases]

    @classmethod
    def initialize(cls, rng: np.random.Generator, dims: Sequence[int] = DEFAULT_DIMS) -> "QNetwork":
        """Seeded init: each layer's parameters uniform in +-sqrt(1/fan_in)."""
        weights, biases = [], []
        for fan_in, fan_out in zip(dims[:-1], dims[1:]):
            bound = 1.0 / math.sqrt(fan_in)
            weights.append(rng.uniform(-bound, bound, size=(fan_out, fan_in)))
            biases.append(rng.uniform(-bound, bound, size=fan_out))
        return cls(weights, biases)

    @property
    def dims(self) -> tuple[int, ...]:
        return (self.weights[0].shape[1],) + tuple(w.shape[0] for w in self.weights)

    def forward(self, x: np.ndarray) -> np.ndarray:
        """Action values for one input (in_dim,) or a batch (n, in_dim)."""
        x = np.asarray(x, dtype=np.float64)
        single = x.ndim == 1
        h = x[None, :] if single else x
        if h.shape[-1] != self.dims[0]:
            raise ValueError(f"expected input dim {self.dims[0]}, got {h.shape[-1]}")
        for w, b in zip(self.weights[:-1], self.biases[:-1]):
            h = relu(h @ w.T + b)
        out = h @ self.weights[-1].T + self.biases[-1]
        return out[0] if single else out

    def _forward_cached(self, x: np.ndarray) -> list[np.ndarray]:
        """Batch forward keeping every layer's post-activation for backprop."""
        acts = [np.asarray(x, dtype=np.float64)]
        for k, (w, b) in enumerate(zip(self.weights, self.biases)):
            z = acts[-1] @ w.T + b
            acts.append(z if k == len(self.weights) - 1 else relu(z))
        return acts

    def clone(self) -> "QNetwork":
        """Deep copy; parameter updates to either network leave the other intact."""
        return QNetwork([w.copy() for w in self.weights], [b.copy() for b in self.biases])


def greedy_action(net: QNetwork, obs: np.ndarray) -> int:
    """Index of the highest-valued action; exact ties break to the lowest index."""
    return int(np.argmax(net.forward(obs)))


def masked_mse(net: QNetwork, inputs: np.ndarray, targets: np.ndarray, mask: np.ndarray) -> float:
    """Mean over the batch of the squared error on masked outputs."""
    diff = (net.forward(np.atleast_2d(inputs)) - targets) * mask
    return float(np.sum(diff * diff) / diff.shape[0])


def backward(net: QNetwork, inputs: np.ndarray, targets: np.ndarray, mask: np.ndarray) -> Gradients:
    """Gradients of ``masked_mse`` w.r.t. every weight matrix and bias.

    ``inputs`` is (n, in_dim); ``targets`` and ``mask`` are (n, out_dim) with
    the mask selecting the outputs (chosen actions) that enter the loss.
    """
    inputs = np.atleast_2d(np.asarray(inputs, dtype=np.float64))
    n = inputs.shape[0]
    if n == 0:
        raise ValueError("batch must be non-empty")
    acts = net._forward_cached(inputs)
    delta = 2.0 * mask * (acts[-1] - targets) / n
    grad_w: list[np.ndarray] = [None] * len(net.weights)  # type: ignore[list-item]
    grad_b: list[np.ndarray] = [None] * len(net.biases)  # type: ignore[list-item]
    for k in range(len(net.weights) - 1, -1, -1):
        grad_w[k] = delta.T @ acts[k]
        grad_b[k] = delta.sum(axis=0)
        if k > 0:
            delta = delta @ net.weights[k]
            delta = np.where(acts[k] > 0, delta, 0.0)
    return grad_w, grad_b


class AdamOptimizer:
    """Adam with bias correction plus decoupled weight decay.

    The shrinkage term scales each weight matrix by (1 - lr * weight_decay)
    before the adaptive update is subtracted; biases and moment estimates
    never see the decay.
    """

    def __init__(
        self,
        learning_rate: float = 1e-4,
        weight_decay: float = 1e-5,
        beta1: float = 0.9,
        beta2: float = 0.999,
        eps: float = 1e-8,
    ):
        self.learning_rate = learning_rate
        self.weight_decay = weight_decay
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.t = 0
        self._m_w: list[np.ndarray] | None = None
        self._v_w: list[np.ndarray] | None = None
        self._m_b: list[np.ndarray] | None = None
        self._v_b: list[np.ndarray] | None = None

    def _ensure_state(self, net: QNetwork) -> None:
        if self._m_w is None:
            self._m_w = [np.zeros_like(w) for w in net.weights]
            self._v_w = [np.zeros_like(w) for w in net.weights]
            self._m_b = [np.zeros_like(b) for b in net.biases]
            self._v_b = [np.zeros_like(b) for b in net.biases]

    def step(self, net: QNetwork, grads: Gradients) -> None:
        """Apply one update in place."""
        self._ensure_state(net)
        grad_w, grad_b = grads
        self.t += 1
        c1 = 1.0 - self.beta1**self.t
        c2 = 1.0 - self.beta2**self.t
        lr = self.learning_rate
        shrink = 1.0 - lr * self.weight_decay
        for k in range(len(net.weights)):
            net.weights[k] *= shrink
            net.weights[k] -= lr * self._adaptive(self._m_w[k], self._v_w[k], grad_w[k], c1, c2)
            net.biases[k] -= lr * self._adaptive(self._m_b[k], self._v_b[k], grad_b[k], c1, c2)

    def _adaptive(self, m: np.ndarray, v: np.ndarray, g: np.ndarray, c1: float, c2: float) -> np.ndarray:
        m *= self.beta1
        m += (1.0 - self.beta1) * g
        v *= self.beta2
        v += (1.0 - self.beta2) * (g * g)
        return (m / c1) / (np.sqrt(v / c2) + self.eps)


def save_checkpoint(net: QNetwork, path, seed: int | None = None, frame_count: int = 0) -> None:
    """Serialize a network (row-major nested lists) with run metadata."""
    doc = {
        "architecture": list(net.dims),
        "seed": seed,
        "frame_count": frame_count,
        "layers": [
            {"weights": w.tolist(), "bias": b.tolist()}
            for w, b in zip(net.weights, net.biases)
        ],
    }
    with open(path, "w") as fh:
        json.dump(doc, fh)


def load_checkpoint(path) -> tuple[QNetwork, dict]:
    """Load and validate a checkpoint; raises ValueError on a broken file."""
    with open(path) as fh:
        doc = json.load(fh)
    try:
        arch = [int(d) for d in doc["architecture"]]
        layers = doc["layers"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed checkpoint {path}: {exc}") from exc
    if len(arch) < 2 or any(d < 1 for d in arch):
        raise ValueError(f"invalid architecture chain {arch}")
    if len(layers) != len(arch) - 1:
        raise ValueError(f"expected {len(arch) - 1} layers for architecture {arch}, got {len(layers)}")
    weights, biases = [], []
    for k, layer in enumerate(layers):
        w = np.asarray(layer["weights"], dtype=np.float64)
        b = np.asarray(layer["bias"], dtype=np.float64)
        if w.shape != (arch[k + 1], arch[k]) or b.shape != (arch[k + 1],):
            raise ValueError(
                f"layer {k} shape {w.shape}/{b.shape} does not match architecture {arch}"
            )
        if not (np.all(np.isfinite(w)) and np.all(np.isfinite(b))):
            raise ValueError(f"layer {k} contains non-finite parameters")
        weights.append(w)
        biases.append(b)
    meta = {"seed": doc.get("seed"), "frame_count": doc.get("frame_count", 0)}
    return QNetwork(weights, biases), meta
