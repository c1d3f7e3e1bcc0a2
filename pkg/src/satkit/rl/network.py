"""Small fully-connected networks with hand-written backprop, plus Adam.

Kept dependency-free (numpy only) so training is bit-deterministic
given a seed and the analytic gradients can be checked against finite
differences directly.
"""

from __future__ import annotations

import math

import numpy as np


def orthogonal_init(rng: np.random.Generator, shape: tuple[int, int], gain: float) -> np.ndarray:
    """Orthogonal weight matrix scaled by ``gain``, deterministic in rng."""
    rows, cols = shape
    big, small = max(rows, cols), min(rows, cols)
    a = rng.standard_normal((big, small))
    q, r = np.linalg.qr(a)
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.0
    q = q * signs
    w = q if rows >= cols else q.T
    return np.ascontiguousarray(gain * w, dtype=np.float64)


class Mlp:
    """Feed-forward net: tanh hidden layers, linear output.

    ``forward`` returns the output and a cache of layer activations;
    ``backward`` consumes the cache and the gradient at the output and
    returns per-parameter gradients in ``parameters()`` order.
    """

    def __init__(
        self,
        sizes: list[int],
        rng: np.random.Generator,
        hidden_gain: float = math.sqrt(2.0),
        out_gain: float = 1.0,
    ):
        self.sizes = list(sizes)
        self.weights: list[np.ndarray] = []
        self.biases: list[np.ndarray] = []
        last = len(sizes) - 2
        for i, (fan_in, fan_out) in enumerate(zip(sizes, sizes[1:])):
            gain = out_gain if i == last else hidden_gain
            self.weights.append(orthogonal_init(rng, (fan_in, fan_out), gain))
            self.biases.append(np.zeros(fan_out, dtype=np.float64))

    @property
    def num_layers(self) -> int:
        return len(self.weights)

    def forward(self, x: np.ndarray) -> tuple[np.ndarray, list[np.ndarray]]:
        h = np.asarray(x, dtype=np.float64)
        cache = [h]
        for i in range(self.num_layers):
            z = h @ self.weights[i] + self.biases[i]
            h = np.tanh(z) if i < self.num_layers - 1 else z
            cache.append(h)
        return h, cache

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return self.forward(x)[0]

    def backward(self, cache: list[np.ndarray], grad_out: np.ndarray) -> list[np.ndarray]:
        grads: list[np.ndarray] = [np.empty(0)] * (2 * self.num_layers)
        g = np.asarray(grad_out, dtype=np.float64)
        for i in range(self.num_layers - 1, -1, -1):
            grads[2 * i] = cache[i].T @ g
            grads[2 * i + 1] = g.sum(axis=0)
            if i > 0:
                g = (g @ self.weights[i].T) * (1.0 - cache[i] ** 2)
        return grads

    def parameters(self) -> list[np.ndarray]:
        out = []
        for w, b in zip(self.weights, self.biases):
            out.append(w)
            out.append(b)
        return out

    def set_parameters(self, params: list[np.ndarray]) -> None:
        expected = self.parameters()
        if len(params) != len(expected):
            raise ValueError("parameter count mismatch")
        for i in range(self.num_layers):
            self.weights[i] = params[2 * i].reshape(self.weights[i].shape).copy()
            self.biases[i] = params[2 * i + 1].reshape(self.biases[i].shape).copy()

    def copy_parameters(self) -> list[np.ndarray]:
        return [p.copy() for p in self.parameters()]


class Adam:
    """Adam with per-parameter-array state; lr is mutable."""

    def __init__(
        self,
        params: list[np.ndarray],
        lr: float,
        beta1: float = 0.9,
        beta2: float = 0.999,
        eps: float = 1e-8,
    ):
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.t = 0
        self.m = [np.zeros_like(p) for p in params]
        self.v = [np.zeros_like(p) for p in params]

    def step(self, params: list[np.ndarray], grads: list[np.ndarray]) -> None:
        self.t += 1
        b1t = 1.0 - self.beta1**self.t
        b2t = 1.0 - self.beta2**self.t
        for p, g, m, v in zip(params, grads, self.m, self.v):
            m *= self.beta1
            m += (1.0 - self.beta1) * g
            v *= self.beta2
            v += (1.0 - self.beta2) * (g * g)
            p -= self.lr * (m / b1t) / (np.sqrt(v / b2t) + self.eps)

    def state(self) -> dict:
        return {
            "t": self.t,
            "m": [m.copy() for m in self.m],
            "v": [v.copy() for v in self.v],
        }

    def restore(self, state: dict) -> None:
        self.t = state["t"]
        self.m = [m.copy() for m in state["m"]]
        self.v = [v.copy() for v in state["v"]]
