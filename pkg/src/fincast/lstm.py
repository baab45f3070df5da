"""Two-layer LSTM regressor written directly in numpy.

Topology (default shape): ``lstm(50, full sequence) -> dropout ->
lstm(50, last state) -> dropout -> dense(1)``, 30,651 parameters.

Gate blocks are stacked in the order input, forget, cell, output, so each
layer holds ``W`` (4h x in), ``U`` (4h x h) and ``b`` (4h).
"""

from __future__ import annotations

import hashlib
import math
import time
import zlib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import metrics
from .errors import (ChecksumError, FormatVersionError, InsufficientData, ModelIOError,
                     ShapeError)
from .preprocess import ScalerParams, SplitDataset

GATES = ("input", "forget", "cell", "output")
FORMAT_HEADER = "FINCAST-MODEL"
FORMAT_VERSION = 1


def _sigmoid(z):
    return 0.5 * (np.tanh(0.5 * z) + 1.0)


@dataclass
class LstmLayerWeights:
    W: np.ndarray
    U: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        h4, _ = self.W.shape
        if h4 % 4 or self.U.shape != (h4, h4 // 4) or self.b.shape != (h4,):
            raise ShapeError(f"inconsistent layer shapes W{self.W.shape} U{self.U.shape} b{self.b.shape}")

    @property
    def input_dim(self) -> int:
        return self.W.shape[1]

    @property
    def hidden_dim(self) -> int:
        return self.U.shape[1]

    def gate(self, name: str) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Views ``(W_g, U_g, b_g)`` onto one gate's block."""
        k = GATES.index(name)
        h = self.hidden_dim
        s = slice(k * h, (k + 1) * h)
        return self.W[s], self.U[s], self.b[s]

    def param_count(self) -> int:
        return self.W.size + self.U.size + self.b.size


def layer_param_count(input_dim: int, hidden: int) -> int:
    return 4 * ((input_dim + hidden) * hidden + hidden)


@dataclass
class LstmNetwork:
    layer1: LstmLayerWeights
    layer2: LstmLayerWeights
    dense_w: np.ndarray   # (hidden,)
    dense_b: np.ndarray   # (1,)
    dropout_rate: float = 0.2
    seed: int = 0
    lookback: int = 60

    def __post_init__(self):
        if not 0.0 <= self.dropout_rate < 1.0:
            raise ValueError("dropout_rate must lie in [0, 1)")
        if self.layer2.input_dim != self.layer1.hidden_dim:
            raise ShapeError("layer2 input must match layer1 hidden size")
        if self.dense_w.shape != (self.layer2.hidden_dim,) or self.dense_b.shape != (1,):
            raise ShapeError("dense head does not match layer2 hidden size")

    def parameters(self) -> dict[str, np.ndarray]:
        """Live references to every trainable array, in a fixed order."""
        return {
            "layer1.W": self.layer1.W, "layer1.U": self.layer1.U, "layer1.b": self.layer1.b,
            "layer2.W": self.layer2.W, "layer2.U": self.layer2.U, "layer2.b": self.layer2.b,
            "dense.w": self.dense_w, "dense.b": self.dense_b,
        }

    def predict(self, windows) -> np.ndarray:
        return predict_series(self, windows)

    def copy(self) -> "LstmNetwork":
        p = {k: v.copy() for k, v in self.parameters().items()}
        return LstmNetwork(
            LstmLayerWeights(p["layer1.W"], p["layer1.U"], p["layer1.b"]),
            LstmLayerWeights(p["layer2.W"], p["layer2.U"], p["layer2.b"]),
            p["dense.w"], p["dense.b"], self.dropout_rate, self.seed, self.lookback)

    def checksum(self) -> str:
        return parameter_checksum(self)


def parameter_checksum(net: LstmNetwork) -> str:
    h = hashlib.sha256()
    for name, arr in net.parameters().items():
        h.update(name.encode())
        h.update(np.ascontiguousarray(arr, dtype="<f8").tobytes())
    return h.hexdigest()


def param_count(net: LstmNetwork) -> int:
    return net.layer1.param_count() + net.layer2.param_count() + net.dense_w.size + net.dense_b.size


def init_network(seed: int = 42, input_dim: int = 1, hidden: int = 50,
                 dropout_rate: float = 0.2, lookback: int = 60) -> LstmNetwork:
    """Glorot-uniform weights, zero biases except forget gate = 1.

    Arrays are drawn from ``numpy.random.default_rng(seed)`` (PCG64) in the
    order layer1.W, layer1.U, layer2.W, layer2.U, dense.w.
    """
    if input_dim < 1 or hidden < 1 or lookback < 1:
        raise ValueError("dimensions must be positive")
    rng = np.random.default_rng(seed)

    def glorot(rows, cols):
        limit = math.sqrt(6.0 / (rows + cols))
        return rng.uniform(-limit, limit, size=(rows, cols))

    def layer(n_in):
        W = glorot(4 * hidden, n_in)
        U = glorot(4 * hidden, hidden)
        b = np.zeros(4 * hidden)
        b[hidden:2 * hidden] = 1.0
        return LstmLayerWeights(W, U, b)

    l1 = layer(input_dim)
    l2 = layer(hidden)
    dense_w = glorot(hidden, 1).ravel()
    return LstmNetwork(l1, l2, dense_w, np.zeros(1), dropout_rate, seed, lookback)


# -- forward / backward -------------------------------------------------------

@dataclass
class _LayerCache:
    X: np.ndarray       # (B, T, in)
    gates: np.ndarray   # (T, B, 4h) activated i, f, g, o
    c: np.ndarray       # (T+1, B, h), c[0] is the initial state
    h: np.ndarray       # (T+1, B, h)
    tanh_c: np.ndarray  # (T, B, h)


def layer_forward(w: LstmLayerWeights, X: np.ndarray) -> tuple[np.ndarray, _LayerCache]:
    """Run one LSTM layer over ``X`` (B, T, in) from zero state; returns all hidden states (B, T, h)."""
    B, T, _ = X.shape
    H = w.hidden_dim
    xz = X @ w.W.T + w.b            # (B, T, 4h)
    gates = np.empty((T, B, 4 * H))
    c = np.zeros((T + 1, B, H))
    h = np.zeros((T + 1, B, H))
    tanh_c = np.empty((T, B, H))
    UT = w.U.T
    for t in range(T):
        z = xz[:, t] + h[t] @ UT
        a = gates[t]
        a[:, :2 * H] = _sigmoid(z[:, :2 * H])
        a[:, 2 * H:3 * H] = np.tanh(z[:, 2 * H:3 * H])
        a[:, 3 * H:] = _sigmoid(z[:, 3 * H:])
        c[t + 1] = a[:, H:2 * H] * c[t] + a[:, :H] * a[:, 2 * H:3 * H]
        tanh_c[t] = np.tanh(c[t + 1])
        h[t + 1] = a[:, 3 * H:] * tanh_c[t]
    return h[1:].transpose(1, 0, 2), _LayerCache(X, gates, c, h, tanh_c)


def layer_backward(w: LstmLayerWeights, cache: _LayerCache, dH: np.ndarray):
    """Backpropagate ``dH`` (B, T, h), the loss gradient w.r.t. each emitted hidden state.

    Returns ``(dX, dW, dU, db)``.
    """
    B, T, _ = cache.X.shape
    H = w.hidden_dim
    dZ = np.empty((T, B, 4 * H))
    dh_next = np.zeros((B, H))
    dc_next = np.zeros((B, H))
    for t in range(T - 1, -1, -1):
        a = cache.gates[t]
        i, f, g, o = a[:, :H], a[:, H:2 * H], a[:, 2 * H:3 * H], a[:, 3 * H:]
        tc = cache.tanh_c[t]
        dh = dH[:, t] + dh_next
        dc = dc_next + dh * o * (1.0 - tc * tc)
        dz = dZ[t]
        dz[:, :H] = dc * g * i * (1.0 - i)
        dz[:, H:2 * H] = dc * cache.c[t] * f * (1.0 - f)
        dz[:, 2 * H:3 * H] = dc * i * (1.0 - g * g)
        dz[:, 3 * H:] = dh * tc * o * (1.0 - o)
        dc_next = dc * f
        dh_next = dz @ w.U
    flat_dz = dZ.reshape(T * B, 4 * H)
    X_tb = cache.X.transpose(1, 0, 2).reshape(T * B, -1)
    h_prev = cache.h[:-1].reshape(T * B, H)
    dW = flat_dz.T @ X_tb
    dU = flat_dz.T @ h_prev
    db = flat_dz.sum(axis=0)
    dX = (dZ @ w.W).transpose(1, 0, 2)
    return dX, dW, dU, db


def _as_batch(net: LstmNetwork, windows) -> np.ndarray:
    X = np.asarray(windows, dtype=np.float64)
    if X.ndim == 1:
        X = X[None, :]
    if X.ndim == 2:
        X = X[:, :, None]
    if X.ndim != 3 or X.shape[2] != net.layer1.input_dim:
        raise ShapeError(f"expected windows of shape (batch, time, {net.layer1.input_dim}), got {np.shape(windows)}")
    if X.shape[1] != net.lookback:
        raise ShapeError(f"window length {X.shape[1]} != lookback {net.lookback}")
    return X


def sample_masks(net: LstmNetwork, batch: int, rng: np.random.Generator):
    """Inverted-dropout masks (already scaled by 1/keep) for one batch."""
    keep = 1.0 - net.dropout_rate
    m1 = (rng.random((batch, net.lookback, net.layer1.hidden_dim)) < keep) / keep
    m2 = (rng.random((batch, net.layer2.hidden_dim)) < keep) / keep
    return m1, m2


def forward_batch(net: LstmNetwork, windows, train: bool = False,
                  rng: Optional[np.random.Generator] = None, masks=None):
    """Batched forward pass. Returns ``(predictions (B,), cache)``.

    In train mode with a non-zero dropout rate, masks come from ``masks`` if
    given, else are drawn from ``rng``.
    """
    X = _as_batch(net, windows)
    H1, c1 = layer_forward(net.layer1, X)
    m1 = m2 = None
    if train and net.dropout_rate > 0.0:
        if masks is None:
            if rng is None:
                raise ValueError("train mode with dropout needs an rng or explicit masks")
            masks = sample_masks(net, X.shape[0], rng)
        m1, m2 = masks
    D1 = H1 * m1 if m1 is not None else H1
    H2, c2 = layer_forward(net.layer2, D1)
    last = H2[:, -1]
    d2 = last * m2 if m2 is not None else last
    y = d2 @ net.dense_w + net.dense_b[0]
    return y, (c1, c2, m1, m2, d2)


def forward(net: LstmNetwork, window: Sequence[float], mode: str = "infer",
            rng: Optional[np.random.Generator] = None, masks=None):
    """Single-window forward pass; returns ``(prediction, cache)``."""
    if mode not in ("train", "infer"):
        raise ValueError("mode must be 'train' or 'infer'")
    arr = np.asarray(window, dtype=np.float64)
    if arr.ndim not in (1, 2) or arr.shape[0] != net.lookback:
        raise ShapeError(f"window must hold {net.lookback} steps")
    y, cache = forward_batch(net, arr[None], mode == "train", rng, masks)
    return float(y[0]), cache


def loss_and_gradients(net: LstmNetwork, windows, targets, train: bool = True,
                       rng: Optional[np.random.Generator] = None, masks=None):
    """Batch MSE and its gradient w.r.t. every parameter (keys as in ``net.parameters()``)."""
    t = np.asarray(targets, dtype=np.float64).ravel()
    y, (c1, c2, m1, m2, d2) = forward_batch(net, windows, train, rng, masks)
    if t.size != y.size or t.size == 0:
        raise ShapeError(f"{y.size} predictions vs {t.size} targets")
    B = t.size
    err = y - t
    loss = float(np.mean(err * err))

    dy = 2.0 * err / B                          # (B,)
    g_dense_w = d2.T @ dy
    g_dense_b = np.array([dy.sum()])
    dd2 = np.outer(dy, net.dense_w)
    dlast = dd2 * m2 if m2 is not None else dd2
    dH2 = np.zeros((B, net.lookback, net.layer2.hidden_dim))
    dH2[:, -1] = dlast
    dD1, gW2, gU2, gb2 = layer_backward(net.layer2, c2, dH2)
    dH1 = dD1 * m1 if m1 is not None else dD1
    _, gW1, gU1, gb1 = layer_backward(net.layer1, c1, dH1)
    grads = {
        "layer1.W": gW1, "layer1.U": gU1, "layer1.b": gb1,
        "layer2.W": gW2, "layer2.U": gU2, "layer2.b": gb2,
        "dense.w": g_dense_w, "dense.b": g_dense_b,
    }
    return loss, grads


# -- optimisation -------------------------------------------------------------

@dataclass
class TrainConfig:
    epochs: int = 10
    batch_size: int = 32
    learning_rate: float = 1e-3
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    adam_epsilon: float = 1e-8
    shuffle_seed: int = 0

    def __post_init__(self):
        if self.epochs < 0:
            raise ValueError("epochs must be >= 0")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")


@dataclass
class AdamState:
    m: dict = field(default_factory=dict)
    v: dict = field(default_factory=dict)
    t: int = 0

    @classmethod
    def for_params(cls, params: dict) -> "AdamState":
        return cls({k: np.zeros_like(p) for k, p in params.items()},
                   {k: np.zeros_like(p) for k, p in params.items()})


def adam_step(state: AdamState, params: dict, grads: dict, config: TrainConfig) -> dict:
    """One bias-corrected Adam update, applied to ``params`` in place."""
    state.t += 1
    b1, b2 = config.adam_beta1, config.adam_beta2
    c1 = 1.0 - b1 ** state.t
    c2 = 1.0 - b2 ** state.t
    for name, p in params.items():
        g = grads[name]
        m = state.m.setdefault(name, np.zeros_like(p))
        v = state.v.setdefault(name, np.zeros_like(p))
        m *= b1
        m += (1.0 - b1) * g
        v *= b2
        v += (1.0 - b2) * g * g
        p -= config.learning_rate * (m / c1) / (np.sqrt(v / c2) + config.adam_epsilon)
    return params


@dataclass(frozen=True)
class TrainReport:
    epoch_losses: tuple[float, ...]
    seconds: float
    checksum: str


def train(net: LstmNetwork, split: SplitDataset, config: TrainConfig, progress=None) -> TrainReport:
    """Mini-batch Adam on ``split.train``; mutates ``net`` in place.

    Windows are reshuffled every epoch and dropout masks drawn from one
    generator seeded with ``config.shuffle_seed``, so runs are repeatable.
    """
    X, y = split.train.inputs, split.train.targets
    n = len(y)
    if n == 0:
        raise InsufficientData("empty training partition")
    start = time.perf_counter()
    rng = np.random.default_rng(config.shuffle_seed)
    params = net.parameters()
    state = AdamState.for_params(params)
    losses = []
    for epoch in range(config.epochs):
        order = rng.permutation(n)
        total = 0.0
        for lo in range(0, n, config.batch_size):
            idx = order[lo:lo + config.batch_size]
            loss, grads = loss_and_gradients(net, X[idx], y[idx], train=True, rng=rng)
            adam_step(state, params, grads, config)
            total += loss * idx.size
        losses.append(total / n)
        if progress is not None:
            progress(epoch + 1, losses[-1])
    return TrainReport(tuple(losses), time.perf_counter() - start, parameter_checksum(net))


# -- inference ----------------------------------------------------------------

def predict_series(net: LstmNetwork, windows, chunk: int = 512) -> np.ndarray:
    """Inference-mode predictions (scaled units) for a stack of windows."""
    X = _as_batch(net, windows)
    out = [forward_batch(net, X[i:i + chunk])[0] for i in range(0, X.shape[0], chunk)]
    return np.concatenate(out) if out else np.empty(0)


def evaluate(net, split: SplitDataset, scaler: ScalerParams) -> metrics.MetricsReport:
    """Test-partition metrics in price units.

    ``net`` may be any object with a ``predict(windows)`` method.
    """
    pred = np.asarray(net.predict(split.test.inputs), dtype=np.float64)
    if pred.shape != split.test.targets.shape:
        raise ShapeError(f"predictions {pred.shape} vs targets {split.test.targets.shape}")
    return metrics.evaluate(scaler.inverse_transform(split.test.targets), scaler.inverse_transform(pred))


def future_forecast(net, scaler: ScalerParams, last_window: Sequence[float], days: int) -> list[float]:
    """Roll the one-step model forward ``days`` times, feeding predictions back in.

    Errors compound: each step conditions on earlier predictions, so long
    horizons can drift far from any plausible price.
    """
    window = np.asarray(last_window, dtype=np.float64).ravel()
    lookback = getattr(net, "lookback", window.size)
    if window.size != lookback:
        raise ShapeError(f"last_window has {window.size} values, expected {lookback}")
    if days < 0:
        raise ValueError("days must be non-negative")
    out = []
    for _ in range(days):
        nxt = float(np.asarray(net.predict(window[None]))[0])
        out.append(float(scaler.inverse_transform(nxt)))
        window = np.append(window[1:], nxt)
    return out


# -- persistence ----------------------------------------------------------------

def _fmt(x: float) -> str:
    return repr(float(x))


def dumps_model(net: LstmNetwork, scaler: ScalerParams) -> str:
    lines = [
        f"{FORMAT_HEADER} v{FORMAT_VERSION}",
        f"input_dim {net.layer1.input_dim}",
        f"hidden {net.layer1.hidden_dim}",
        f"lookback {net.lookback}",
        f"dropout_rate {_fmt(net.dropout_rate)}",
        f"seed {net.seed}",
        f"scaler_min {_fmt(scaler.min)}",
        f"scaler_max {_fmt(scaler.max)}",
    ]
    for name, arr in net.parameters().items():
        lines.append(f"param {name} {' '.join(str(s) for s in arr.shape)}")
        lines.append(" ".join(_fmt(v) for v in arr.ravel()))
    body = "\n".join(lines) + "\n"
    return body + f"crc32 {zlib.crc32(body.encode('utf-8')):08x}\n"


def loads_model(text: str) -> tuple[LstmNetwork, ScalerParams]:
    first, _, _ = text.partition("\n")
    parts = first.split()
    if len(parts) != 2 or parts[0] != FORMAT_HEADER or not parts[1].startswith("v"):
        raise FormatVersionError(f"not a fincast model file (header {first[:40]!r})")
    if parts[1] != f"v{FORMAT_VERSION}":
        raise FormatVersionError(f"unsupported model format {parts[1]}; this build reads v{FORMAT_VERSION}")

    body, sep, trailer = text.rpartition("crc32 ")
    if not sep or not body.endswith("\n"):
        raise ChecksumError("missing checksum trailer (file truncated?)")
    try:
        expected = int(trailer.strip(), 16)
    except ValueError:
        raise ChecksumError("unreadable checksum trailer") from None
    if zlib.crc32(body.encode("utf-8")) != expected or trailer.strip() != f"{expected:08x}":
        raise ChecksumError("checksum mismatch (file corrupted or edited)")

    lines = body.splitlines()[1:]
    meta, arrays = {}, {}
    it = iter(lines)
    try:
        for line in it:
            key, _, rest = line.partition(" ")
            if key == "param":
                name, *shape = rest.split()
                shape = tuple(int(s) for s in shape)
                vals = np.array([float(v) for v in next(it).split()], dtype=np.float64)
                arrays[name] = vals.reshape(shape)
            else:
                meta[key] = rest
        net = LstmNetwork(
            LstmLayerWeights(arrays["layer1.W"], arrays["layer1.U"], arrays["layer1.b"]),
            LstmLayerWeights(arrays["layer2.W"], arrays["layer2.U"], arrays["layer2.b"]),
            arrays["dense.w"], arrays["dense.b"],
            dropout_rate=float(meta["dropout_rate"]), seed=int(meta["seed"]),
            lookback=int(meta["lookback"]))
        scaler = ScalerParams(float(meta["scaler_min"]), float(meta["scaler_max"]))
    except (KeyError, ValueError, StopIteration) as exc:
        raise FormatVersionError(f"malformed model body: {exc}") from exc
    if net.layer1.input_dim != int(meta["input_dim"]) or net.layer1.hidden_dim != int(meta["hidden"]):
        raise FormatVersionError("declared shape disagrees with parameter blocks")
    return net, scaler


def save_model(net: LstmNetwork, scaler: ScalerParams, path) -> None:
    try:
        Path(path).write_text(dumps_model(net, scaler), encoding="utf-8", newline="\n")
    except OSError as exc:
        raise ModelIOError(f"cannot write model to {path}: {exc}") from exc


def load_model(path) -> tuple[LstmNetwork, ScalerParams]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise ModelIOError(f"cannot read model from {path}: {exc}") from exc
    return loads_model(text)
