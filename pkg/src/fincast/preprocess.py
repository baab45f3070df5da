"""Scaling, differencing, windowing and chronological splitting."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DegenerateRange, InsufficientData


@dataclass(frozen=True)
class ScalerParams:
    """Min/max pair behind 0-1 normalization."""

    min: float
    max: float

    def __post_init__(self):
        if not self.max > self.min:
            raise DegenerateRange(f"max ({self.max}) must exceed min ({self.min})")

    def transform(self, x):
        if np.isscalar(x):
            return (x - self.min) / (self.max - self.min)
        return (np.asarray(x, dtype=np.float64) - self.min) / (self.max - self.min)

    def inverse_transform(self, y):
        if np.isscalar(y):
            return y * (self.max - self.min) + self.min
        return np.asarray(y, dtype=np.float64) * (self.max - self.min) + self.min


def fit_scaler(values: Sequence[float]) -> ScalerParams:
    arr = np.asarray(values, dtype=np.float64)
    if arr.size == 0:
        raise InsufficientData("cannot fit a scaler on no values")
    if not np.all(np.isfinite(arr)):
        raise ValueError("scaler input contains non-finite values")
    lo, hi = float(arr.min()), float(arr.max())
    if lo == hi:
        raise DegenerateRange(f"constant input ({lo}); scaling undefined")
    return ScalerParams(lo, hi)


def transform(p: ScalerParams, x):
    return p.transform(x)


def inverse_transform(p: ScalerParams, y):
    return p.inverse_transform(y)


def difference(values: Sequence[float], d: int) -> np.ndarray:
    """Apply the first difference ``d`` times; output is ``d`` shorter."""
    arr = np.asarray(values, dtype=np.float64)
    if d < 0:
        raise ValueError("d must be non-negative")
    if arr.size <= d:
        raise InsufficientData(f"need more than {d} values to difference {d} times")
    for _ in range(d):
        arr = arr[1:] - arr[:-1]
    return arr


def undifference(last_originals: Sequence[float], diffs: Sequence[float], d: int) -> np.ndarray:
    """Integrate ``d``-times differenced values back to the original scale.

    ``last_originals`` are the final ``d`` original-scale observations that
    immediately precede the first element of ``diffs``.
    """
    last = np.asarray(last_originals, dtype=np.float64)
    out = np.asarray(diffs, dtype=np.float64)
    if d < 0:
        raise ValueError("d must be non-negative")
    if last.size < d:
        raise InsufficientData(f"need {d} trailing originals, got {last.size}")
    if d == 0 or out.size == 0:
        return out.copy()
    last = last[last.size - d:]
    for level in range(d - 1, -1, -1):
        # last value of the level-th difference of the tail
        anchor = difference(last, level)[-1] if level else last[-1]
        out = anchor + np.cumsum(out)
    return out


@dataclass(frozen=True)
class WindowedDataset:
    inputs: np.ndarray   # (n, lookback)
    targets: np.ndarray  # (n,)
    lookback: int

    def __post_init__(self):
        if self.inputs.ndim != 2 or self.inputs.shape[1] != self.lookback:
            raise ValueError(f"inputs must have shape (n, {self.lookback})")
        if self.inputs.shape[0] != self.targets.shape[0]:
            raise ValueError("inputs and targets differ in length")

    def __len__(self):
        return self.targets.shape[0]


@dataclass(frozen=True)
class SplitDataset:
    train: WindowedDataset
    test: WindowedDataset
    split_ratio: float


def make_windows(values: Sequence[float], lookback: int) -> WindowedDataset:
    """Sliding windows of ``lookback`` inputs, each followed by its next-value target."""
    arr = np.asarray(values, dtype=np.float64)
    if lookback < 1:
        raise ValueError("lookback must be positive")
    if arr.size <= lookback:
        raise InsufficientData(f"{arr.size} values cannot fill a {lookback}-step window plus target")
    n = arr.size - lookback
    inputs = np.lib.stride_tricks.sliding_window_view(arr, lookback)[:n].copy()
    return WindowedDataset(inputs, arr[lookback:].copy(), lookback)


def chrono_split(ds: WindowedDataset, ratio: float) -> SplitDataset:
    if not 0 < ratio < 1:
        raise ValueError("ratio must lie strictly between 0 and 1")
    n = len(ds)
    # tolerance keeps e.g. 0.29 * 100 from flooring to 28
    cut = math.floor(ratio * n + 1e-9)
    if cut == 0 or cut == n:
        raise InsufficientData(f"{n} windows at ratio {ratio} leave an empty partition")
    return SplitDataset(
        WindowedDataset(ds.inputs[:cut], ds.targets[:cut], ds.lookback),
        WindowedDataset(ds.inputs[cut:], ds.targets[cut:], ds.lookback),
        ratio,
    )
