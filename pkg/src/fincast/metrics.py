"""Regression error metrics: MAE, MSE, RMSE and R^2."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np

from .errors import ConstantActual, LengthMismatch

# Reference values printed for AAPL/GOOGL in the original study; informative only.
REFERENCE_AAPL = {"mae": 4.33, "mse": 30.40, "rmse": 5.51, "r2": 0.98}
REFERENCE_GOOGL = {"mae": 4.33, "mse": 31.26, "rmse": 5.59, "r2": 0.96}
REFERENCE_INFLATION = {"mae": 0.8, "rmse": 1.2}


@dataclass(frozen=True)
class MetricsReport:
    mae: float
    mse: float
    rmse: float
    r2: float
    n: int

    def to_dict(self) -> dict:
        return asdict(self)


def evaluate(actual: Sequence[float], predicted: Sequence[float]) -> MetricsReport:
    a = np.asarray(actual, dtype=np.float64).ravel()
    p = np.asarray(predicted, dtype=np.float64).ravel()
    if a.size != p.size:
        raise LengthMismatch(f"{a.size} actual vs {p.size} predicted values")
    if a.size == 0:
        raise LengthMismatch("no samples to evaluate")
    err = a - p
    mae = float(np.mean(np.abs(err)))
    mse = float(np.mean(err * err))
    ss_res = float(np.sum(err * err))
    centered = a - a.mean()
    ss_tot = float(np.sum(centered * centered))
    if a.size < 2 or ss_tot == 0.0:
        raise ConstantActual("R^2 is undefined for constant (or single) actual values")
    return MetricsReport(mae=mae, mse=mse, rmse=math.sqrt(mse), r2=1.0 - ss_res / ss_tot, n=int(a.size))
