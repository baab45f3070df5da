"""ARIMA(p, d, 0) by conditional least squares on the differenced series."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from datetime import date

import numpy as np

from .errors import InsufficientData, SingularDesign
from .ingest import DatedSeries
from .preprocess import difference, undifference

log = logging.getLogger(__name__)

PIVOT_TOLERANCE = 1e-10


@dataclass(frozen=True)
class ArimaOrder:
    p: int = 15
    d: int = 1
    q: int = 0

    def __post_init__(self):
        if self.q != 0:
            raise ValueError("moving-average terms are not supported (q must be 0)")
        if self.p < 1:
            raise ValueError("p must be at least 1")
        if not 0 <= self.d <= 2:
            raise ValueError("d must be 0, 1 or 2")

    @classmethod
    def parse(cls, text: str) -> "ArimaOrder":
        """Build from ``"p,d,q"``."""
        parts = [int(x) for x in text.split(",")]
        if len(parts) != 3:
            raise ValueError(f"order must be p,d,q, got {text!r}")
        return cls(*parts)


@dataclass(frozen=True)
class ArModel:
    order: ArimaOrder
    intercept: float
    coefficients: tuple[float, ...]  # lag-1 first
    in_sample_residual_variance: float
    residuals: tuple[float, ...] = ()
    warnings: tuple[str, ...] = field(default=())

    def __post_init__(self):
        if len(self.coefficients) != self.order.p:
            raise ValueError("coefficient count does not match order.p")


@dataclass(frozen=True)
class ForecastResult:
    values: tuple[float, ...]
    horizon_dates: tuple[date, ...]

    def __post_init__(self):
        if len(self.values) != len(self.horizon_dates):
            raise ValueError("values and dates differ in length")


def lagged_design(x: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray]:
    """Design matrix ``[1, x_{t-1}, ..., x_{t-p}]`` and response ``x_t`` for t = p..n-1."""
    n = x.size
    rows = n - p
    X = np.empty((rows, p + 1))
    X[:, 0] = 1.0
    for i in range(1, p + 1):
        X[:, i] = x[p - i:n - i]
    return X, x[p:].copy()


def lstsq_qr(X: np.ndarray, y: np.ndarray, tol: float = PIVOT_TOLERANCE) -> np.ndarray:
    """Least squares via Householder QR with column pivoting.

    Raises SingularDesign when a pivot on R's diagonal falls below ``tol``
    times the largest one.
    """
    A = np.array(X, dtype=np.float64)
    b = np.array(y, dtype=np.float64)
    m, n = A.shape
    if m < n:
        raise SingularDesign(f"{m} rows cannot determine {n} unknowns")
    perm = np.arange(n)
    norms = np.einsum("ij,ij->j", A, A)
    r00 = None
    for k in range(n):
        j = k + int(np.argmax(norms[k:]))
        if j != k:
            A[:, [k, j]] = A[:, [j, k]]
            norms[[k, j]] = norms[[j, k]]
            perm[[k, j]] = perm[[j, k]]
        col = A[k:, k]
        alpha = np.linalg.norm(col)
        if r00 is None:
            r00 = alpha
        if r00 == 0.0 or alpha <= tol * r00:
            raise SingularDesign(
                f"design matrix is rank deficient (pivot {alpha:.3g} vs largest {r00:.3g})")
        v = col.copy()
        v[0] += np.copysign(alpha, col[0])
        v /= np.linalg.norm(v)
        A[k:, k:] -= 2.0 * np.outer(v, v @ A[k:, k:])
        b[k:] -= 2.0 * v * (v @ b[k:])
        # recompute rather than downdate; the matrices here are tiny
        norms[k + 1:] = np.einsum("ij,ij->j", A[k + 1:, k + 1:], A[k + 1:, k + 1:])
    R = np.triu(A[:n, :n])
    z = np.empty(n)
    for i in range(n - 1, -1, -1):
        z[i] = (b[i] - R[i, i + 1:] @ z[i + 1:]) / R[i, i]
    beta = np.empty(n)
    beta[perm] = z
    return beta


def fit(series: DatedSeries, order: ArimaOrder) -> ArModel:
    """Estimate intercept and AR coefficients on the ``d``-times differenced values."""
    values = series.values
    p, d = order.p, order.d
    need = 2 * p + d + 1
    if values.size < need:
        raise InsufficientData(f"ARIMA({p},{d},0) needs at least {need} observations, got {values.size}")

    x = difference(values, d)
    X, y = lagged_design(x, p)
    beta = lstsq_qr(X, y)
    resid = y - X @ beta
    dof = X.shape[0] - p - 1
    sigma2 = float(resid @ resid / dof) if dof > 0 else float("nan")

    notes = []
    if X.shape[0] < 3 * p:
        notes.append(f"only {X.shape[0]} regression rows for {p} lags (< 3p); estimates may be unstable")
        log.warning(notes[-1])
    return ArModel(order, float(beta[0]), tuple(float(c) for c in beta[1:]), sigma2,
                   tuple(float(r) for r in resid), tuple(notes))


def forecast(model: ArModel, series: DatedSeries, horizon: int) -> ForecastResult:
    """Recursive ``horizon``-step forecast, integrated back to the original scale."""
    if horizon < 1:
        raise ValueError("horizon must be at least 1")
    p, d = model.order.p, model.order.d
    values = series.values
    if values.size < p + d:
        raise InsufficientData(f"need {p + d} observations to seed the forecast, got {values.size}")

    hist = list(difference(values, d)[-p:]) if d else list(values[-p:])
    phi = model.coefficients
    preds = []
    for _ in range(horizon):
        nxt = model.intercept
        for i in range(1, p + 1):
            nxt += phi[i - 1] * hist[-i]
        hist.append(nxt)
        preds.append(nxt)

    out = undifference(values[values.size - d:], preds, d) if d else np.array(preds)
    last = series.dates[-1]
    dates = tuple(date(last.year + k, 1, 1) for k in range(1, horizon + 1))
    return ForecastResult(tuple(float(v) for v in out), dates)


def one_step_fitted(model: ArModel, series: DatedSeries) -> tuple[np.ndarray, np.ndarray]:
    """In-sample one-step-ahead predictions on the original scale.

    Returns ``(actual, predicted)`` aligned over every observation that has a
    full lag history.
    """
    values = series.values
    p, d = model.order.p, model.order.d
    x = difference(values, d)
    X, y = lagged_design(x, p)
    beta = np.array((model.intercept,) + model.coefficients)
    resid = y - X @ beta
    actual = values[p + d:]
    # a one-step error on the top differenced level carries through unchanged
    return actual, actual - resid
