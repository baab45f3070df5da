from datetime import date

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fincast import arima, ingest
from fincast.arima import ArimaOrder
from fincast.errors import InsufficientData, SingularDesign
from oracles import ar_generate, bruteforce_arima_d1_forecast, integrated_ar_levels


def annual(values, start=1960):
    return ingest.DatedSeries.from_pairs([date(start + i, 1, 1) for i in range(len(values))], values)


def test_order_validation():
    with pytest.raises(ValueError):
        ArimaOrder(15, 1, 1)
    with pytest.raises(ValueError):
        ArimaOrder(0, 1, 0)
    with pytest.raises(ValueError):
        ArimaOrder(1, 3, 0)
    assert ArimaOrder.parse("15,1,0") == ArimaOrder(15, 1, 0)


def test_noiseless_ar1_recovery():
    xs = ar_generate(1.0, [0.5], [0.0], 30)
    m = arima.fit(annual(xs), ArimaOrder(1, 0, 0))
    assert m.intercept == pytest.approx(1.0, abs=1e-8)
    assert m.coefficients[0] == pytest.approx(0.5, abs=1e-8)


def test_constant_series_is_singular():
    with pytest.raises(SingularDesign):
        arima.fit(annual([3.0] * 30), ArimaOrder(1, 1, 0))


def test_insufficient_rows():
    with pytest.raises(InsufficientData):
        arima.fit(annual(np.arange(10.0)), ArimaOrder(5, 1, 0))


def test_india_fixture_fits_fifteen_lags(fixtures_dir):
    s = ingest.resample_annual(ingest.parse_worldbank_json((fixtures_dir / "in.json").read_bytes()))
    m = arima.fit(s, ArimaOrder(15, 1, 0))
    assert len(m.coefficients) == 15
    assert m.in_sample_residual_variance > 0
    fc = arima.forecast(m, s, 10)
    assert fc.horizon_dates == tuple(date(2024 + k, 1, 1) for k in range(10))
    assert all(np.isfinite(fc.values))


def test_few_rows_warning():
    rng = np.random.default_rng(0)
    s = annual(np.cumsum(rng.normal(size=40)))
    m = arima.fit(s, ArimaOrder(15, 1, 0))
    assert m.warnings and "3p" in m.warnings[0]


def test_forecast_fixed_point():
    m = arima.ArModel(ArimaOrder(1, 0, 0), 1.0, (0.5,), 0.0)
    fc = arima.forecast(m, annual([5.0, 2.0]), 2)
    assert fc.values == (2.0, 2.0)


def test_zero_drift_random_walk_repeats_last_value():
    m = arima.ArModel(ArimaOrder(2, 1, 0), 0.0, (0.0, 0.0), 0.0)
    fc = arima.forecast(m, annual([1.0, 4.0, 2.0, 7.5]), 5)
    assert fc.values == (7.5,) * 5


def test_forecast_needs_seed_history():
    m = arima.ArModel(ArimaOrder(3, 1, 0), 0.0, (0.1, 0.1, 0.1), 0.0)
    with pytest.raises(InsufficientData):
        arima.forecast(m, annual([1.0, 2.0, 3.0]), 1)


def test_d1_pipeline_matches_bruteforce_oracle():
    c, phis = 0.3, [1.2, -0.6]
    levels = integrated_ar_levels(50.0, c, phis, [2.0, -1.5], 60)
    s = annual(levels)
    m = arima.fit(s, ArimaOrder(2, 1, 0))
    fc = arima.forecast(m, s, 10)
    expected = bruteforce_arima_d1_forecast(levels, c, phis, 10)
    assert np.max(np.abs(np.array(fc.values) - expected)) < 1e-9


def test_d2_forecast_matches_direct_integration():
    # levels with second differences following AR(1); integrate twice by hand
    sec = ar_generate(0.1, [0.5], [1.0], 40)
    first = [0.0]
    for v in sec:
        first.append(first[-1] + v)
    levels = [10.0]
    for v in first:
        levels.append(levels[-1] + v)
    s = annual(levels)
    m = arima.fit(s, ArimaOrder(1, 2, 0))
    fc = arima.forecast(m, s, 5)
    sec_ext = ar_generate(0.1, [0.5], sec, len(sec) + 5)[len(sec):]
    f, y, out = first[-1], levels[-1], []
    for v in sec_ext:
        f += v
        y += f
        out.append(y)
    assert np.allclose(fc.values, out, atol=1e-8)


def test_one_step_fitted_residuals_line_up():
    rng = np.random.default_rng(5)
    s = annual(np.cumsum(rng.normal(size=80)) + 50)
    m = arima.fit(s, ArimaOrder(3, 1, 0))
    actual, fitted = arima.one_step_fitted(m, s)
    assert np.allclose(actual - fitted, m.residuals)
    assert len(actual) == 80 - 4


def test_lstsq_qr_against_numpy():
    rng = np.random.default_rng(2)
    X = np.column_stack([np.ones(50), rng.normal(size=(50, 4))])
    y = rng.normal(size=50)
    assert np.allclose(arima.lstsq_qr(X, y), np.linalg.lstsq(X, y, rcond=None)[0], atol=1e-12)


def test_lstsq_qr_collinear_columns():
    x = np.arange(10.0)
    with pytest.raises(SingularDesign):
        arima.lstsq_qr(np.column_stack([np.ones(10), x, 2 * x]), x)


def test_determinism(fixtures_dir):
    s = ingest.resample_annual(ingest.parse_worldbank_json((fixtures_dir / "us.json").read_bytes()))
    a = arima.fit(s, ArimaOrder(15, 1, 0))
    b = arima.fit(s, ArimaOrder(15, 1, 0))
    assert a.coefficients == b.coefficients and a.intercept == b.intercept


def _stationary_phis(p, draw):
    # build from roots outside the unit circle
    roots = [draw(st.floats(1.3, 3.0)) * draw(st.sampled_from([-1, 1])) for _ in range(p)]
    poly = np.poly1d([1.0])
    for r in roots:
        poly *= np.poly1d([-1.0 / r, 1.0])  # (1 - z/r)
    coeffs = poly.coeffs[::-1]  # ascending: 1, -phi1, -phi2, ...
    return [-float(c) for c in coeffs[1:]]


@st.composite
def ar_process(draw):
    p = draw(st.integers(1, 3))
    phis = _stationary_phis(p, draw)
    c = draw(st.floats(-2, 2))
    mean = c / (1.0 - sum(phis))
    # initial lags away from the process mean so the regressors vary
    init = [mean + draw(st.floats(0.5, 5)) * draw(st.sampled_from([-1, 1])) for _ in range(p)]
    return c, phis, init


@settings(max_examples=60, deadline=None)
@given(ar_process())
def test_exact_recovery_property(proc):
    c, phis, init = proc
    p = len(phis)
    xs = ar_generate(c, phis, init, 40)
    m = arima.fit(annual(xs), ArimaOrder(p, 0, 0))
    assert m.intercept == pytest.approx(c, abs=1e-6)
    assert np.allclose(m.coefficients, phis, atol=1e-6)
    if sum(abs(v) for v in m.coefficients) < 1:
        assert all(np.isfinite(arima.forecast(m, annual(xs), 50).values))
