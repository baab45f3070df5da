"""
Annual inflation with an autoregressive model
=============================================

Fit an ARIMA(15, 1, 0) to the bundled India consumer-price inflation
fixture and extend it ten years ahead. Everything runs offline; pass
``--live`` to pull the same indicator from the World Bank API instead.
"""

# %%
# Load the series
# ---------------
# The fixture is a saved World Bank response. Null years are dropped and the
# remaining points come back sorted by year.

import sys
from pathlib import Path

from fincast import arima, ingest, metrics, plot

HERE = Path(__file__).resolve().parent
FIXTURES = HERE.parent / "fixtures"
OUT = HERE / "_output"
OUT.mkdir(exist_ok=True)

if "--live" in sys.argv:
    raw = ingest.fetch_worldbank_series("IN")
else:
    raw = (FIXTURES / "in.json").read_bytes()
history = ingest.resample_annual(ingest.parse_worldbank_json(raw))
print(f"{len(history)} years, {history.dates[0].year} to {history.dates[-1].year}")
print("1974:", dict((d.year, v) for d, v in history.points)[1974])

# %%
# Fit
# ---
# One differencing pass, fifteen lags, no moving-average part. The solver is
# a pivoted QR factorisation, so a rank-deficient design is reported rather
# than silently regularised.

order = arima.ArimaOrder(15, 1, 0)
model = arima.fit(history, order)
print("intercept", round(model.intercept, 4))
print("first three lags", [round(c, 4) for c in model.coefficients[:3]])
for w in model.warnings:
    print("warning:", w)

# %%
# In-sample one-step fit quality. These are fitted values, not a held-out
# score, so treat them as a sanity check only.

actual, fitted = arima.one_step_fitted(model, history)
report = metrics.evaluate(actual, fitted)
print(f"in-sample MAE {report.mae:.2f}  RMSE {report.rmse:.2f}")

# %%
# Forecast and chart
# ------------------
# History is drawn solid blue, the forecast dashed red.

fc = arima.forecast(model, history, 10)
for d, v in zip(fc.horizon_dates, fc.values):
    print(d.year, f"{v:6.2f}")

svg = plot.history_forecast_plot(history, fc, title="India: consumer price inflation, 10-year forecast")
(OUT / "inflation.svg").write_text(svg)
print("chart written to", OUT / "inflation.svg")
