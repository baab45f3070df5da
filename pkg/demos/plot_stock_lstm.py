"""
Next-day close prices with a two-layer LSTM
===========================================

Train the numpy LSTM on a synthetic trending price series, score the held-out
tail in price units and roll the model forward five business days.
"""

# %%
# Data
# ----
# A sine wave on a slow linear trend with unit Gaussian noise. Unlike a
# random walk it has structure a sequence model can learn, which makes it a
# useful yardstick.

import time
from pathlib import Path

import numpy as np

from fincast import lstm, plot, preprocess as pp

OUT = Path(__file__).resolve().parent / "_output"
OUT.mkdir(exist_ok=True)

t = np.arange(2000)
prices = 100 + 0.01 * t + 10 * np.sin(2 * np.pi * t / 50) + np.random.default_rng(7).normal(0, 1, t.size)

# %%
# Scale to [0, 1], cut 60-step windows and split chronologically 80/20.

scaler = pp.fit_scaler(prices)
windows = pp.make_windows(scaler.transform(prices), lookback=60)
split = pp.chrono_split(windows, 0.8)
print(f"{len(split.train)} training windows, {len(split.test)} test windows")

# %%
# Model
# -----
# Two LSTM layers of 50 units with dropout 0.2, then one linear output.

net = lstm.init_network(seed=42)
print("parameters per block:", net.layer1.param_count(), net.layer2.param_count(),
      net.dense_w.size + net.dense_b.size, "total", lstm.param_count(net))

# %%
# Ten epochs of Adam at batch size 32. Losses are mean squared error on the
# scaled targets.

started = time.perf_counter()
report = lstm.train(net, split, lstm.TrainConfig(shuffle_seed=42),
                    progress=lambda e, loss: print(f"epoch {e:2d}  loss {loss:.5f}"))
print(f"trained in {time.perf_counter() - started:.1f}s")

# %%
# Evaluate
# --------

scores = lstm.evaluate(net, split, scaler)
print(f"MAE {scores.mae:.2f}  MSE {scores.mse:.2f}  RMSE {scores.rmse:.2f}  R2 {scores.r2:.4f}")

actual = scaler.inverse_transform(split.test.targets)
predicted = scaler.inverse_transform(net.predict(split.test.inputs))
(OUT / "actual_vs_predicted.svg").write_text(plot.actual_vs_predicted_plot(actual, predicted))

# %%
# Roll forward
# ------------
# Each prediction is appended to the window and the oldest value dropped.
# Errors compound, so the later days deserve less trust.

future = lstm.future_forecast(net, scaler, scaler.transform(prices[-60:]), days=5)
print("Predicted Future Stock Prices:")
for k, p in enumerate(future, start=1):
    print(f"Day {k}: ${p:.2f}")

# %%
# The trained model round-trips through a checksummed text file.

path = OUT / "synthetic.fincast"
lstm.save_model(net, scaler, path)
again, _ = lstm.load_model(path)
print("reloaded weights identical:", again.checksum() == net.checksum())
