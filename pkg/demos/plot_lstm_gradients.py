"""
Checking backpropagation through time
=====================================

Compare the analytic LSTM gradients with central finite differences on a
handful of tiny networks, with and without dropout.
"""

# %%
# A tiny network keeps the number of finite-difference evaluations small.
# Weights are redrawn from a wide normal so that gates are not saturated or
# dead.

import numpy as np

from fincast import lstm


def finite_difference(loss, arr, idx, eps=1e-5):
    old = arr[idx]
    arr[idx] = old + eps
    up = loss()
    arr[idx] = old - eps
    down = loss()
    arr[idx] = old
    return (up - down) / (2 * eps)


# %%
# Dropout masks are drawn once and held fixed, so the loss is a smooth
# function of the weights and finite differences are meaningful.

for seed in range(5):
    rng = np.random.default_rng(seed)
    net = lstm.init_network(seed, hidden=3, lookback=4, dropout_rate=0.2 if seed % 2 else 0.0)
    for p in net.parameters().values():
        p[...] = rng.normal(0, 0.6, p.shape)
    X, y = rng.random((2, 4)), rng.random(2)
    masks = lstm.sample_masks(net, 2, rng) if net.dropout_rate else None
    _, grads = lstm.loss_and_gradients(net, X, y, masks=masks)

    def loss():
        pred, _ = lstm.forward_batch(net, X, train=True, masks=masks)
        return float(np.mean((pred - y) ** 2))

    worst = 0.0
    for name, arr in net.parameters().items():
        for idx in np.ndindex(arr.shape):
            fd = finite_difference(loss, arr, idx)
            worst = max(worst, abs(grads[name][idx] - fd) / max(abs(fd), abs(grads[name][idx]), 1e-6))
    print(f"seed {seed}  dropout {net.dropout_rate:.1f}  params {lstm.param_count(net):3d}  "
          f"max relative error {worst:.2e}")

# %%
# Relative errors of order 1e-7 are typical. The floor of 1e-6 in the
# denominator stops near-zero gradients from inflating the ratio with pure
# round-off.
