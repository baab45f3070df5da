import numpy as np
import pytest

from fincast import lstm, preprocess as pp
from fincast.errors import ChecksumError, FormatVersionError, InsufficientData, ModelIOError, ShapeError
from oracles import central_difference, relative_error, scalar_lstm_prediction


def randomized_tiny_net(seed, dropout_rate=0.3):
    rng = np.random.default_rng(seed)
    hidden = int(rng.integers(1, 5))
    lookback = int(rng.integers(1, 6))
    net = lstm.init_network(seed, hidden=hidden, dropout_rate=dropout_rate, lookback=lookback)
    for p in net.parameters().values():
        p[...] = rng.normal(0.0, 0.6, p.shape)
    return net, rng


def max_gradient_error(net, rng, batch):
    X = rng.random((batch, net.lookback))
    y = rng.random(batch)
    masks = lstm.sample_masks(net, batch, rng) if net.dropout_rate else None
    _, grads = lstm.loss_and_gradients(net, X, y, masks=masks)

    def loss():
        pred, _ = lstm.forward_batch(net, X, train=True, masks=masks)
        return float(np.mean((pred - y) ** 2))

    worst = 0.0
    for name, arr in net.parameters().items():
        for idx in np.ndindex(arr.shape):
            fd = central_difference(loss, arr, idx)
            worst = max(worst, relative_error(grads[name][idx], fd))
    return worst


# -- shapes and counts ----------------------------------------------------------

def test_default_param_counts():
    net = lstm.init_network(42)
    assert net.layer1.param_count() == 10_400
    assert net.layer2.param_count() == 20_200
    assert net.dense_w.size + net.dense_b.size == 51
    assert lstm.param_count(net) == 30_651


@pytest.mark.parametrize("n_in, h", [(1, 1), (1, 50), (50, 50), (3, 7), (16, 2)])
def test_layer_count_formula(n_in, h):
    assert lstm.layer_param_count(n_in, h) == 4 * ((n_in + h) * h + h)
    net = lstm.init_network(0, input_dim=n_in, hidden=h, lookback=3)
    assert net.layer1.param_count() == lstm.layer_param_count(n_in, h)


def test_tiny_layer_count():
    assert lstm.layer_param_count(1, 1) == 12


def test_init_is_deterministic_and_seeded():
    a, b = lstm.init_network(42), lstm.init_network(42)
    assert a.checksum() == b.checksum()
    assert lstm.init_network(43).checksum() != a.checksum()


def test_init_biases_and_limits():
    net = lstm.init_network(7, hidden=5)
    _, _, b_forget = net.layer1.gate("forget")
    assert np.all(b_forget == 1.0)
    for g in ("input", "cell", "output"):
        assert np.all(net.layer1.gate(g)[2] == 0.0)
    limit = np.sqrt(6.0 / (1 + 20))
    assert np.abs(net.layer1.W).max() <= limit
    assert np.abs(net.layer2.U).max() <= np.sqrt(6.0 / (5 + 20))


def test_gate_views_alias_storage():
    net = lstm.init_network(1, hidden=3, lookback=2)
    W_o, _, _ = net.layer1.gate("output")
    W_o[...] = 9.0
    assert np.all(net.layer1.W[9:12] == 9.0)


# -- forward --------------------------------------------------------------------

def test_zero_network_predicts_zero():
    net = lstm.init_network(0, hidden=4, lookback=6)
    for p in net.parameters().values():
        p[...] = 0.0
    y, _ = lstm.forward(net, np.linspace(-1, 1, 6))
    assert y == 0.0


def test_one_unit_reduction_matches_hand_recurrence():
    w = lstm.LstmLayerWeights(np.full((4, 1), 0.5), np.full((4, 1), 0.5), np.zeros(4))
    H, _ = lstm.layer_forward(w, np.array([[[1.0]]]))
    pred = 0.5 * H[0, -1, 0]
    expected, trace = scalar_lstm_prediction([1.0], 0.5, 0.5, 0.0, 0.5, 0.0)
    assert trace[0]["i"] == pytest.approx(0.622459, abs=1e-6)
    assert trace[0]["g"] == pytest.approx(0.462117, abs=1e-6)
    # recomputed independently
    assert trace[0]["c"] == pytest.approx(0.287649, abs=1e-6)
    assert trace[0]["h"] == pytest.approx(0.174270, abs=1e-6)
    assert pred == pytest.approx(expected, abs=1e-15)
    assert pred == pytest.approx(0.087135, abs=1e-6)


def test_one_unit_multi_step_matches_oracle():
    w = lstm.LstmLayerWeights(np.full((4, 1), 0.3), np.full((4, 1), -0.7), np.full(4, 0.1))
    xs = [0.2, -1.0, 0.5, 0.9]
    H, _ = lstm.layer_forward(w, np.array(xs).reshape(1, 4, 1))
    expected, _ = scalar_lstm_prediction(xs, 0.3, -0.7, 0.1, 1.0, 0.0)
    assert H[0, -1, 0] == pytest.approx(expected, abs=1e-14)


def test_inference_ignores_dropout():
    net = lstm.init_network(3, hidden=6, dropout_rate=0.5, lookback=8)
    plain = net.copy()
    plain.dropout_rate = 0.0
    window = np.random.default_rng(0).random(8)
    y_infer, _ = lstm.forward(net, window, mode="infer")
    y_train_nodrop, _ = lstm.forward(plain, window, mode="train")
    assert y_infer == y_train_nodrop


def test_shape_errors():
    net = lstm.init_network(0, hidden=2, lookback=5)
    with pytest.raises(ShapeError):
        lstm.forward(net, np.zeros(4))
    with pytest.raises(ShapeError):
        lstm.predict_series(net, np.zeros((3, 6)))
    with pytest.raises(ShapeError):
        lstm.loss_and_gradients(net, np.zeros((3, 5)), np.zeros(2), train=False)


def test_dropout_expectation():
    net = lstm.init_network(0, hidden=3, lookback=2, dropout_rate=0.2)
    rng = np.random.default_rng(123)
    act = np.array([[0.3, -0.8, 0.55], [1.2, 0.05, -0.4]])
    n = 40_000
    m1, m2 = lstm.sample_masks(net, n, rng)
    assert np.allclose((act[None] * m1).mean(axis=0), act, rtol=0.01)
    assert np.allclose((act[1][None] * m2).mean(axis=0), act[1], rtol=0.01)


# -- gradients ------------------------------------------------------------------

def test_perfect_prediction_has_zero_loss_and_gradients():
    net = lstm.init_network(5, hidden=3, lookback=4, dropout_rate=0.0)
    X = np.random.default_rng(1).random((3, 4))
    y = lstm.predict_series(net, X)
    loss, grads = lstm.loss_and_gradients(net, X, y, train=False)
    assert loss == 0.0
    assert all(np.all(g == 0.0) for g in grads.values())


def test_doubling_residual_quadruples_loss():
    net = lstm.init_network(5, hidden=3, lookback=4, dropout_rate=0.0)
    X = np.random.default_rng(1).random((3, 4))
    y0 = lstm.predict_series(net, X)
    r = np.array([0.1, -0.2, 0.05])
    l1, _ = lstm.loss_and_gradients(net, X, y0 + r, train=False)
    l2, _ = lstm.loss_and_gradients(net, X, y0 + 2 * r, train=False)
    assert l2 == pytest.approx(4 * l1, rel=1e-12)


def test_gradient_check_spec_example():
    net = lstm.init_network(11, hidden=3, lookback=4, dropout_rate=0.0)
    rng = np.random.default_rng(11)
    assert max_gradient_error(net, rng, batch=2) < 1e-4


@pytest.mark.parametrize("seed", range(6))
def test_gradient_check_random_with_dropout(seed):
    net, rng = randomized_tiny_net(seed)
    assert max_gradient_error(net, rng, batch=int(rng.integers(1, 4))) < 1e-4


# -- Adam -----------------------------------------------------------------------

def test_adam_zero_gradient_is_noop():
    p = {"w": np.array([1.0, -2.0])}
    state = lstm.AdamState.for_params(p)
    lstm.adam_step(state, p, {"w": np.zeros(2)}, lstm.TrainConfig())
    assert p["w"].tolist() == [1.0, -2.0]


def test_adam_first_step():
    cfg = lstm.TrainConfig(learning_rate=0.01)
    p = {"w": np.array([0.0])}
    lstm.adam_step(lstm.AdamState.for_params(p), p, {"w": np.array([1.0])}, cfg)
    # m_hat = v_hat = 1 after bias correction
    assert p["w"][0] == pytest.approx(-0.01 / (1.0 + 1e-8), rel=1e-12)


def test_adam_matches_textbook_recursion():
    cfg = lstm.TrainConfig(learning_rate=0.05)
    p = {"w": np.array([0.3])}
    state = lstm.AdamState.for_params(p)
    w, m, v = 0.3, 0.0, 0.0
    for t, g in enumerate([0.5, -1.0, 2.0, 0.1], start=1):
        lstm.adam_step(state, p, {"w": np.array([g])}, cfg)
        m = 0.9 * m + 0.1 * g
        v = 0.999 * v + 0.001 * g * g
        w -= 0.05 * (m / (1 - 0.9 ** t)) / ((v / (1 - 0.999 ** t)) ** 0.5 + 1e-8)
        assert p["w"][0] == pytest.approx(w, rel=1e-12)


# -- training -------------------------------------------------------------------

def sine_trend_split(n=400, lookback=20, seed=0):
    rng = np.random.default_rng(seed)
    t = np.arange(n)
    x = 100 + 0.01 * t + 10 * np.sin(2 * np.pi * t / 50) + rng.normal(0, 1, n)
    sc = pp.fit_scaler(x)
    return pp.chrono_split(pp.make_windows(sc.transform(x), lookback), 0.8), sc


def test_zero_epochs_leave_weights_untouched():
    split, _ = sine_trend_split()
    net = lstm.init_network(1, hidden=4, lookback=20)
    before = net.checksum()
    rep = lstm.train(net, split, lstm.TrainConfig(epochs=0))
    assert rep.epoch_losses == () and net.checksum() == before == rep.checksum


def test_training_reduces_loss_and_is_deterministic():
    split, _ = sine_trend_split()
    cfg = lstm.TrainConfig(epochs=4, batch_size=16, learning_rate=0.01, shuffle_seed=3)
    a, b = lstm.init_network(2, hidden=8, lookback=20), lstm.init_network(2, hidden=8, lookback=20)
    ra, rb = lstm.train(a, split, cfg), lstm.train(b, split, cfg)
    assert ra.epoch_losses == rb.epoch_losses and ra.checksum == rb.checksum
    assert len(ra.epoch_losses) == 4
    assert ra.epoch_losses[-1] < ra.epoch_losses[0]


def test_partial_final_batch():
    split, _ = sine_trend_split(n=95, lookback=10)   # 68 training windows
    net = lstm.init_network(0, hidden=2, lookback=10)
    rep = lstm.train(net, split, lstm.TrainConfig(epochs=1, batch_size=32))
    assert len(rep.epoch_losses) == 1 and np.isfinite(rep.epoch_losses[0])


class IdentityStub:
    """Predicts each window's true next value; only valid for the split it was built from."""

    def __init__(self, split):
        self.lookup = {w.tobytes(): t for w, t in zip(split.test.inputs, split.test.targets)}

    def predict(self, windows):
        return np.array([self.lookup[w.tobytes()] for w in np.asarray(windows)])


def test_evaluate_identity_stub_is_perfect():
    split, sc = sine_trend_split()
    r = lstm.evaluate(IdentityStub(split), split, sc)
    assert (r.mae, r.mse, r.rmse, r.r2) == (0.0, 0.0, 0.0, 1.0)


def test_evaluate_reports_price_units():
    split, sc = sine_trend_split()
    net = lstm.init_network(0, hidden=3, lookback=20)
    r = lstm.evaluate(net, split, sc)
    scaled = pp.ScalerParams(0.0, 1.0)
    r_scaled = lstm.evaluate(net, split, scaled)
    assert r.mae == pytest.approx(r_scaled.mae * (sc.max - sc.min), rel=1e-9)
    assert r.r2 == pytest.approx(r_scaled.r2, rel=1e-9)


def test_train_rejects_empty_partition():
    split, _ = sine_trend_split()
    empty = pp.SplitDataset(pp.WindowedDataset(np.empty((0, 20)), np.empty(0), 20), split.test, 0.8)
    with pytest.raises(InsufficientData):
        lstm.train(lstm.init_network(0, hidden=2, lookback=20), empty, lstm.TrainConfig(epochs=1))


# -- future forecast ------------------------------------------------------------

def constant_net(value, lookback=60):
    net = lstm.init_network(0, hidden=3, lookback=lookback)
    for p in net.parameters().values():
        p[...] = 0.0
    net.dense_b[0] = value
    return net


def test_future_forecast_constant_stub():
    out = lstm.future_forecast(constant_net(0.5), pp.ScalerParams(0.0, 200.0), np.zeros(60), 5)
    assert out == [100.0] * 5


def test_future_forecast_zero_days_and_bad_window():
    assert lstm.future_forecast(constant_net(0.5), pp.ScalerParams(0.0, 1.0), np.zeros(60), 0) == []
    with pytest.raises(ShapeError):
        lstm.future_forecast(constant_net(0.5), pp.ScalerParams(0.0, 1.0), np.zeros(59), 1)


def test_future_forecast_feeds_predictions_back():
    class LastValuePlusOne:
        lookback = 3

        def predict(self, windows):
            return np.asarray(windows)[:, -1] + 0.1

    out = lstm.future_forecast(LastValuePlusOne(), pp.ScalerParams(0.0, 10.0), [0.1, 0.2, 0.3], 3)
    assert out == pytest.approx([4.0, 5.0, 6.0])


# -- persistence ----------------------------------------------------------------

def test_model_round_trip(tmp_path):
    net = lstm.init_network(42)
    sc = pp.ScalerParams(12.345678901234567, 198.76)
    path = tmp_path / "m.fincast"
    lstm.save_model(net, sc, path)
    net2, sc2 = lstm.load_model(path)
    assert net2.checksum() == net.checksum()
    assert (sc2.min, sc2.max) == (sc.min, sc.max)
    assert (net2.lookback, net2.dropout_rate, net2.seed) == (60, 0.2, 42)
    assert path.read_text().startswith("FINCAST-MODEL v1\n")


def test_truncated_file(tmp_path):
    path = tmp_path / "m.fincast"
    lstm.save_model(lstm.init_network(1, hidden=3, lookback=4), pp.ScalerParams(0, 1), path)
    text = path.read_text()
    for cut in (len(text) // 2, len(text) - 3):
        path.write_text(text[:cut])
        with pytest.raises(ChecksumError):
            lstm.load_model(path)


def test_tampered_value(tmp_path):
    path = tmp_path / "m.fincast"
    lstm.save_model(lstm.init_network(1, hidden=3, lookback=4), pp.ScalerParams(0, 1), path)
    text = path.read_text()
    path.write_text(text.replace("seed 1", "seed 2"))
    with pytest.raises(ChecksumError):
        lstm.load_model(path)


def test_unknown_version(tmp_path):
    path = tmp_path / "m.fincast"
    lstm.save_model(lstm.init_network(1, hidden=3, lookback=4), pp.ScalerParams(0, 1), path)
    path.write_text(path.read_text().replace("FINCAST-MODEL v1", "FINCAST-MODEL v99", 1))
    with pytest.raises(FormatVersionError):
        lstm.load_model(path)


def test_missing_file(tmp_path):
    with pytest.raises(ModelIOError):
        lstm.load_model(tmp_path / "nope.fincast")
