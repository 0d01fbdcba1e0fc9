import numpy as np
import pytest

from pbitsim.core import NetworkFormatError, all_states, exact_boltzmann
from pbitsim.learn import (
    SparseDBM,
    TrainConfig,
    bars_and_stripes,
    build_sparse_dbm,
    cd_gradient,
    classify,
    digit_templates,
    generate,
    load_dataset,
    model_expectations,
    save_dataset,
    toy_digits,
    train,
)


def exact_stats(model, beta=1.0):
    net = model.network
    p = exact_boltzmann(net, beta)
    S = all_states(net.n).astype(float)
    return p @ (S[:, net.rows] * S[:, net.cols]), p @ S


def test_build_examples():
    m = build_sparse_dbm(6, 0, 0, rng=0, max_degree=3)
    assert len(m.hidden) == 0 and len(m.visible) == 6
    desk = build_sparse_dbm(64, 32, 4, rng=1, max_degree=6, n_classes=4)
    assert desk.network.degree().max() <= 6
    assert desk.plan.num_colors <= 8
    assert sorted(np.bincount(desk.roles).tolist()) == [4, 32, 64]
    big = build_sparse_dbm(784, 3460, 20, rng=2, max_degree=6, n_classes=10)
    assert big.network.n == 4264
    layered = build_sparse_dbm(64, 64, 9, rng=3, max_degree=6, n_classes=3, graph="layered")
    net = layered.network
    roles = layered.roles
    assert np.all((roles[net.rows] == 1) | (roles[net.cols] == 1))  # every edge touches a hidden unit
    assert np.all(np.abs(net.weights) <= 0.1) and np.all(net.bias == 0)


def test_role_and_shape_validation():
    m = build_sparse_dbm(4, 2, 0, rng=0)
    with pytest.raises(ValueError):
        SparseDBM(m.network, m.roles[:-1], 1)
    with pytest.raises(ValueError):
        SparseDBM(m.network, m.roles, 1, image_shape=(3, 3))


def test_fixed_point_gradient_is_zero():
    model = build_sparse_dbm(4, 0, 0, rng=0, init_scale=0.0)
    data = np.tile(all_states(4), (50, 1))
    g = cd_gradient(model, data, cd_steps=5, rng=1)
    assert np.all(g.pos_w == 0)
    assert np.all(np.abs(g.dW) < 3 * g.neg_w_se)
    assert np.all(np.abs(g.dh) < 3 * g.neg_h_se)


def test_gradient_sign_for_aligned_data():
    model = build_sparse_dbm(2, 0, 0, rng=0, edges=[(0, 1)], init_scale=0.0)
    g = cd_gradient(model, np.ones((200, 2), dtype=np.int8), cd_steps=3, rng=2)
    assert g.dW[0] > 0 and np.all(g.dh > 0)


def test_negative_phase_matches_enumeration():
    model = build_sparse_dbm(3, 5, 0, rng=4, max_degree=3, init_scale=0.8)
    batch = np.where(np.random.default_rng(0).random((3000, 3)) < 0.5, -1, 1)
    g = cd_gradient(model, batch, cd_steps=100, rng=5)
    ew, eh = exact_stats(model)
    assert np.all(np.abs(g.neg_w - ew) < 3 * g.neg_w_se)
    assert np.all(np.abs(g.neg_h - eh) < 3 * g.neg_h_se)
    w, h, wse, hse = model_expectations(model, sweeps=100, chains=3000, rng=6)
    assert np.all(np.abs(w - ew) < 3 * wse) and np.all(np.abs(h - eh) < 3 * hse)


def test_clamped_units_hold_data_in_positive_phase():
    model = build_sparse_dbm(6, 6, 2, rng=0, n_classes=2)
    X, y = np.where(np.random.default_rng(1).random((30, 6)) < 0.5, -1, 1), np.arange(30) % 2
    data = model.examples(X, y)
    g = cd_gradient(model, data, cd_steps=2, rng=3)
    clamp = model.clamp_units
    assert np.array_equal(g.pos_h[clamp], data.mean(axis=0))
    with pytest.raises(ValueError):
        cd_gradient(model, data[:, :-1])
    with pytest.raises(ValueError):
        cd_gradient(model, np.zeros_like(data))


def test_learning_rate_zero_and_determinism():
    X, y = bars_and_stripes(3)
    model = build_sparse_dbm(9, 6, 2, rng=0, n_classes=2)
    frozen = train(model, X, y, TrainConfig(minibatch_size=4, learning_rate=0.0, epochs=2))
    assert np.array_equal(frozen.model.network.weights, model.network.weights)
    assert np.array_equal(frozen.model.network.bias, model.network.bias)
    cfg = TrainConfig(minibatch_size=4, learning_rate=0.05, epochs=3, seed=7)
    a, b = train(model, X, y, cfg), train(model, X, y, cfg)
    assert np.array_equal(a.model.network.weights, b.model.network.weights)
    assert a.reconstruction == b.reconstruction
    net = a.model.network
    assert np.allclose(net.dense(), net.dense().T)


def test_bars_and_stripes_reconstruction_falls():
    X, y = bars_and_stripes(4)
    assert X.shape == (28, 16)
    X, y = np.tile(X, (20, 1)), np.tile(y, 20)
    model = build_sparse_dbm(16, 16, 2, rng=0, max_degree=6, graph="layered", n_classes=2, image_shape=(4, 4))
    res = train(model, X, y, TrainConfig(minibatch_size=len(y), learning_rate=0.3, epochs=20, seed=0))
    assert np.all(np.diff(res.reconstruction) < 0)


def test_generate_single_pattern():
    pattern = digit_templates()[1].reshape(-1)
    X = np.tile(pattern, (50, 1))
    model = build_sparse_dbm(64, 32, 1, rng=0, max_degree=6, graph="layered", n_classes=1)
    res = train(model, X, np.zeros(50, dtype=int), TrainConfig(minibatch_size=50, learning_rate=0.1, epochs=30))
    out = generate(res.model, 0, rng=1, count=5)
    assert np.all((out != pattern).mean(axis=1) <= 0.1)


def test_generate_beta_zero_uniform():
    model = build_sparse_dbm(8, 8, 2, rng=0, n_classes=2, init_scale=1.0)
    out = generate(model, 1, schedule="0x20", rng=2, count=4000)
    assert np.all(np.abs(out.mean(axis=0)) < 3 / np.sqrt(4000))


def test_classify_beta_zero_and_garbage():
    model = build_sparse_dbm(16, 8, 3, rng=0, n_classes=3, init_scale=1.0)
    c = classify(model, np.ones(16, dtype=np.int8), beta=0.0, sweeps=50)
    assert np.allclose(c.marginals, 0.5)
    c = classify(model, np.ones(16, dtype=np.int8), sweeps=50)
    assert c.probabilities.sum() == pytest.approx(1.0)
    assert 0 <= c.prediction < 3
    assert c.low_confidence == bool(c.marginals.max() < 0.5)
    assert set(c.to_dict()) == {"prediction", "probabilities", "label_marginals", "low_confidence"}
    with pytest.raises(ValueError):
        classify(model, np.ones(15))


def test_toy_digits():
    X, y = toy_digits(per_class=20, rng=0)
    assert X.shape == (60, 64) and np.bincount(y).tolist() == [20, 20, 20]
    assert set(np.unique(X)) == {-1, 1}
    again, _ = toy_digits(per_class=20, rng=0)
    assert np.array_equal(X, again)


@pytest.mark.parametrize("suffix", [".json", ".csv"])
def test_dataset_round_trip(tmp_path, suffix):
    X, y = bars_and_stripes(3)
    path = tmp_path / f"d{suffix}"
    save_dataset(path, X, y, shape=(3, 3))
    X2, y2, shape = load_dataset(path)
    assert np.array_equal(X2, X) and np.array_equal(y2, y)
    if suffix == ".json":
        assert shape == (3, 3)


def test_dataset_binary_pixels_and_errors(tmp_path):
    (tmp_path / "b.csv").write_text("1,0,1,1\n0,1,0,0\n")
    X, y, _ = load_dataset(tmp_path / "b.csv")
    assert X.tolist() == [[-1, 1, 1], [1, -1, -1]] and y.tolist() == [1, 0]
    (tmp_path / "bad.csv").write_text("1,2,3\n")
    with pytest.raises(NetworkFormatError):
        load_dataset(tmp_path / "bad.csv")


def test_model_round_trip(tmp_path):
    model = build_sparse_dbm(16, 8, 3, rng=0, n_classes=3, image_shape=(4, 4))
    model.save(tmp_path / "m.json")
    again = SparseDBM.load(tmp_path / "m.json")
    assert np.array_equal(again.network.weights, model.network.weights)
    assert np.array_equal(again.roles, model.roles) and again.image_shape == (4, 4)
    (tmp_path / "x.json").write_text("{")
    with pytest.raises(NetworkFormatError):
        SparseDBM.load(tmp_path / "x.json")
