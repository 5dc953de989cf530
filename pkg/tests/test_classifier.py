"""Tests for the recurrent classifier: cells, gradients, training, persistence."""

import numpy as np
import pytest

from emoface.classifier import (
    ClassifierModel,
    TrainConfig,
    classify,
    cross_entropy,
    evaluate,
    forward,
    init_lstm,
    init_rnn,
    load_model,
    lstm_step,
    save_model,
    softmax,
    stratified_split,
    train,
)
from emoface.classifier.cells import LstmParams
from emoface.classifier.train import batch_loss, batch_loss_and_grads, build_vocab
from emoface.embeddings import load_vectors
from emoface.errors import EmptySplit, VersionMismatch
from emoface.labels import EmotionLabel
from emoface.text_normalizer import encode


def _sigmoid_scalar(x):
    return 1.0 / (1.0 + np.exp(-x))


def _lstm_step_oracle(x, h, c, p):
    """Scalar oracle: evaluate the five cell equations index by index."""
    H, D = p.hidden_dim, p.input_dim
    h_new = np.zeros(H)
    c_new = np.zeros(H)
    for r in range(H):
        zi = sum(p.W_i[r, k] * x[k] for k in range(D))
        zf = sum(p.W_f[r, k] * x[k] for k in range(D))
        zo = sum(p.W_o[r, k] * x[k] for k in range(D))
        zg = sum(p.W_g[r, k] * x[k] for k in range(D))
        zi += sum(p.U_i[r, k] * h[k] for k in range(H)) + p.b_i[r]
        zf += sum(p.U_f[r, k] * h[k] for k in range(H)) + p.b_f[r]
        zo += sum(p.U_o[r, k] * h[k] for k in range(H)) + p.b_o[r]
        zg += sum(p.U_g[r, k] * h[k] for k in range(H)) + p.b_g[r]
        i, f, o, g = _sigmoid_scalar(zi), _sigmoid_scalar(zf), _sigmoid_scalar(zo), np.tanh(zg)
        c_new[r] = f * c[r] + i * g
        h_new[r] = o * np.tanh(c_new[r])
    return h_new, c_new


class TestLstmStep:
    def test_zero_weights_fixed_point(self):
        rng = np.random.default_rng(0)
        p = init_lstm(3, 2, rng)
        for name, t in p.tensors().items():
            t[...] = 0.0
        h, c = lstm_step(rng.normal(size=3), np.zeros(2), np.zeros(2), p)
        np.testing.assert_array_equal(h, 0.0)
        np.testing.assert_array_equal(c, 0.0)

    def test_forget_gate_saturation(self):
        rng = np.random.default_rng(1)
        p = init_lstm(1, 1, rng)
        for name, t in p.tensors().items():
            t[...] = 0.0
        p.b_f[...] = 50.0  # saturates the forget gate to 1
        h, c = lstm_step(np.zeros(1), np.zeros(1), np.array([1.0]), p)
        assert c[0] == pytest.approx(1.0, abs=1e-12)

    def test_matches_scalar_oracle(self):
        rng = np.random.default_rng(2)
        p = init_lstm(2, 2, rng)
        x = rng.normal(size=2) * 0.5
        h0 = rng.normal(size=2) * 0.5
        c0 = rng.normal(size=2) * 0.5
        h, c = lstm_step(x, h0, c0, p)
        h_ref, c_ref = _lstm_step_oracle(x, h0, c0, p)
        np.testing.assert_allclose(h, h_ref, atol=1e-12)
        np.testing.assert_allclose(c, c_ref, atol=1e-12)

    def test_shape_mismatch_rejected(self):
        p = init_lstm(3, 2, np.random.default_rng(0))
        with pytest.raises(ValueError):
            lstm_step(np.zeros(4), np.zeros(2), np.zeros(2), p)


class TestCrossEntropy:
    def test_uniform_is_ln7(self):
        assert cross_entropy(np.full(7, 1 / 7), EmotionLabel.ANGER) == pytest.approx(
            1.945910, abs=1e-6
        )

    def test_one_hot_is_zero(self):
        p = np.zeros(7)
        p[3] = 1.0
        assert cross_entropy(p, 3) == pytest.approx(0.0, abs=1e-9)

    def test_known_value(self):
        p = np.full(7, (1 - 0.59) / 6)
        p[2] = 0.59
        assert cross_entropy(p, 2) == pytest.approx(0.527633, abs=1e-6)

    def test_input_validation(self):
        with pytest.raises(ValueError):
            cross_entropy(np.full(7, 0.5), 0)


def _rel_err(a, b):
    na = np.linalg.norm(a)
    nb = np.linalg.norm(b)
    return np.linalg.norm(a - b) / max(na + nb, 1e-12)


def _fd_grads(params, X, lengths, labels, step=1e-5):
    """Oracle: central finite differences over every parameter entry."""
    out = {}
    for name, tensor in params.tensors().items():
        g = np.zeros_like(tensor)
        flat = tensor.reshape(-1)
        gflat = g.reshape(-1)
        for j in range(flat.size):
            orig = flat[j]
            flat[j] = orig + step
            lp = batch_loss(params, X, lengths, labels)
            flat[j] = orig - step
            lm = batch_loss(params, X, lengths, labels)
            flat[j] = orig
            gflat[j] = (lp - lm) / (2 * step)
        out[name] = g
    return out


@pytest.mark.parametrize("cell", ["lstm", "rnn"])
def test_gradient_check_tiny_models(cell):
    """Analytic BPTT gradients match central finite differences."""
    rng = np.random.default_rng(42)
    for trial in range(5):
        D = int(rng.integers(2, 4))
        H = int(rng.integers(2, 5))
        T = int(rng.integers(1, 4))
        B = int(rng.integers(1, 4))
        params = init_lstm(D, H, rng) if cell == "lstm" else init_rnn(D, H, rng)
        X = rng.normal(size=(B, T, D))
        lengths = rng.integers(0, T + 1, size=B)
        lengths[0] = T  # keep at least one full-length sample
        labels = rng.integers(0, 7, size=B)
        _, analytic = batch_loss_and_grads(params, X, lengths, labels)
        numeric = _fd_grads(params, X, lengths, labels)
        for name in params.tensors():
            err = _rel_err(analytic[name], numeric[name])
            assert err < 1e-4, f"{cell} {name}: rel err {err:.2e}"


@pytest.fixture(scope="module")
def small_setup(tmp_path_factory):
    """A 14-item corpus (2 per class) with deterministic random vectors."""
    rng = np.random.default_rng(5)
    words = {
        EmotionLabel.HAPPY: ("joyful", "delighted"),
        EmotionLabel.SADNESS: ("miserable", "gloomy"),
        EmotionLabel.ANGER: ("furious", "enraged"),
        EmotionLabel.FEAR: ("terrified", "afraid"),
        EmotionLabel.SHAME: ("ashamed", "embarrassed"),
        EmotionLabel.DISGUST: ("disgusted", "revolted"),
        EmotionLabel.SURPRISE: ("astonished", "amazed"),
    }
    items = []
    vocab_words = {"i", "feel", "so", "very"}
    for label, (w1, w2) in words.items():
        items.append((f"i feel so {w1}", label))
        items.append((f"very {w2} today", label))
        vocab_words.update({w1, w2, "today"})
    path = tmp_path_factory.mktemp("vec") / "vectors.txt"
    lines = [
        w + " " + " ".join(f"{x:.6f}" for x in rng.normal(size=8))
        for w in sorted(vocab_words)
    ]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    store = load_vectors(path)
    corpus = stratified_split(items, test_fraction=0.0, seed=1)
    return corpus, store


class TestTraining:
    def test_epochs_zero_is_chance(self, small_setup):
        corpus, store = small_setup
        cfg = TrainConfig(epochs=0, hidden_dim=8, seed=3, max_len=8)
        model = train(corpus, store, cfg)
        acc = evaluate(model, corpus.train_items)
        assert abs(acc - 1 / 7) < 0.25  # tiny corpus, wide tolerance

    def test_memorizes_small_corpus(self, small_setup):
        corpus, store = small_setup
        cfg = TrainConfig(epochs=200, hidden_dim=16, seed=3, max_len=8, batch_size=4)
        model = train(corpus, store, cfg)
        assert model.train_meta["train_accuracy"] == 1.0

    def test_seeded_determinism(self, small_setup):
        corpus, store = small_setup
        cfg = TrainConfig(epochs=5, hidden_dim=8, seed=9, max_len=8)
        m1 = train(corpus, store, cfg)
        m2 = train(corpus, store, cfg)
        for name, t in m1.params.tensors().items():
            np.testing.assert_array_equal(t, m2.params.tensors()[name])

    def test_permutation_invariant_evaluation(self, small_setup):
        corpus, store = small_setup
        cfg = TrainConfig(epochs=3, hidden_dim=8, seed=2, max_len=8)
        model = train(corpus, store, cfg)
        items = list(corpus.train_items)
        a = evaluate(model, items)
        rng = np.random.default_rng(0)
        shuffled = [items[i] for i in rng.permutation(len(items))]
        assert evaluate(model, shuffled) == a

    def test_empty_split_rejected(self, small_setup):
        corpus, store = small_setup
        model = train(corpus, store, TrainConfig(epochs=0, hidden_dim=4, seed=0, max_len=8))
        with pytest.raises(EmptySplit):
            evaluate(model, [])


class TestForwardAndClassify:
    def _uniform_model(self, small_setup, hidden=4):
        corpus, store = small_setup
        model = train(
            corpus, store, TrainConfig(epochs=0, hidden_dim=hidden, seed=0, max_len=8)
        )
        for name, t in model.params.tensors().items():
            t[...] = 0.0
        return model

    def test_zero_params_give_uniform(self, small_setup):
        model = self._uniform_model(small_setup)
        enc = model.encode_text("i feel so joyful")
        probs = forward(model, enc)
        np.testing.assert_allclose(probs, 1 / 7, atol=1e-12)

    def test_probabilities_normalized(self, small_setup):
        corpus, store = small_setup
        model = train(corpus, store, TrainConfig(epochs=3, hidden_dim=8, seed=1, max_len=8))
        for text, _ in corpus.items:
            probs = forward(model, model.encode_text(text))
            assert probs.sum() == pytest.approx(1.0, abs=1e-6)
            assert (probs >= 0).all() and (probs <= 1).all()

    def test_empty_text_low_confidence_label_zero(self, small_setup):
        model = self._uniform_model(small_setup)
        result = classify(model, "")
        assert result.label == EmotionLabel.HAPPY
        assert result.low_confidence

    def test_all_unknown_equals_single_unk(self, small_setup):
        corpus, store = small_setup
        model = train(corpus, store, TrainConfig(epochs=2, hidden_dim=8, seed=4, max_len=8))
        probs_a = forward(model, model.encode_text("zzzqqq"))
        enc = encode(["zzzqqq"], model.vocab, model.max_len, model.frequencies)
        probs_b = forward(model, enc)
        np.testing.assert_array_equal(probs_a, probs_b)

    def test_forward_deterministic_bitwise(self, small_setup):
        corpus, store = small_setup
        model = train(corpus, store, TrainConfig(epochs=2, hidden_dim=8, seed=6, max_len=8))
        enc = model.encode_text("i feel so gloomy")
        p1 = forward(model, enc)
        p2 = forward(model, enc)
        np.testing.assert_array_equal(p1, p2)


class TestPersistence:
    def test_round_trip(self, small_setup, tmp_path):
        corpus, store = small_setup
        model = train(corpus, store, TrainConfig(epochs=2, hidden_dim=8, seed=8, max_len=8))
        path = tmp_path / "model.emf"
        save_model(model, path)
        loaded = load_model(path)
        assert loaded.vocab == model.vocab
        assert loaded.max_len == model.max_len
        for name, t in model.params.tensors().items():
            np.testing.assert_array_equal(t, loaded.params.tensors()[name])
        probs_a = forward(model, model.encode_text("very amazed today"))
        probs_b = forward(loaded, loaded.encode_text("very amazed today"))
        np.testing.assert_array_equal(probs_a, probs_b)

    def test_save_load_save_identical_bytes(self, small_setup, tmp_path):
        corpus, store = small_setup
        model = train(corpus, store, TrainConfig(epochs=1, hidden_dim=4, seed=8, max_len=8))
        p1 = tmp_path / "m1.emf"
        p2 = tmp_path / "m2.emf"
        save_model(model, p1)
        save_model(load_model(p1), p2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_wrong_tag_rejected(self, small_setup, tmp_path):
        from emoface.bundle import save_bundle

        path = tmp_path / "other.bin"
        save_bundle(path, "emomodel/2", {"x": 1}, {"t": np.zeros(2)})
        with pytest.raises(VersionMismatch):
            load_model(path)


class TestSplit:
    def test_split_disjoint_and_covering(self):
        items = [(f"text {i}", EmotionLabel(i % 7)) for i in range(70)]
        corpus = stratified_split(items, test_fraction=0.2, seed=4)
        assert set(corpus.train_idx) | set(corpus.test_idx) == set(range(70))
        assert set(corpus.train_idx) & set(corpus.test_idx) == set()
        # stratified: each class contributes 2 of its 10 items to test
        from collections import Counter

        test_labels = Counter(int(items[i][1]) for i in corpus.test_idx)
        assert all(test_labels[c] == 2 for c in range(7))

    def test_split_seeded(self):
        items = [(f"text {i}", EmotionLabel(i % 7)) for i in range(70)]
        a = stratified_split(items, seed=1)
        b = stratified_split(items, seed=1)
        c = stratified_split(items, seed=2)
        assert a.test_idx == b.test_idx
        assert a.test_idx != c.test_idx


def test_build_vocab_orders_by_frequency(small_setup):
    corpus, store = small_setup
    vocab, freq, matrix = build_vocab(corpus.items, store)
    assert vocab["<pad>"] == 0 and vocab["<unk>"] == 1
    words = [w for w in vocab if w not in ("<pad>", "<unk>")]
    freqs = [freq[w] for w in words]
    assert freqs == sorted(freqs, reverse=True)
    assert matrix.shape == (len(vocab), store.dim)
    np.testing.assert_array_equal(matrix[0], 0.0)
