import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from phonembed.embedders import EmbeddingConfig, init_encoder
from phonembed.errors import DegenerateLabels, EmptyBatch, InsufficientData
from phonembed.learning import (
    ClassifierConfig,
    TrainConfig,
    Triplet,
    _forward,
    metric_loss_and_grad,
    metric_loss_grad_base,
    mlp_loss_and_grad,
    pair_features,
    sample_pairs,
    sample_triplets,
    stratified_split,
    train_encoder,
    train_pair_classifier,
    triplet_loss_and_grad,
    triplet_loss_grad_base,
)
from phonembed.synth import pseudo_lexicon
from tests.oracles import finite_difference, max_relative_error


def _unit_params(w2=1.0):
    # f(x) = w2 * tanh(x) in one dimension
    return {"W1": np.array([[1.0]]), "b1": np.zeros(1), "W2": np.array([[w2]]), "b2": np.zeros(1)}


def _random_params(rng, n_in=5, hidden=4, out=3, scale=0.8):
    return {
        "W1": rng.normal(0, scale, (hidden, n_in)),
        "b1": rng.normal(0, scale, hidden),
        "W2": rng.normal(0, scale, (out, hidden)),
        "b2": rng.normal(0, scale, out),
    }


class TestMetricLoss:
    def test_hand_value(self):
        params = _unit_params(1.0 / np.tanh(1.0))
        loss, _ = metric_loss_grad_base(params, np.array([[0.0]]), np.array([[1.0]]), np.array([2.0]))
        assert loss == pytest.approx(1.0, abs=1e-12)

    def test_zero_at_optimum(self):
        params = _unit_params(1.0 / np.tanh(1.0))
        loss, grads = metric_loss_grad_base(params, np.array([[0.0]]), np.array([[1.0]]), np.array([1.0]))
        assert loss == pytest.approx(0.0, abs=1e-24)
        assert all(np.allclose(g, 0, atol=1e-12) for g in grads.values())

    def test_swap_invariant(self, rng):
        params = _random_params(rng)
        Xa, Xb = rng.normal(size=(6, 5)), rng.normal(size=(6, 5))
        t = rng.uniform(0, 3, 6)
        assert metric_loss_grad_base(params, Xa, Xb, t)[0] == pytest.approx(metric_loss_grad_base(params, Xb, Xa, t)[0])

    def test_empty_batch(self):
        with pytest.raises(EmptyBatch):
            metric_loss_grad_base(_unit_params(), np.zeros((0, 1)), np.zeros((0, 1)), np.zeros(0))

    def test_gradient_matches_finite_difference(self, rng):
        for _ in range(50):
            params = _random_params(rng)
            Xa, Xb = rng.normal(size=(4, 5)), rng.normal(size=(4, 5))
            t = rng.uniform(0, 3, 4)
            _, grads = metric_loss_grad_base(params, Xa, Xb, t)
            numeric = finite_difference(lambda p: metric_loss_grad_base(p, Xa, Xb, t)[0], params)
            # the output bias cancels in f(a) - f(b), so its exact gradient is 0 and
            # the numeric one is pure roundoff; scale the floor with the loss
            loss = metric_loss_grad_base(params, Xa, Xb, t)[0]
            assert max_relative_error(grads, numeric, floor=1e-6 * max(1.0, loss)) < 1e-4

    def test_entry_level_api(self, table):
        entries = pseudo_lexicon(5, 0, table=table).entries
        enc = init_encoder(EmbeddingConfig(4), 8, np.random.default_rng(0), table)
        loss, grads = metric_loss_and_grad(enc, [(entries[0], entries[1], 0.5)])
        assert loss >= 0
        assert set(grads) == {"W1", "b1", "W2", "b2"}


class TestTripletLoss:
    def _xs(self, a, p, n):
        return (np.array([[np.arctanh(v)]]) for v in (a, p, n))

    def test_hand_value(self):
        Xa, Xp, Xn = self._xs(0.0, 0.5, -0.6)
        loss, _ = triplet_loss_grad_base(_unit_params(), Xa, Xp, Xn, 0.2)
        assert loss == pytest.approx(0.1, abs=1e-12)

    def test_inactive(self):
        Xa, Xp, Xn = self._xs(0.0, 0.1, -0.9)
        loss, grads = triplet_loss_grad_base(_unit_params(), Xa, Xp, Xn, 0.2)
        assert loss == 0
        assert all(not g.any() for g in grads.values())

    def test_zero_length_difference(self):
        Xa, Xp, Xn = self._xs(0.3, 0.3, 0.3)
        loss, grads = triplet_loss_grad_base(_unit_params(), Xa, Xp, Xn, 0.2)
        assert loss == pytest.approx(0.2)
        assert all(np.isfinite(g).all() for g in grads.values())

    @settings(max_examples=100, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.floats(0.01, 2.0))
    def test_bounds(self, seed, margin):
        rng = np.random.default_rng(seed)
        params = _random_params(rng)
        Xa, Xp, Xn = (rng.normal(size=(3, 5)) for _ in range(3))
        loss, _ = triplet_loss_grad_base(params, Xa, Xp, Xn, margin)
        assert loss >= 0
        # the hinge can never exceed margin + the positive distance
        ea, ep = _forward(params, Xa)[1], _forward(params, Xp)[1]
        assert loss <= margin + np.linalg.norm(ea - ep, axis=1).mean() + 1e-12

    def test_gradient_matches_finite_difference(self, rng):
        checked = 0
        while checked < 50:
            params = _random_params(rng)
            Xa, Xp, Xn = (rng.normal(size=(3, 5)) for _ in range(3))
            E = [_forward(params, X)[1] for X in (Xa, Xp, Xn)]
            hinge = 0.2 + np.linalg.norm(E[0] - E[1], axis=1) - np.linalg.norm(E[0] - E[2], axis=1)
            if np.abs(hinge).min() < 1e-3:
                continue  # too close to the kink for a finite difference
            _, grads = triplet_loss_grad_base(params, Xa, Xp, Xn, 0.2)
            numeric = finite_difference(lambda p: triplet_loss_grad_base(p, Xa, Xp, Xn, 0.2)[0], params)
            assert max_relative_error(grads, numeric) < 1e-4
            checked += 1

    def test_entry_level_api(self, table, dist):
        entries = pseudo_lexicon(5, 0, table=table).entries
        enc = init_encoder(EmbeddingConfig(4), 8, np.random.default_rng(0), table)
        t = Triplet(entries[0], entries[1], entries[2], 0.1, 0.5)
        loss, _ = triplet_loss_and_grad(enc, t, 0.2)
        assert loss >= 0


class TestMLPGradient:
    def test_matches_finite_difference(self, rng):
        for _ in range(50):
            params = {
                "W1": rng.normal(0, 0.7, (4, 6)),
                "b1": rng.normal(0, 0.7, 4),
                "w2": rng.normal(0, 0.7, 4),
                "b2": rng.normal(0, 0.7, 1),
            }
            Z = rng.normal(size=(8, 6))
            y = rng.integers(0, 2, 8).astype(float)
            _, grads = mlp_loss_and_grad(params, Z, y, 1e-2)
            numeric = finite_difference(lambda p: mlp_loss_and_grad(p, Z, y, 1e-2)[0], params)
            assert max_relative_error(grads, numeric) < 1e-4


def _word_dist(dist):
    return lambda a, b: dist.distance(a.phon, b.phon)


class TestSampling:
    def test_pairs_distinct(self, rng):
        idx = sample_pairs(5, 1000, rng)
        assert (idx[:, 0] != idx[:, 1]).all()
        assert idx.min() == 0 and idx.max() == 4

    def test_triplet_invariant(self, dist):
        entries = pseudo_lexicon(60, 2).entries
        trips = sample_triplets(entries, _word_dist(dist), 300, seed=4)
        assert len(trips) == 300
        for t in trips:
            assert t.d_ap < t.d_an
            assert t.d_ap == dist.distance(t.anchor.phon, t.positive.phon)
            assert len({t.anchor.key, t.positive.key, t.negative.key}) == 3

    def test_triplets_deterministic(self, dist):
        entries = pseudo_lexicon(60, 2).entries
        a = sample_triplets(entries, _word_dist(dist), 50, seed=4)
        b = sample_triplets(entries, _word_dist(dist), 50, seed=4)
        assert [(t.anchor.key, t.positive.key, t.negative.key) for t in a] == \
            [(t.anchor.key, t.positive.key, t.negative.key) for t in b]

    def test_triplets_too_few_words(self, dist):
        with pytest.raises(InsufficientData):
            sample_triplets(pseudo_lexicon(2, 0).entries, _word_dist(dist), 5, seed=0)

    def test_triplets_all_ties(self):
        entries = pseudo_lexicon(10, 0).entries
        with pytest.raises(InsufficientData):
            sample_triplets(entries, lambda a, b: 1.0, 5, seed=0)


SMALL = EmbeddingConfig(8, "articulatory")


class TestTrainEncoder:
    def test_zero_learning_rate(self, table, dist):
        entries = pseudo_lexicon(20, 1).entries
        cfg = TrainConfig(learning_rate=0.0, epochs=2, hidden=16, pairs_per_epoch=50, seed=5)
        initial = init_encoder(SMALL, 16, np.random.default_rng(5), table)
        trained = train_encoder(entries, cfg, "metric", SMALL, _word_dist(dist), table).encoder
        for k, v in initial.params().items():
            assert np.array_equal(v, trained.params()[k])

    def test_loss_decreases(self, table, dist):
        entries = pseudo_lexicon(20, 1).entries
        cfg = TrainConfig(learning_rate=1e-3, epochs=200, batch_size=32, hidden=32, pairs_per_epoch=64, seed=1)
        losses = train_encoder(entries, cfg, "metric", SMALL, _word_dist(dist), table).losses
        assert len(losses) == 200
        assert losses[-1] < losses[0]
        assert np.mean(losses[-20:]) < 0.5 * np.mean(losses[:20])

    @pytest.mark.parametrize("objective", ["metric", "triplet"])
    def test_bit_identical(self, table, dist, objective):
        entries = pseudo_lexicon(30, 1).entries
        cfg = TrainConfig(epochs=3, hidden=16, pairs_per_epoch=64, triplets_per_epoch=64, seed=9)
        runs = [train_encoder(entries, cfg, objective, SMALL, _word_dist(dist), table) for _ in range(2)]
        assert runs[0].losses == runs[1].losses
        for k, v in runs[0].encoder.params().items():
            assert v.tobytes() == runs[1].encoder.params()[k].tobytes()

    def test_embeddings_have_configured_dimension(self, table, dist):
        entries = pseudo_lexicon(20, 1).entries
        cfg = TrainConfig(epochs=1, hidden=16, pairs_per_epoch=32)
        enc = train_encoder(entries, cfg, "triplet", SMALL, _word_dist(dist), table).encoder
        assert enc.embed_many(entries).shape == (20, 8)

    def test_rejects_unknown_objective(self, table, dist):
        with pytest.raises(ValueError):
            train_encoder(pseudo_lexicon(5, 1).entries, TrainConfig(), "contrastive", SMALL, _word_dist(dist), table)

    def test_clipping_bounds_each_step(self, table, dist):
        entries = pseudo_lexicon(20, 1).entries
        base = TrainConfig(learning_rate=1.0, epochs=1, batch_size=64, hidden=8, pairs_per_epoch=64, seed=2)
        start = init_encoder(SMALL, 8, np.random.default_rng(2), table).params()
        for clip in (0.5, 2.0):
            cfg = TrainConfig(**{**base.__dict__, "clip_norm": clip})
            end = train_encoder(entries, cfg, "metric", SMALL, _word_dist(dist), table).encoder.params()
            moved = np.sqrt(sum(float(((end[k] - start[k]) ** 2).sum()) for k in start))
            assert moved <= clip * (1 + 1e-9)

    def test_config_validation(self):
        with pytest.raises(ValueError):
            TrainConfig(clip_norm=0.0)
        with pytest.raises(ValueError):
            TrainConfig(epochs=0)
        with pytest.raises(ValueError):
            TrainConfig(margin=0)


def _examples(X, Y, labels):
    return [(x, y, int(l)) for x, y, l in zip(X, Y, labels)]


class TestPairClassifier:
    def test_pair_features(self):
        f = pair_features(np.array([1.0, -2.0]), np.array([3.0, 2.0]))
        assert f.tolist() == [[1, -2, 3, 2, 2, 4, 3, -4]]

    def test_stratified_split(self):
        y = np.array([0] * 50 + [1] * 30)
        train, test = stratified_split(y, 0.2, 0)
        assert len(test) == 16
        assert (y[test] == 1).sum() == 6
        assert set(train) | set(test) == set(range(80))
        assert not set(train) & set(test)

    def test_separable(self, rng):
        X = rng.normal(size=(600, 4))
        X = X[np.abs(X[:, 0]) > 0.5][:300]
        Y = rng.normal(size=(len(X), 4))
        _, acc = train_pair_classifier(_examples(X, Y, X[:, 0] > 0), split_seed=0)
        assert acc == 1.0

    def test_random_labels_near_chance(self):
        for seed in range(5):
            rng = np.random.default_rng(seed)
            X, Y = rng.normal(size=(500, 6)), rng.normal(size=(500, 6))
            _, acc = train_pair_classifier(_examples(X, Y, rng.integers(0, 2, 500)), split_seed=seed)
            assert 0.35 <= acc <= 0.65

    def test_single_class(self, rng):
        X = rng.normal(size=(40, 3))
        with pytest.raises(DegenerateLabels):
            train_pair_classifier(_examples(X, X, np.ones(40)), split_seed=0)

    def test_too_few(self, rng):
        X = rng.normal(size=(10, 3))
        with pytest.raises(InsufficientData):
            train_pair_classifier(_examples(X, X, np.arange(10) % 2), split_seed=0)

    def test_column_permutation_invariant(self, rng):
        X, Y = rng.normal(size=(300, 5)), rng.normal(size=(300, 5))
        labels = (X[:, 1] * Y[:, 1] > 0).astype(int)
        perm = rng.permutation(5)
        cfg = ClassifierConfig(epochs=20)
        _, acc = train_pair_classifier(_examples(X, Y, labels), 3, cfg)
        _, acc_perm = train_pair_classifier(_examples(X[:, perm], Y[:, perm], labels), 3, cfg)
        assert acc == acc_perm

    def test_deterministic(self, rng):
        X, Y = rng.normal(size=(100, 3)), rng.normal(size=(100, 3))
        labels = X[:, 0] > Y[:, 0]
        a = train_pair_classifier(_examples(X, Y, labels), 7, ClassifierConfig(epochs=5))
        b = train_pair_classifier(_examples(X, Y, labels), 7, ClassifierConfig(epochs=5))
        assert a[1] == b[1]
        assert np.array_equal(a[0].W1, b[0].W1)
