"""Toy encoder training: optimization sanity, determinism, persistence."""

import numpy as np
import pytest

from cloneforge.encoder import Diverged, ToyConfig, ToyEncoder, toy_train


def synth_triplets(seed, n):
    """Three token families; anchor/positive share one, negative leans elsewhere."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        fam = int(rng.integers(0, 3))
        base = 5 + 15 * fam
        other = 5 + 15 * ((fam + 1 + int(rng.integers(0, 2))) % 3)
        a = rng.integers(base, base + 12, size=int(rng.integers(6, 20))).tolist()
        p = rng.integers(base, base + 12, size=int(rng.integers(6, 20))).tolist()
        neg = rng.integers(other, other + 12, size=int(rng.integers(6, 20))).tolist()
        out.append((a, p, neg))
    return out


def _cos(u, v):
    return float(u @ v / (np.linalg.norm(u) * np.linalg.norm(v)))


CFG = dict(vocab_size=60, d=16, lr=0.05, batch=32)


class TestToyConfig:
    def test_bad_values_rejected(self):
        with pytest.raises(ValueError):
            ToyConfig(vocab_size=0)
        with pytest.raises(ValueError):
            ToyConfig(vocab_size=10, lr=0.0)
        with pytest.raises(ValueError):
            ToyConfig(vocab_size=10, steps=0)
        with pytest.raises(ValueError):
            ToyConfig(vocab_size=10, tau=-1.0)


class TestTraining:
    def test_loss_decreases(self):
        enc = toy_train(synth_triplets(0, 300), ToyConfig(steps=150, seed=1, **CFG))
        assert enc.curve[-1][1] < enc.curve[0][1]

    def test_same_seed_gives_identical_parameters(self):
        trips = synth_triplets(3, 120)
        cfg = ToyConfig(steps=40, seed=9, **CFG)
        e1, e2 = toy_train(trips, cfg), toy_train(trips, cfg)
        assert np.array_equal(e1.embeddings, e2.embeddings)
        assert np.array_equal(e1.projection, e2.projection)
        assert e1.curve == e2.curve

    def test_different_seed_gives_different_parameters(self):
        trips = synth_triplets(3, 120)
        e1 = toy_train(trips, ToyConfig(steps=40, seed=1, **CFG))
        e2 = toy_train(trips, ToyConfig(steps=40, seed=2, **CFG))
        assert not np.array_equal(e1.embeddings, e2.embeddings)

    def test_absurd_learning_rate_diverges(self):
        bad = ToyConfig(vocab_size=60, d=16, lr=1e200, batch=32, steps=50, seed=1)
        with pytest.raises(Diverged):
            toy_train(synth_triplets(0, 100), bad)

    def test_too_few_triplets_rejected(self):
        with pytest.raises(ValueError):
            toy_train(synth_triplets(0, 10), ToyConfig(steps=5, seed=1, **CFG))

    def test_empty_sequence_rejected(self):
        trips = synth_triplets(0, 40)
        trips[3] = ([], [5, 6], [7, 8])
        with pytest.raises(ValueError):
            toy_train(trips, ToyConfig(steps=5, seed=1, **CFG))

    def test_curve_covers_every_step(self):
        enc = toy_train(synth_triplets(0, 100), ToyConfig(steps=25, seed=1, **CFG))
        assert [s for s, _ in enc.curve] == list(range(1, 26))
        assert all(np.isfinite(v) for _, v in enc.curve)

    def test_held_out_positives_beat_negatives(self):
        trips = synth_triplets(5, 400)
        enc = toy_train(trips[:320], ToyConfig(steps=200, seed=1, **CFG))
        held = trips[320:]
        sim_pos = np.mean([_cos(enc.embed(a), enc.embed(p)) for a, p, _ in held])
        sim_neg = np.mean([_cos(enc.embed(a), enc.embed(n)) for a, _, n in held])
        assert sim_pos > sim_neg


class TestEncoderApi:
    def test_embed_empty_sequence_rejected(self):
        cfg = ToyConfig(vocab_size=8, d=4)
        enc = ToyEncoder(np.zeros((8, 4)), np.eye(4), cfg)
        with pytest.raises(ValueError):
            enc.embed([])

    def test_embed_many_stacks_rows(self):
        cfg = ToyConfig(vocab_size=8, d=4)
        table = np.arange(32, dtype=float).reshape(8, 4)
        enc = ToyEncoder(table, np.eye(4), cfg)
        out = enc.embed_many([[0, 1], [2]])
        assert out.shape == (2, 4)
        assert np.array_equal(out[1], table[2])

    def test_shape_mismatch_rejected(self):
        cfg = ToyConfig(vocab_size=8, d=4)
        with pytest.raises(ValueError):
            ToyEncoder(np.zeros((7, 4)), np.eye(4), cfg)
        with pytest.raises(ValueError):
            ToyEncoder(np.zeros((8, 4)), np.eye(3), cfg)


class TestPersistence:
    def test_round_trip_is_exact(self, tmp_path):
        enc = toy_train(synth_triplets(0, 100), ToyConfig(steps=20, seed=4, **CFG))
        path = tmp_path / "toy.npz"
        enc.save(path)
        back = ToyEncoder.load(path)
        assert np.array_equal(back.embeddings, enc.embeddings)
        assert np.array_equal(back.projection, enc.projection)
        assert back.config == enc.config
        assert back.curve == enc.curve

    def test_curve_csv_round_trips_losses(self, tmp_path):
        enc = toy_train(synth_triplets(0, 100), ToyConfig(steps=10, seed=4, **CFG))
        path = tmp_path / "curve.csv"
        enc.save_curve(path)
        lines = path.read_text().splitlines()
        assert lines[0] == "step,clr_loss"
        assert len(lines) == 11
        step, value = lines[3].split(",")
        assert (int(step), float(value)) == enc.curve[2]
