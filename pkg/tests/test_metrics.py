"""Retrieval metrics against brute-force oracles and hand-worked cases."""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from cloneforge.metrics import (
    GroupTooSmall,
    RetrievalDataset,
    map_at_r,
    mrr,
    pca_project,
    prf1,
    read_embeddings,
    write_embeddings,
    zero_shot_study,
)

from .oracles import brute_force_map_at_r, brute_force_mrr, cosine, svd_pca


def _circle_items(angle_by_id, group_by_id):
    return [
        (i, [math.cos(math.radians(a)), math.sin(math.radians(a))], group_by_id[i])
        for i, a in angle_by_id.items()
    ]


def _random_dataset(rng, n_groups, group_size, dim, r):
    n = n_groups * group_size
    vecs = rng.normal(size=(n, dim))
    items = [(i, vecs[i].tolist(), i // group_size) for i in range(n)]
    return RetrievalDataset(items, r=r)


class TestRetrievalDataset:
    def test_duplicate_ids_rejected(self):
        with pytest.raises(ValueError):
            RetrievalDataset([(1, [1.0], "a"), (1, [2.0], "a")], r=1)

    def test_dimension_mismatch_rejected(self):
        with pytest.raises(ValueError):
            RetrievalDataset([(1, [1.0], "a"), (2, [1.0, 2.0], "a")], r=1)

    def test_zero_vector_rejected(self):
        with pytest.raises(ValueError):
            RetrievalDataset([(1, [0.0], "a"), (2, [1.0], "a")], r=1)

    def test_bad_r_rejected(self):
        with pytest.raises(ValueError):
            RetrievalDataset([(1, [1.0], "a"), (2, [1.0], "a")], r=0)


class TestMapAtR:
    def test_perfect_clusters_score_one(self):
        items = []
        for g, angle in enumerate((0.0, 90.0, 200.0)):
            vec = [math.cos(math.radians(angle)), math.sin(math.radians(angle))]
            items += [(g * 4 + k, list(vec), g) for k in range(4)]
        assert map_at_r(RetrievalDataset(items, r=3)) == 1.0

    def test_hand_worked_interleaved_groups(self):
        # two groups interleaved on the unit circle, scored at r=2;
        # per-query average precisions: 0.5, 0.5, 0, 0.5, 0.5, 0.25
        angles = {0: 0, 1: 10, 2: 45, 3: 22, 4: 30, 5: 62}
        groups = {0: "A", 1: "A", 2: "A", 3: "B", 4: "B", 5: "B"}
        ds = RetrievalDataset(_circle_items(angles, groups), r=2)
        assert map_at_r(ds) == pytest.approx(0.375, abs=1e-12)

    def test_identical_vectors_resolve_by_id_with_self_excluded(self):
        # every cosine ties at 1.0: ranking is pure id order minus self.
        # queries 0/1 then see a same-group item first (AP 1), queries
        # 2/3 see id 0 from the other group first (AP 0).
        items = [(i, [1.0, 0.0], "X" if i < 2 else "Y") for i in range(4)]
        assert map_at_r(RetrievalDataset(items, r=1)) == 0.5

    def test_matches_brute_force_on_small_datasets(self):
        rng = np.random.default_rng(29)
        for _ in range(25):
            n_groups = int(rng.integers(2, 5))
            size = int(rng.integers(3, 7))
            r = size - 1
            ds = _random_dataset(rng, n_groups, size, int(rng.integers(2, 10)), r)
            mine = map_at_r(ds)
            ref = brute_force_map_at_r(
                [v for _, v, _ in ds.items], [g for _, _, g in ds.items], r
            )
            assert mine == pytest.approx(ref, abs=1e-12)

    def test_matches_brute_force_at_two_hundred_items(self):
        rng = np.random.default_rng(31)
        ds = _random_dataset(rng, 8, 25, 12, r=24)
        assert len(ds.items) == 200
        ref = brute_force_map_at_r(
            [v for _, v, _ in ds.items], [g for _, _, g in ds.items], 24
        )
        assert map_at_r(ds) == pytest.approx(ref, abs=1e-12)

    def test_random_embeddings_sit_near_chance_baseline(self):
        # analytic expectation for a uniformly random ranking at r,
        # derived from exchangeability of candidate positions
        n_groups, size, r = 4, 6, 5
        n = n_groups * size
        p = r / (n - 1)
        q = (r - 1) / (n - 2)
        expected = p / r * sum((1 + (i - 1) * q) / i for i in range(1, r + 1))
        rng = np.random.default_rng(17)
        vals = [
            map_at_r(_random_dataset(rng, n_groups, size, 16, r)) for _ in range(200)
        ]
        assert float(np.mean(vals)) == pytest.approx(expected, abs=0.01)

    def test_invariant_under_rescaling_and_relabeling(self):
        rng = np.random.default_rng(37)
        ds = _random_dataset(rng, 3, 4, 8, r=3)
        base = map_at_r(ds)
        scaled = RetrievalDataset(
            [(i, [x * 37.5 for x in v], g) for i, v, g in ds.items], r=3
        )
        relabeled = RetrievalDataset(
            [(i, v, f"team-{g}") for i, v, g in ds.items], r=3
        )
        assert map_at_r(scaled) == pytest.approx(base, abs=1e-12)
        assert map_at_r(relabeled) == base

    def test_small_group_rejected_with_name(self):
        items = [(i, [float(i + 1), 1.0], "big") for i in range(5)]
        items += [(9, [1.0, -1.0], "tiny"), (10, [1.0, -2.0], "tiny")]
        with pytest.raises(GroupTooSmall, match="tiny"):
            map_at_r(RetrievalDataset(items, r=3))


class TestMrr:
    def test_relevant_always_first(self):
        assert mrr([[True, False], [True], [True, False, False]]) == 1.0

    def test_mixed_ranks(self):
        queries = [
            [True, False, False, False],
            [False, True, False, False],
            [False, False, False, True],
        ]
        assert mrr(queries) == pytest.approx((1 + 0.5 + 0.25) / 3, rel=1e-12)

    def test_requires_exactly_one_relevant(self):
        with pytest.raises(ValueError):
            mrr([[False, False]])
        with pytest.raises(ValueError):
            mrr([[True, True]])
        with pytest.raises(ValueError):
            mrr([])

    def test_padding_below_relevant_changes_nothing(self):
        base = [[False, True, False]]
        assert mrr(base) == mrr([[False, True, False, False, False]])

    def test_matches_brute_force_on_paired_groups(self):
        # items grouped in pairs: one relevant partner per query, so the
        # pre-ranked lists and the embedding oracle agree exactly
        rng = np.random.default_rng(41)
        vecs = rng.normal(size=(12, 6))
        groups = [i // 2 for i in range(12)]
        ranked = []
        for q in range(12):
            order = sorted(
                (i for i in range(12) if i != q),
                key=lambda i: (-cosine(vecs[q], vecs[i]), i),
            )
            ranked.append([groups[i] == groups[q] for i in order])
        assert mrr(ranked) == brute_force_mrr(vecs.tolist(), groups)


class TestPrf1:
    def test_perfect_counts(self):
        out = prf1(tp=5, fp=0, tn=3, fn=0)
        assert (out.precision, out.recall, out.f1, out.accuracy) == (1.0, 1.0, 1.0, 1.0)
        assert not out.degenerate

    def test_no_positive_predictions_flagged(self):
        out = prf1(tp=0, fp=0, tn=4, fn=2)
        assert out.precision == 0.0 and out.f1 == 0.0
        assert out.degenerate

    def test_spot_values(self):
        out = prf1(tp=47, fp=52, tn=0, fn=49)
        assert out.precision == pytest.approx(0.4747, abs=1e-4)
        assert out.recall == pytest.approx(0.4896, abs=1e-4)
        assert out.f1 == pytest.approx(0.4820, abs=1e-4)

    def test_negative_counts_rejected(self):
        with pytest.raises(ValueError):
            prf1(tp=-1, fp=0, tn=0, fn=0)


class TestZeroShotStudy:
    def test_identity_encoder_on_duplicate_clones(self):
        rng = np.random.default_rng(43)
        trips = []
        for _ in range(100):
            x = rng.normal(size=6)
            trips.append((tuple(x), tuple(x), tuple(rng.normal(size=6))))
        study = zero_shot_study(lambda v: np.asarray(v), trips)
        assert study.avg_clone_sim == pytest.approx(1.0, abs=1e-12)

    def test_orthogonal_encoder_zeroes_similarities(self):
        n = 40
        eye = np.eye(3 * n)
        trips = [(3 * i, 3 * i + 1, 3 * i + 2) for i in range(n)]
        study = zero_shot_study(lambda i: eye[i], trips, min_triplets=n)
        assert study.avg_clone_sim == 0.0
        assert study.avg_deviant_sim == 0.0
        assert study.avg_random_sim == 0.0

    def test_percentages_partition_to_hundred(self):
        rng = np.random.default_rng(47)
        trips = [tuple(rng.normal(size=(3, 8))) for _ in range(120)]
        study = zero_shot_study(lambda v: np.asarray(v), trips)
        assert sum(study.top1_counts.values()) == pytest.approx(100.0, abs=1e-9)
        assert set(study.top1_counts) == {"clone", "deviant", "random"}

    def test_well_separated_encoder_orders_similarities(self):
        rng = np.random.default_rng(53)
        trips = []
        for _ in range(150):
            x = rng.normal(size=10)
            clone = x + rng.normal(scale=0.05, size=10)
            deviant = x + rng.normal(scale=0.8, size=10)
            trips.append((tuple(x), tuple(clone), tuple(deviant)))
        study = zero_shot_study(lambda v: np.asarray(v), trips)
        assert study.avg_clone_sim > study.avg_deviant_sim > study.avg_random_sim
        assert study.top1_counts["clone"] > 80.0

    def test_own_deviant_is_a_valid_candidate(self):
        # every query's nearest pool item is its own deviant, which only
        # counts if own counterparts stay in the candidate pool
        rng = np.random.default_rng(59)
        trips = []
        for _ in range(100):
            x = rng.normal(size=8)
            trips.append((tuple(x), tuple(-x), tuple(x * 2.0)))
        study = zero_shot_study(lambda v: np.asarray(v), trips)
        assert study.top1_counts["deviant"] == 100.0

    def test_too_few_triplets_rejected(self):
        trips = [((1.0, 0.0), (1.0, 0.1), (0.0, 1.0))] * 99
        with pytest.raises(ValueError):
            zero_shot_study(lambda v: np.asarray(v), trips)
        zero_shot_study(lambda v: np.asarray(v), trips, min_triplets=50)


class TestPcaProject:
    def test_collinear_points_load_on_first_component(self):
        points = [[t, 2 * t, -t] for t in np.linspace(-3, 3, 12)]
        coords, ratios = pca_project(points, k=2)
        assert ratios[0] == pytest.approx(1.0, abs=1e-12)
        assert ratios[1] == pytest.approx(0.0, abs=1e-12)
        assert np.abs(coords[:, 1]).max() < 1e-9

    def test_isotropic_cloud_spreads_variance(self):
        rng = np.random.default_rng(61)
        coords, ratios = pca_project(rng.normal(size=(4000, 3)), k=3)
        assert all(0.25 < r < 0.42 for r in ratios)

    def test_distances_match_svd_implementation(self):
        rng = np.random.default_rng(67)
        points = rng.normal(size=(40, 7))
        mine, _ = pca_project(points, k=3)
        ref = svd_pca(points, k=3)

        def pairwise(m):
            return np.linalg.norm(m[:, None, :] - m[None, :, :], axis=2)

        assert_allclose(pairwise(mine), pairwise(ref), atol=1e-8)

    def test_sign_convention_and_determinism(self):
        rng = np.random.default_rng(71)
        points = rng.normal(size=(30, 5))
        a, ra = pca_project(points, k=2)
        b, rb = pca_project(points, k=2)
        assert np.array_equal(a, b) and np.array_equal(ra, rb)
        flipped, _ = pca_project(points * -1.0, k=2)
        assert_allclose(np.abs(flipped), np.abs(a), atol=1e-10)

    def test_too_few_points_rejected(self):
        with pytest.raises(ValueError):
            pca_project([[1.0, 2.0], [2.0, 3.0]], k=2)


class TestEmbeddingFiles:
    def test_round_trip_preserves_order_and_values(self, tmp_path):
        rng = np.random.default_rng(73)
        items = [
            (f"fn-{i}", rng.normal(size=4).tolist(), f"g{i % 3}") for i in range(9)
        ]
        path = tmp_path / "embeddings.jsonl"
        write_embeddings(path, items)
        back = read_embeddings(path)
        assert back == items
