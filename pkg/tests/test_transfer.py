import numpy as np
import pytest

from otalign import (
    DomainError,
    FeatureSequence,
    FusionWeights,
    ShapeError,
    alignment_loss,
    fuse_representation,
    project,
    total_loss,
)

from helpers import rand_features


class TestProject:
    def test_identity_plan_is_exact(self):
        rng = np.random.default_rng(61)
        feats = rand_features(rng, 4, 6)
        plan = np.eye(4) / 4.0
        out = project(plan, feats, mode="barycentric")
        assert np.array_equal(out.values, feats.values)

    def test_identity_plan_odd_size(self):
        rng = np.random.default_rng(62)
        feats = rand_features(rng, 3, 5)
        out = project(np.eye(3) / 3.0, feats, mode="barycentric")
        assert np.max(np.abs(out.values - feats.values)) <= 1e-15

    def test_two_to_one_average(self):
        u = np.array([1.0, 0.0, 2.0])
        v = np.array([0.0, 3.0, -1.0])
        feats = FeatureSequence(np.stack([u, v]))
        out = project(np.array([[0.5], [0.5]]), feats, mode="barycentric")
        assert np.max(np.abs(out.values[0] - (u + v) / 2.0)) <= 1e-15

    def test_raw_is_scaled_barycentric_under_uniform_columns(self):
        rng = np.random.default_rng(63)
        feats = rand_features(rng, 8, 4)
        from helpers import rand_plan

        plan = rand_plan(rng, 8, 4)
        raw = project(plan, feats, mode="raw").values
        barycentric = project(plan, feats, mode="barycentric").values
        assert np.max(np.abs(raw - barycentric / 4.0)) <= 1e-12

    def test_constant_rows_map_to_same_constant(self):
        u = np.array([0.5, -1.0, 2.0])
        feats = FeatureSequence(np.tile(u, (6, 1)))
        from helpers import rand_plan

        plan = rand_plan(np.random.default_rng(64), 6, 3)
        out = project(plan, feats, mode="barycentric")
        assert np.max(np.abs(out.values - u[None, :])) <= 1e-12

    def test_row_count_mismatch_rejected(self):
        rng = np.random.default_rng(65)
        with pytest.raises(ShapeError):
            project(np.eye(3) / 3.0, rand_features(rng, 4))

    def test_zero_column_rejected_in_barycentric_mode(self):
        rng = np.random.default_rng(66)
        feats = rand_features(rng, 2, 3)
        plan = np.array([[0.5, 0.0], [0.5, 0.0]])
        with pytest.raises(DomainError):
            project(plan, feats, mode="barycentric")

    def test_unknown_mode_rejected(self):
        rng = np.random.default_rng(67)
        with pytest.raises(DomainError):
            project(np.eye(2) / 2.0, rand_features(rng, 2), mode="soft")


class TestAlignmentLoss:
    def test_identical_inputs_loss_exactly_zero(self):
        rng = np.random.default_rng(68)
        target = rand_features(rng, 6, 5)
        assert alignment_loss(target, target) == 0.0

    def test_orthogonal_rows_count_retained(self):
        rows = 6
        projected = FeatureSequence(np.tile([1.0, 0.0], (rows, 1)))
        target = FeatureSequence(np.tile([0.0, 1.0], (rows, 1)))
        assert alignment_loss(projected, target) == float(rows - 2)

    def test_scale_invariance_power_of_two(self):
        rng = np.random.default_rng(69)
        projected = rand_features(rng, 5, 4)
        target = rand_features(rng, 5, 4)
        base = alignment_loss(projected, target)
        scaled = alignment_loss(FeatureSequence(2.0 * projected.values), target)
        assert scaled == base

    def test_scale_invariance_general(self):
        rng = np.random.default_rng(70)
        projected = rand_features(rng, 5, 4)
        target = rand_features(rng, 5, 4)
        base = alignment_loss(projected, target)
        scaled = alignment_loss(FeatureSequence(1.7 * projected.values), target)
        assert scaled == pytest.approx(base, abs=1e-12)

    def test_permutation_invariance_of_retained_rows(self):
        rng = np.random.default_rng(71)
        projected = rand_features(rng, 7, 4)
        target = rand_features(rng, 7, 4)
        base = alignment_loss(projected, target)
        order = np.concatenate([[0], 1 + rng.permutation(5), [6]])
        shuffled = alignment_loss(
            FeatureSequence(projected.values[order]), FeatureSequence(target.values[order])
        )
        assert shuffled == pytest.approx(base, abs=1e-12)

    def test_custom_trims(self):
        projected = FeatureSequence(np.tile([1.0, 0.0], (5, 1)))
        target = FeatureSequence(np.tile([0.0, 1.0], (5, 1)))
        assert alignment_loss(projected, target, trim_head=0, trim_tail=0) == 5.0
        assert alignment_loss(projected, target, trim_head=2, trim_tail=2) == 1.0

    def test_over_trimming_rejected(self):
        rng = np.random.default_rng(72)
        feats = rand_features(rng, 3, 4)
        with pytest.raises(DomainError):
            alignment_loss(feats, feats, trim_head=2, trim_tail=1)

    def test_shape_mismatch_rejected(self):
        rng = np.random.default_rng(73)
        with pytest.raises(ShapeError):
            alignment_loss(rand_features(rng, 4, 3), rand_features(rng, 4, 2))

    def test_zero_norm_retained_row_rejected(self):
        target = FeatureSequence(np.ones((4, 2)))
        bad = np.ones((4, 2))
        bad[2] = 0.0
        with pytest.raises(DomainError):
            alignment_loss(bad, target)


class TestFuseRepresentation:
    def test_zero_scale_returns_encoder_exactly(self):
        rng = np.random.default_rng(74)
        enc = rand_features(rng, 5, 6)
        aligned = rand_features(rng, 5, 4)
        weights = FusionWeights.seeded(4, 6, w_s=0.0, seed=0)
        out = fuse_representation(enc, aligned, weights)
        assert np.array_equal(out.values, enc.values)

    def test_constant_row_normalizes_to_bias_path(self):
        enc = FeatureSequence(np.ones((1, 3)))
        aligned = FeatureSequence(np.full((1, 4), 2.5))
        weights = FusionWeights.seeded(4, 3, w_s=0.1, seed=1)
        out = fuse_representation(enc, aligned, weights)
        # inner layer norm of a constant row is ~0, so only bias3 flows on
        zeros = np.zeros((1, 4))
        inner = zeros @ weights.w3 + weights.bias3[None, :]
        mean = inner.mean(axis=1, keepdims=True)
        var = ((inner - mean) ** 2).mean(axis=1, keepdims=True)
        expected = enc.values + 0.1 * (
            (inner - mean) / np.sqrt(var + weights.eps) * weights.ln_post_gain
            + weights.ln_post_bias
        )
        assert np.max(np.abs(out.values - expected)) <= 1e-10

    def test_update_is_proportional_to_scale(self):
        rng = np.random.default_rng(75)
        enc = rand_features(rng, 4, 5)
        aligned = rand_features(rng, 4, 3)
        one = fuse_representation(enc, aligned, FusionWeights.seeded(3, 5, w_s=1.0, seed=2))
        two = fuse_representation(enc, aligned, FusionWeights.seeded(3, 5, w_s=2.0, seed=2))
        assert np.max(np.abs((two.values - enc.values) - 2.0 * (one.values - enc.values))) <= 1e-12

    def test_deterministic(self):
        rng = np.random.default_rng(76)
        enc = rand_features(rng, 3, 4)
        aligned = rand_features(rng, 3, 5)
        weights = FusionWeights.seeded(5, 4, w_s=0.1, seed=3)
        assert np.array_equal(
            fuse_representation(enc, aligned, weights).values,
            fuse_representation(enc, aligned, weights).values,
        )

    def test_dim_mismatch_rejected(self):
        rng = np.random.default_rng(77)
        enc = rand_features(rng, 3, 4)
        aligned = rand_features(rng, 3, 5)
        with pytest.raises(ShapeError):
            fuse_representation(enc, aligned, FusionWeights.seeded(6, 4, w_s=0.1))

    def test_weight_shapes_validated(self):
        with pytest.raises(ShapeError):
            FusionWeights(
                w3=np.ones((3, 2)),
                bias3=np.ones(3),  # should be length 2
                ln_pre_gain=np.ones(3),
                ln_pre_bias=np.zeros(3),
                ln_post_gain=np.ones(2),
                ln_post_bias=np.zeros(2),
                w_s=0.1,
            )


class TestTotalLoss:
    def test_pure_ctc(self):
        assert total_loss(2.5, 9.0, 9.0, 1.0) == 2.5

    def test_pure_alignment(self):
        assert total_loss(9.0, 2.0, 3.0, 0.0) == 5.0

    def test_reference_mix(self):
        assert total_loss(1.0, 2.0, 3.0, 0.3) == 3.8

    def test_out_of_range_mix_rejected(self):
        with pytest.raises(DomainError):
            total_loss(1.0, 1.0, 1.0, 1.5)

    def test_non_finite_rejected(self):
        with pytest.raises(DomainError):
            total_loss(float("nan"), 1.0, 1.0, 0.3)
        with pytest.raises(DomainError):
            total_loss(1.0, float("inf"), 1.0, 0.3)
