import numpy as np
import pytest

from asbsr.masks import ShapeSpec, make_shape_mask
from asbsr.reconstruction import (
    ReconOptions,
    init_interpolate,
    reconstruct_bs,
    reconstruct_klargest_1d,
)
from asbsr.sampling import SampleSet, make_grid, prefilter, take_samples
from asbsr.transforms import dct2, idct1

from synth import band_limited_image


def _opts(iters, **kw):
    kw.setdefault("plateau_window", 10 ** 9)  # disable plateau unless asked
    return ReconOptions(max_iterations=iters, **kw)


class TestInitInterpolate:
    def test_samples_at_every_pixel_reproduce_the_image(self):
        rng = np.random.default_rng(0)
        image = rng.uniform(0, 255, size=(7, 9))
        samples = take_samples(image, make_grid("pseudorandom", 7, 9, 63, seed=0))
        assert np.array_equal(init_interpolate(samples), image)

    def test_single_sample_fills_constant(self):
        samples = SampleSet(5, 5, np.array([[2, 3]]), np.array([42.0]))
        assert np.array_equal(init_interpolate(samples), np.full((5, 5), 42.0))

    def test_three_samples_match_hand_computed_weights(self):
        positions = np.array([[0, 0], [0, 4], [4, 2]])
        values = np.array([10.0, 50.0, 90.0])
        samples = SampleSet(5, 5, positions, values)
        out = init_interpolate(samples)
        for probe in [(1, 1), (3, 3)]:
            dists = np.hypot(positions[:, 0] - probe[0], positions[:, 1] - probe[1])
            weights = 1.0 / dists
            expected = float((weights * values).sum() / weights.sum())
            assert out[probe] == pytest.approx(expected, abs=1e-12)

    def test_sampled_positions_keep_exact_values(self):
        rng = np.random.default_rng(1)
        image = rng.uniform(0, 255, size=(12, 12))
        positions = make_grid("pseudorandom", 12, 12, 20, seed=2)
        samples = take_samples(image, positions)
        out = init_interpolate(samples)
        assert np.array_equal(out[positions[:, 0], positions[:, 1]], samples.values)

    def test_linear_in_sample_values(self):
        positions = make_grid("pseudorandom", 10, 10, 15, seed=3)
        rng = np.random.default_rng(4)
        v1, v2 = rng.normal(size=(2, 15))
        mix = init_interpolate(SampleSet(10, 10, positions, 2.0 * v1 - 0.5 * v2))
        separate = (2.0 * init_interpolate(SampleSet(10, 10, positions, v1))
                    - 0.5 * init_interpolate(SampleSet(10, 10, positions, v2)))
        assert np.abs(mix - separate).max() < 1e-9


class TestReconstructBs:
    def test_band_limited_image_fully_sampled_is_fixed_point(self):
        mask = make_shape_mask(ShapeSpec("pie_sector", 0.25), 32, 32)
        image = band_limited_image(32, mask, seed=1)
        samples = take_samples(image, make_grid("jittered", 32, 32, 1024, seed=0))
        out, report = reconstruct_bs(samples, mask, reference=image, opts=_opts(1))
        assert report.iterations_run == 1
        assert report.rmse_all_trace[0] < 1e-9
        assert np.abs(out - image).max() < 1e-9

    def test_output_spectrum_zero_outside_mask(self):
        mask = make_shape_mask(ShapeSpec("ellipse", 0.2), 24, 24)
        image = band_limited_image(24, mask, seed=2)
        samples = take_samples(image, make_grid("pseudorandom", 24, 24, 200, seed=1))
        out, _ = reconstruct_bs(samples, mask, opts=_opts(20))
        assert np.abs(dct2(out)[~mask]).max() < 1e-9

    def test_superposition_in_sample_values(self):
        mask = make_shape_mask(ShapeSpec("pie_sector", 0.25), 24, 24)
        positions = make_grid("jittered", 24, 24, 180, seed=5)
        rng = np.random.default_rng(6)
        v1, v2 = rng.uniform(0, 255, size=(2, 180))
        a, b = 1.3, -0.7
        opts = _opts(25)
        r_mix, _ = reconstruct_bs(SampleSet(24, 24, positions, a * v1 + b * v2), mask, opts=opts)
        r1, _ = reconstruct_bs(SampleSet(24, 24, positions, v1), mask, opts=opts)
        r2, _ = reconstruct_bs(SampleSet(24, 24, positions, v2), mask, opts=opts)
        scale = np.abs(r_mix).max()
        assert np.abs(r_mix - (a * r1 + b * r2)).max() / scale < 1e-9

    def test_rmse_trace_non_increasing_on_prefiltered_input(self):
        mask = make_shape_mask(ShapeSpec("pie_sector", 0.25), 48, 48)
        image = band_limited_image(48, mask, seed=3)
        samples = take_samples(image, make_grid("jittered", 48, 48, 700, seed=2))
        _, report = reconstruct_bs(samples, mask, reference=image, opts=_opts(150))
        trace = np.array(report.rmse_all_trace)
        assert np.all(np.diff(trace) <= 1e-6)

    def test_rmse90_trace_below_rmse_all_trace(self):
        mask = make_shape_mask(ShapeSpec("triangle", 0.3), 32, 32)
        image = band_limited_image(32, mask, seed=4)
        samples = take_samples(image, make_grid("pseudorandom", 32, 32, 400, seed=3))
        _, report = reconstruct_bs(samples, mask, reference=image, opts=_opts(60))
        assert all(r90 <= rall + 1e-12 for r90, rall
                   in zip(report.rmse_90_trace, report.rmse_all_trace))

    def test_stop_on_target_rmse(self):
        mask = make_shape_mask(ShapeSpec("pie_sector", 0.25), 32, 32)
        image = band_limited_image(32, mask, seed=5)
        samples = take_samples(image, make_grid("jittered", 32, 32, 350, seed=4))
        _, report = reconstruct_bs(samples, mask, reference=image,
                                   opts=_opts(500, stop_rmse=1.0))
        assert report.stop_reason == "target_rmse"
        assert report.converged
        assert report.rmse_all_trace[-1] <= 1.0
        assert report.iterations_run < 500

    def test_plateau_stop_without_reference(self):
        # oversampled run: the sample-mismatch residual hits the float floor
        # quickly, after which the relative improvement vanishes
        mask = make_shape_mask(ShapeSpec("pie_sector", 0.25), 32, 32)
        image = band_limited_image(32, mask, seed=6)
        samples = take_samples(image, make_grid("jittered", 32, 32, 800, seed=5))
        opts = ReconOptions(max_iterations=2000, plateau_window=30, plateau_epsilon=1e-4)
        _, report = reconstruct_bs(samples, mask, opts=opts)
        assert report.stop_reason == "plateau"
        assert report.iterations_run < 2000
        assert report.rmse_all_trace == []  # no reference, no traces

    def test_trace_lengths_match_iterations(self):
        mask = make_shape_mask(ShapeSpec("pie_sector", 0.25), 16, 16)
        image = band_limited_image(16, mask, seed=7)
        samples = take_samples(image, make_grid("jittered", 16, 16, 80, seed=6))
        _, report = reconstruct_bs(samples, mask, reference=image, opts=_opts(13))
        assert report.iterations_run == 13
        assert len(report.rmse_all_trace) == 13
        assert len(report.rmse_90_trace) == 13

    def test_rejects_mask_dimension_mismatch(self):
        samples = SampleSet(8, 8, np.array([[0, 0]]), np.array([1.0]))
        with pytest.raises(ValueError, match="does not match"):
            reconstruct_bs(samples, np.ones((8, 9), dtype=bool))


class TestKLargest1D:
    def _sparse_signal(self, n, indices):
        coeffs = np.zeros(n)
        coeffs[list(indices)] = 1.0
        return idct1(coeffs)

    def test_fully_sampled_sparse_signal_exact_at_first_iteration(self):
        n = 64
        signal = self._sparse_signal(n, [3, 11, 30])
        out, report = reconstruct_klargest_1d(np.arange(n), signal, 3, n, _opts(1))
        assert report.iterations_run == 1
        assert np.abs(out - signal).max() < 1e-12

    def test_benchmark_regime_recovers_near_exactly(self):
        n, k, m = 256, 3, 38
        indices = [round(f * (n - 1)) for f in (0.1, 0.3, 0.5)]
        signal = self._sparse_signal(n, indices)
        rng = np.random.default_rng(12)
        positions = rng.choice(n, size=m, replace=False)
        out, report = reconstruct_klargest_1d(
            positions, signal[positions], k, n, _opts(50), reference=signal)
        assert report.rmse_all_trace[-1] < 1e-6

    def test_plain_replacement_gain_also_converges_here(self):
        n, k, m = 256, 3, 38
        indices = [round(f * (n - 1)) for f in (0.1, 0.3, 0.5)]
        signal = self._sparse_signal(n, indices)
        rng = np.random.default_rng(0)
        positions = rng.choice(n, size=m, replace=False)
        _, report = reconstruct_klargest_1d(
            positions, signal[positions], k, n, _opts(300),
            reference=signal, relaxation=1.0)
        assert report.rmse_all_trace[-1] < 1e-3

    def test_too_few_samples_misdetects_and_stagnates(self):
        n, k, m = 256, 3, 8
        indices = [round(f * (n - 1)) for f in (0.1, 0.3, 0.5)]
        signal = self._sparse_signal(n, indices)
        rng = np.random.default_rng(1002)
        positions = rng.choice(n, size=m, replace=False)
        out, report = reconstruct_klargest_1d(
            positions, signal[positions], k, n, _opts(60), reference=signal)
        trace = np.array(report.rmse_all_trace)
        assert trace[-1] > 1e-2  # never recovers
        # the dominant coefficients of the result miss true components
        from asbsr.transforms import dct1

        detected = set(np.argsort(-np.abs(dct1(out)))[:k].tolist())
        assert detected != set(indices)
        assert trace[-1] >= trace[20] * 0.5  # no meaningful late progress

    def test_rejects_k_above_sample_count(self):
        with pytest.raises(ValueError, match="k <= m"):
            reconstruct_klargest_1d(np.array([1, 5]), np.zeros(2), 3, 16)

    def test_rejects_duplicate_positions(self):
        with pytest.raises(ValueError, match="distinct"):
            reconstruct_klargest_1d(np.array([1, 1, 5]), np.zeros(3), 2, 16)
