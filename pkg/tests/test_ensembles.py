import numpy as np
import pytest
import scipy.stats

from cmvkit.core import VerblunskySet
from cmvkit.ensembles import (
    EnsembleSpec,
    RngStream,
    eigenvalue_samples,
    gibbs_log_density,
    ks_statistic,
    random_verblunsky,
    sample_beta_interval,
    sample_circular_beta,
    sample_hermite_beta,
    sample_jacobi_beta,
    sample_theta,
)
from cmvkit.errors import DomainViolation, EmptySample, InvalidNu, InvalidParams

from reference import cdf_from_density


class TestRngStream:
    def test_reproducible(self):
        a = RngStream(123, 4).generator().random(8)
        b = RngStream(123, 4).generator().random(8)
        assert np.array_equal(a, b)

    def test_streams_differ(self):
        a = RngStream(123, 0).generator().random(8)
        b = RngStream(123, 1).generator().random(8)
        assert not np.array_equal(a, b)


class TestThetaSampler:
    def test_nu_one_is_unimodular(self):
        gen = RngStream(0).generator()
        z = np.array([sample_theta(1.0, gen) for _ in range(200)])
        assert np.abs(np.abs(z) - 1.0).max() < 1e-12

    def test_nu_three_uniform_disk(self):
        # exponent (nu-3)/2 vanishes, so |z|^2 is uniform on [0, 1]
        gen = RngStream(1).generator()
        z = np.array([sample_theta(3.0, gen) for _ in range(20000)])
        d = ks_statistic(np.sort(np.abs(z) ** 2), lambda s: np.clip(s, 0.0, 1.0))
        assert d < 0.015

    def test_nu_five_second_moment(self):
        gen = RngStream(2).generator()
        z = np.array([sample_theta(5.0, gen) for _ in range(40000)])
        second = (np.abs(z) ** 2).mean()
        assert abs(second - 1.0 / 3.0) < 0.01

    def test_matches_sphere_construction(self):
        # v uniform on the nu-sphere in R^(nu+1): v_1 + i v_2 has the same law
        for nu in (2, 3, 6):
            gen = RngStream(nu).generator()
            count = 100000
            z = np.abs(_theta_block(nu, count, gen)) ** 2
            vec = gen.standard_normal((count, nu + 1))
            vec /= np.linalg.norm(vec, axis=1, keepdims=True)
            w = vec[:, 0] ** 2 + vec[:, 1] ** 2
            stat = scipy.stats.ks_2samp(z, w).statistic
            assert stat < 0.01, (nu, stat)

    def test_invalid_nu(self):
        with pytest.raises(InvalidNu):
            sample_theta(0.5, RngStream(0))


def _theta_block(nu, count, gen):
    from cmvkit.ensembles import _disk_samples

    return _disk_samples(float(nu), count, gen)


class TestBetaInterval:
    def test_uniform_case(self):
        gen = RngStream(3).generator()
        x = np.sort([sample_beta_interval(1.0, 1.0, gen) for _ in range(20000)])
        assert ks_statistic(x, lambda s: (s + 1.0) / 2.0) < 0.015

    def test_symmetric_mean(self):
        gen = RngStream(4).generator()
        x = np.array([sample_beta_interval(3.0, 3.0, gen) for _ in range(20000)])
        assert abs(x.mean()) < 0.01

    def test_skewed_mean(self):
        gen = RngStream(5).generator()
        x = np.array([sample_beta_interval(2.0, 1.0, gen) for _ in range(40000)])
        assert abs(x.mean() + 1.0 / 3.0) < 0.01

    def test_density_shape(self):
        gen = RngStream(6).generator()
        x = np.sort([sample_beta_interval(2.5, 1.7, gen) for _ in range(30000)])
        cdf = cdf_from_density(lambda t: (1 - t) ** 1.5 * (1 + t) ** 0.7, -1.0, 1.0)
        assert ks_statistic(x, cdf) < 0.015

    def test_invalid_params(self):
        with pytest.raises(InvalidParams):
            sample_beta_interval(0.0, 1.0, RngStream(0))


class TestCoefficientModels:
    def test_circular_shapes(self):
        v = sample_circular_beta(4, 2.0, RngStream(7))
        assert isinstance(v, VerblunskySet) and v.n == 4
        assert abs(abs(v.alpha[-1]) - 1.0) < 1e-12
        assert np.abs(v.alpha[:-1]).max() < 1.0

    def test_circular_first_coefficient_law(self):
        # n = 2, beta = 2: alpha_0 has nu = 3, so |alpha_0|^2 is uniform
        gen = RngStream(8).generator()
        mods = np.array([abs(sample_circular_beta(2, 2.0, gen).alpha[0]) ** 2 for _ in range(20000)])
        assert ks_statistic(np.sort(mods), lambda s: np.clip(s, 0, 1)) < 0.015

    def test_jacobi_single_site(self):
        j = sample_jacobi_beta(1, 2.0, 0.0, 0.0, RngStream(9))
        assert j.n == 1 and abs(j.b[0]) < 2.0

    def test_jacobi_offdiagonals_positive(self):
        gen = RngStream(10).generator()
        for _ in range(50):
            j = sample_jacobi_beta(3, 1.0, -0.5, 3.0, gen)
            assert j.a.min() > 0.0

    def test_jacobi_coefficient_moments(self):
        # n=2, beta=2, a=b=0 coefficient laws on (-1,1): means 0, -1/3, 0
        gen = RngStream(11).generator()
        from cmvkit.ensembles import _beta_interval_samples, _jacobi_shapes

        shapes = _jacobi_shapes(2, 2.0, 0.0, 0.0)
        assert shapes == [(2.0, 2.0), (2.0, 1.0), (1.0, 1.0)]
        means = [(t - s) / (s + t) for s, t in shapes]
        draws = np.array([[_beta_interval_samples(s, t, None, gen) for s, t in shapes] for _ in range(20000)])
        assert np.abs(draws.mean(axis=0) - means).max() < 0.02

    def test_hermite_positive_offdiagonal(self):
        j = sample_hermite_beta(6, 0.7, RngStream(12))
        assert j.a.min() > 0.0

    def test_hermite_single_site_gaussian(self):
        gen = RngStream(13).generator()
        x = np.sort([sample_hermite_beta(1, 2.0, gen).b[0] for _ in range(20000)])
        assert ks_statistic(x, scipy.stats.norm.cdf) < 0.015

    def test_invalid(self):
        with pytest.raises(InvalidParams):
            sample_jacobi_beta(2, 2.0, -1.5, 0.0, RngStream(0))
        with pytest.raises(InvalidParams):
            sample_hermite_beta(2, 0.0, RngStream(0))


class TestEigenvalueSamples:
    def test_deterministic(self):
        spec = EnsembleSpec("hermite", 3, 2.0)
        a = eigenvalue_samples(spec, 17, RngStream(14, 2))
        b = eigenvalue_samples(spec, 17, RngStream(14, 2))
        assert np.array_equal(a, b)

    def test_rows_sorted(self):
        spec = EnsembleSpec("circular", 3, 1.0)
        rows = eigenvalue_samples(spec, 64, RngStream(15))
        assert np.all(np.diff(rows, axis=1) >= 0.0)
        assert rows.min() > -np.pi and rows.max() <= np.pi

    def test_circular_single_site_uniform(self):
        spec = EnsembleSpec("circular", 1, 2.0)
        ang = np.sort(eigenvalue_samples(spec, 50000, RngStream(16))[:, 0])
        assert ks_statistic(ang, lambda s: (s + np.pi) / (2 * np.pi)) < 0.01

    def test_batch_matches_per_draw_law(self):
        # same seed gives different draw orders but identical distributions
        spec = EnsembleSpec("jacobi", 2, 2.0, 0.0, 0.0)
        batch = eigenvalue_samples(spec, 30000, RngStream(17)).reshape(-1)
        gen = RngStream(18).generator()
        single = np.concatenate(
            [np.linalg.eigvalsh(sample_jacobi_beta(2, 2.0, 0.0, 0.0, gen).to_dense()) for _ in range(3000)]
        )
        assert scipy.stats.ks_2samp(batch, single).statistic < 0.025


class TestGibbsLogDensity:
    def test_circular_two_points(self):
        val = gibbs_log_density(EnsembleSpec("circular", 2, 3.0), [0.0, np.pi])
        assert abs(val - 3.0 * np.log(2.0)) < 1e-14

    def test_hermite_origin(self):
        assert gibbs_log_density(EnsembleSpec("hermite", 1, 2.0), [0.0]) == 0.0

    def test_jacobi_flat_exponents(self):
        spec = EnsembleSpec("jacobi", 1, 2.0, 0.0, 0.0)
        vals = [gibbs_log_density(spec, [x]) for x in (-1.5, 0.0, 1.9)]
        assert np.abs(np.diff(vals)).max() == 0.0

    def test_jacobi_domain(self):
        with pytest.raises(DomainViolation):
            gibbs_log_density(EnsembleSpec("jacobi", 1, 2.0, 0.0, 0.0), [2.5])


class TestKsStatistic:
    def test_single_sample_at_median(self):
        assert ks_statistic([0.0], lambda s: np.full_like(np.asarray(s, dtype=float), 0.5)) == 0.5

    def test_empty(self):
        with pytest.raises(EmptySample):
            ks_statistic([], lambda s: s)

    def test_unsorted_rejected(self):
        with pytest.raises(InvalidParams):
            ks_statistic([1.0, 0.0], lambda s: s)

    def test_nonmonotone_cdf_rejected(self):
        with pytest.raises(InvalidParams):
            ks_statistic([0.1, 0.2, 0.9], lambda s: 1.0 - np.asarray(s))

    def test_out_of_unit_range_rejected(self):
        with pytest.raises(InvalidParams):
            ks_statistic([0.5], lambda s: np.asarray(s) + 2.0)

    def test_self_consistency(self):
        gen = RngStream(19).generator()
        x = np.sort(gen.random(100000))
        assert ks_statistic(x, lambda s: np.clip(s, 0, 1)) < 0.01


class TestRandomVerblunsky:
    def test_radius_respected(self):
        v = random_verblunsky(6, RngStream(20), radius=0.5)
        assert np.abs(v.interior).max() <= 0.5

    def test_separation_respected(self):
        import numpy.linalg as la

        from cmvkit.core import build_cmv

        v = random_verblunsky(5, RngStream(21), min_separation=0.4)
        th = np.sort(np.angle(la.eigvals(np.asarray(build_cmv(v).entries))))
        gaps = np.concatenate([np.diff(th), [th[0] + 2 * np.pi - th[-1]]])
        assert gaps.min() > 0.4
