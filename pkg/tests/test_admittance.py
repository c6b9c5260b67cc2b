import numpy as np
import pytest

from rcmteleop.admittance import (AdmittanceConfig, ForceEstimate, LowPassFilter,
                                  admittance_velocity, force_error,
                                  projected_gain, projector, shaft_direction)
from rcmteleop.errors import DegenerateShaftError


def random_unit(rng):
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)


class TestShaftDirection:
    def test_axis_aligned(self):
        assert np.allclose(shaft_direction(np.array([0.0, 0.0, 2.0])), [0, 0, 1])

    def test_three_four_five(self):
        assert np.allclose(shaft_direction(np.array([3.0, 4.0, 0.0])),
                           [0.6, 0.8, 0.0])

    def test_scale_invariance(self):
        rng = np.random.default_rng(1)
        for _ in range(20):
            d = rng.normal(size=3)
            if np.linalg.norm(d) < 1e-2:
                continue
            for c in (0.5, 2.0, 117.0):
                assert np.allclose(shaft_direction(c * d), shaft_direction(d),
                                   atol=1e-12)

    def test_unit_norm(self):
        rng = np.random.default_rng(2)
        for _ in range(50):
            d = rng.normal(size=3) * 0.3
            if np.linalg.norm(d) < 1e-2:
                continue
            assert abs(np.linalg.norm(shaft_direction(d)) - 1.0) < 1e-12

    def test_degenerate(self):
        with pytest.raises(DegenerateShaftError):
            shaft_direction(np.array([0.0, 0.0, 1e-4]))


class TestProjector:
    def test_z_axis(self):
        assert np.allclose(projector(np.array([0.0, 0.0, 1.0])),
                           np.diag([0.0, 0.0, 1.0]))

    def test_eigenstructure(self):
        rng = np.random.default_rng(3)
        n = random_unit(rng)
        om = projector(n)
        assert np.allclose(om @ n, n, atol=1e-12)
        assert np.allclose((np.eye(3) - om) @ n, 0.0, atol=1e-12)

    def test_idempotent_symmetric_unit_trace(self):
        rng = np.random.default_rng(4)
        for _ in range(30):
            om = projector(random_unit(rng))
            assert np.max(np.abs(om @ om - om)) < 1e-12
            assert np.allclose(om, om.T)
            assert np.trace(om) == pytest.approx(1.0, abs=1e-12)

    def test_non_unit_rejected(self):
        with pytest.raises(ValueError):
            projector(np.array([0.0, 0.0, 1.01]))


class TestForceError:
    def test_zero_desired_returns_estimate(self):
        f = np.array([1.0, -2.0, 0.5])
        assert np.array_equal(force_error(f, np.zeros(3)), f)

    def test_matched_forces_cancel(self):
        f = np.array([0.3, 0.3, -0.1])
        assert np.allclose(force_error(f, f), 0.0)

    def test_componentwise(self):
        out = force_error(np.array([1.0, 2.0, 3.0]), np.array([0.5, 0.0, 1.0]))
        assert np.allclose(out, [0.5, 2.0, 2.0])


class TestAdmittanceVelocity:
    def test_axis_aligned_projection(self):
        cfg = AdmittanceConfig(k_adm=0.002)
        om = projector(np.array([0.0, 0.0, 1.0]))
        v = admittance_velocity(cfg, om, np.array([2.0, -1.0, 5.0]))
        assert np.allclose(v, [0.004, -0.002, 0.0], atol=1e-15)

    def test_force_along_shaft_gives_zero(self):
        rng = np.random.default_rng(5)
        n = random_unit(rng)
        v = admittance_velocity(AdmittanceConfig(), projector(n), 3.7 * n)
        assert np.allclose(v, 0.0, atol=1e-12)

    def test_projection_identity_oracle(self):
        # k f - k (n . f) n computed by scalar products
        rng = np.random.default_rng(6)
        cfg = AdmittanceConfig(k_adm=0.013)
        for _ in range(50):
            n = random_unit(rng)
            f = rng.normal(size=3) * 5.0
            want = cfg.k_adm * f - cfg.k_adm * (n @ f) * n
            got = admittance_velocity(cfg, projector(n), f)
            assert np.max(np.abs(got - want)) < 1e-12

    def test_output_orthogonal_to_shaft(self):
        rng = np.random.default_rng(7)
        cfg = AdmittanceConfig(k_adm=0.02)
        for _ in range(100):
            n = random_unit(rng)
            f = rng.normal(size=3) * 10.0
            v = admittance_velocity(cfg, projector(n), f)
            assert abs(n @ v) < 1e-10 * np.linalg.norm(v) + 1e-12

    def test_linearity(self):
        rng = np.random.default_rng(8)
        cfg = AdmittanceConfig(k_adm=0.004)
        n = random_unit(rng)
        om = projector(n)
        for _ in range(30):
            f1, f2 = rng.normal(size=3), rng.normal(size=3)
            a, b = rng.normal(), rng.normal()
            lhs = admittance_velocity(cfg, om, a * f1 + b * f2)
            rhs = a * admittance_velocity(cfg, om, f1) \
                + b * admittance_velocity(cfg, om, f2)
            assert np.max(np.abs(lhs - rhs)) < 1e-12

    def test_zero_gain_zero_velocity(self):
        cfg = AdmittanceConfig(k_adm=0.0)
        om = projector(np.array([0.0, 0.0, 1.0]))
        assert np.allclose(admittance_velocity(cfg, om, np.array([9.0, 9.0, 9.0])),
                           0.0)


class TestProjectedGain:
    def test_unit_gain_z_shaft(self):
        cfg = AdmittanceConfig(k_adm=1.0)
        out = projected_gain(cfg, projector(np.array([0.0, 0.0, 1.0])))
        assert np.allclose(out, np.diag([1.0, 1.0, 0.0]))

    def test_equivalent_to_velocity_law(self):
        rng = np.random.default_rng(9)
        cfg = AdmittanceConfig(k_adm=0.31)
        n = random_unit(rng)
        om = projector(n)
        gain = projected_gain(cfg, om)
        for _ in range(20):
            f = rng.normal(size=3)
            assert np.allclose(gain @ f, admittance_velocity(cfg, om, f),
                               atol=1e-15)

    def test_eigenvalues(self):
        rng = np.random.default_rng(10)
        cfg = AdmittanceConfig(k_adm=0.7)
        for _ in range(20):
            gain = projected_gain(cfg, projector(random_unit(rng)))
            eig = np.sort(np.linalg.eigvalsh(gain))
            assert np.allclose(eig, [0.0, 0.7, 0.7], atol=1e-12)


class TestConfigAndFilter:
    def test_negative_gain_rejected(self):
        with pytest.raises(ValueError):
            AdmittanceConfig(k_adm=-0.1)

    def test_force_estimate_validation(self):
        with pytest.raises(ValueError):
            ForceEstimate(np.array([np.nan, 0.0, 0.0]), 0.0)
        fe = ForceEstimate(np.array([1.0, 0.0, 0.0]), 0.5)
        assert fe.timestamp == 0.5

    def test_filter_converges_to_constant(self):
        lp = LowPassFilter(10.0, 0.005)
        x = np.array([1.0, -2.0, 0.5])
        y = None
        for _ in range(200):
            y = lp(x)
        assert np.allclose(y, x, atol=1e-6)

    def test_filter_disabled_passes_through(self):
        lp = LowPassFilter(None, 0.005)
        x = np.array([3.0, 1.0, 4.0])
        assert np.array_equal(lp(x), x)

    def test_filter_attenuates_alternating_input(self):
        lp = LowPassFilter(5.0, 0.005)
        last = None
        for k in range(400):
            last = lp(np.array([(-1.0) ** k, 0.0, 0.0]))
        assert abs(last[0]) < 0.1
