import numpy as np
import pytest

from oracles import mp_identities

from rcmteleop.errors import FaultError
from rcmteleop.kinematics import load_default_chain
from rcmteleop.rcm import AugmentedState
from rcmteleop.solver import (SolverConfig, integrate, matrix_rank,
                              null_space_gradient, pseudo_inverse, resolve)

CFG = SolverConfig()


class TestPseudoInverse:
    def test_identity(self):
        assert np.allclose(pseudo_inverse(np.eye(3), CFG), np.eye(3), atol=1e-15)

    def test_rank_deficient_diagonal(self):
        m = np.diag([2.0, 1.0, 0.0])
        assert np.allclose(pseudo_inverse(m, CFG), np.diag([0.5, 1.0, 0.0]),
                           atol=1e-15)

    def test_moore_penrose_identities_on_seeded_matrices(self):
        for seed in range(20):
            m = np.random.default_rng(seed).normal(size=(9, 12))
            report = mp_identities(m, pseudo_inverse(m, CFG), tol=1e-9,
                                   case_id=f"seed{seed}")
            assert report.passed, report

    def test_zero_matrix(self):
        report = mp_identities(np.zeros((4, 6)),
                               pseudo_inverse(np.zeros((4, 6)), CFG))
        assert report.passed

    def test_damping_reshapes_singular_values(self):
        cfg = SolverConfig(damping=0.5)
        m = np.diag([2.0, 1.0])
        want = np.diag([2.0 / (4.0 + 0.25), 1.0 / (1.0 + 0.25)])
        assert np.allclose(pseudo_inverse(m, cfg), want, atol=1e-15)

    def test_non_finite_rejected(self):
        with pytest.raises(ValueError):
            pseudo_inverse(np.array([[np.nan, 0.0]]), CFG)


class TestNullSpaceGradient:
    def test_at_reference_is_zero(self):
        assert np.array_equal(null_space_gradient(0.4, CFG), np.zeros(12))

    def test_above_reference(self):
        eta = null_space_gradient(0.6, CFG)
        assert np.allclose(eta[:11], 0.0)
        assert eta[11] == pytest.approx(0.2)

    def test_below_reference(self):
        assert null_space_gradient(0.1, CFG)[11] == pytest.approx(-0.3)


class TestResolve:
    def test_zero_command_zero_gradient(self):
        j = np.random.default_rng(0).normal(size=(9, 12))
        qdot = resolve(j, np.zeros(9), np.zeros(12), CFG)
        assert np.allclose(qdot, 0.0, atol=1e-15)

    def test_constraint_satisfied_regardless_of_eta(self):
        for seed in range(100):
            rng = np.random.default_rng(seed)
            j = rng.normal(size=(9, 12))
            xi = rng.normal(size=9)
            eta = rng.normal(size=12)
            qdot = resolve(j, xi, eta, CFG)
            assert np.max(np.abs(j @ qdot - xi)) < 1e-9

    def test_projector_lands_in_null_space(self):
        for seed in range(100):
            rng = np.random.default_rng(seed)
            j = rng.normal(size=(9, 12))
            eta = rng.normal(size=12)
            j_pinv = pseudo_inverse(j, CFG)
            projected = eta - j_pinv @ (j @ eta)
            assert np.max(np.abs(j @ projected)) < 1e-9

    def test_projector_idempotent(self):
        for seed in range(100):
            j = np.random.default_rng(seed).normal(size=(9, 12))
            p = np.eye(12) - pseudo_inverse(j, CFG) @ j
            assert np.max(np.abs(p @ p - p)) < 1e-9

    def test_deterministic(self):
        rng = np.random.default_rng(4)
        j = rng.normal(size=(9, 12))
        xi = rng.normal(size=9)
        eta = rng.normal(size=12)
        a = resolve(j, xi, eta, CFG)
        b = resolve(j, xi, eta, CFG)
        assert np.array_equal(a, b)

    def test_info_reports_rank_and_residual(self):
        j = np.random.default_rng(1).normal(size=(9, 12))
        qdot, info = resolve(j, np.ones(9), np.zeros(12), CFG, return_info=True)
        assert info.rank == 9
        assert info.residual_inf < 1e-12

    def test_rank_deficiency_least_squares_fallback(self, caplog):
        j = np.zeros((9, 12))
        j[0, 0] = 1.0
        xi = np.ones(9)
        with caplog.at_level("WARNING"):
            qdot, info = resolve(j, xi, np.zeros(12), CFG, return_info=True)
        assert info.rank == 1
        assert "rank" in caplog.text
        assert qdot[0] == pytest.approx(1.0)   # least squares on the live row

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            resolve(np.zeros((9, 12)), np.zeros(8), np.zeros(12), CFG)


class TestLambdaRegulation:
    """Null-space descent drives lambda to the reference on constraint
    systems whose null space actually reaches the lambda axis.

    The surgical chain is not such a system: its lambda column is (exactly,
    at a straight wrist) inside the span of the joint columns, so with a
    zero augmented command the projector annihilates the lambda direction.
    Generic full-row-rank systems are used here instead.
    """

    # frozen: seeds whose null space projects >= 0.25 onto the lambda axis
    SEEDS = (2, 4, 10, 13, 14, 16, 18)

    @staticmethod
    def _lambda_projection(j):
        p = np.eye(12) - pseudo_inverse(j, CFG) @ j
        return p[11, 11]

    def test_frozen_seeds_reach_lambda(self):
        for seed in self.SEEDS:
            j = np.random.default_rng(seed).normal(size=(9, 12))
            assert matrix_rank(j, CFG) == 9
            assert self._lambda_projection(j) >= 0.25

    def test_surgical_chain_lambda_is_unreachable_at_home(self):
        from rcmteleop.harness import DEFAULT_HOME_Q
        from rcmteleop.rcm import build_context
        ctx = build_context(load_default_chain(), np.array(DEFAULT_HOME_Q), 0.4)
        assert abs(self._lambda_projection(ctx.j_total)) < 1e-9

    @pytest.mark.parametrize("lam0", [0.1, 0.25, 0.5, 0.75, 0.9])
    def test_lambda_converges_within_ten_seconds(self, lam0):
        j = np.random.default_rng(self.SEEDS[0]).normal(size=(9, 12))
        lam = lam0
        prev = abs(lam - CFG.lambda_ref)
        for _ in range(round(10.0 / CFG.dt)):
            eta = null_space_gradient(lam, CFG)
            qdot = resolve(j, np.zeros(9), eta, CFG)
            lam += qdot[11] * CFG.dt
            err = abs(lam - CFG.lambda_ref)
            assert err <= prev + 1e-15
            prev = err
        assert prev < 0.05


class TestIntegrate:
    def test_zero_velocity_keeps_state(self):
        s = AugmentedState(np.linspace(0, 1, 11), 0.3)
        out = integrate(s, np.zeros(12), CFG)
        assert np.array_equal(out.q, s.q)
        assert out.lam == s.lam

    def test_lambda_clamped_at_upper_bound(self):
        s = AugmentedState(np.zeros(11), 0.94)
        qdot = np.zeros(12)
        qdot[11] = 10.0
        assert integrate(s, qdot, CFG).lam == pytest.approx(0.95)

    def test_plain_euler_step(self):
        s = AugmentedState(np.zeros(11), 0.4)
        out = integrate(s, np.ones(12), CFG)
        assert np.allclose(out.q, 0.005)
        assert out.lam == pytest.approx(0.405)

    def test_non_finite_velocity_faults_and_preserves_state(self):
        s = AugmentedState(np.zeros(11), 0.4)
        qdot = np.zeros(12)
        qdot[3] = np.inf
        with pytest.raises(FaultError):
            integrate(s, qdot, CFG)
        assert np.array_equal(s.q, np.zeros(11))

    def test_joint_limits_applied_after_update(self):
        chain = load_default_chain()
        s = AugmentedState(np.zeros(11), 0.4)
        qdot = np.zeros(12)
        qdot[0] = 1e4   # way past the 2.967 rad limit in one step
        out = integrate(s, qdot, CFG, chain)
        assert out.q[0] == pytest.approx(2.967)


class TestSolverConfig:
    def test_validation(self):
        with pytest.raises(ValueError):
            SolverConfig(svd_cutoff=0.0)
        with pytest.raises(ValueError):
            SolverConfig(dt=-1.0)
        with pytest.raises(ValueError):
            SolverConfig(lambda_ref=1.0)
