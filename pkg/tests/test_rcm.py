import numpy as np
import pytest

from conftest import sample_configs
from oracles import fd_jacobian, fd_rcm_jacobian

from rcmteleop.errors import DegenerateShaftError
from rcmteleop.geometry import Twist
from rcmteleop.rcm import (AugmentedState, augmented_twist, build_context,
                           rcm_jacobian, rcm_position, shaft_vector,
                           total_jacobian)


class TestRcmPosition:
    def test_reference_interpolation(self):
        p = rcm_position(np.zeros(3), np.array([0.0, 0.0, 1.0]), 0.4)
        assert np.allclose(p, [0.0, 0.0, 0.4], atol=1e-15)

    def test_endpoints(self):
        a = np.array([0.1, -0.2, 0.3])
        b = np.array([1.0, 2.0, -3.0])
        assert np.array_equal(rcm_position(a, b, 0.0), a)
        assert np.array_equal(rcm_position(a, b, 1.0), b)

    def test_distance_scales_with_lambda(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            a, b = rng.normal(size=3), rng.normal(size=3)
            lam = rng.uniform(0.0, 1.0)
            dist = np.linalg.norm(rcm_position(a, b, lam) - a)
            assert dist == pytest.approx(lam * np.linalg.norm(b - a), abs=1e-12)

    def test_non_finite_rejected(self):
        with pytest.raises(ValueError):
            rcm_position(np.array([np.inf, 0, 0]), np.zeros(3), 0.5)


class TestShaftVector:
    def test_simple_difference(self):
        d = shaft_vector(np.zeros(3), np.array([0.0, 0.0, 0.4]))
        assert np.allclose(d, [0.0, 0.0, 0.4])

    def test_antisymmetry(self):
        a = np.array([0.2, 0.1, 0.5])
        b = np.array([0.6, -0.3, 0.1])
        assert np.allclose(shaft_vector(a, b), -shaft_vector(b, a))

    def test_matches_subtraction(self):
        rng = np.random.default_rng(9)
        a, b = rng.normal(size=3), rng.normal(size=3)
        assert np.array_equal(shaft_vector(a, b), b - a)

    def test_degenerate_shaft(self):
        with pytest.raises(DegenerateShaftError):
            shaft_vector(np.zeros(3), np.array([0.0, 0.0, 5e-4]))


class TestRcmJacobian:
    def test_lambda_endpoints_select_blocks(self):
        rng = np.random.default_rng(2)
        j_end = rng.normal(size=(3, 11))
        j_ins = rng.normal(size=(3, 11))
        d = np.array([0.0, 0.0, 0.4])
        assert np.allclose(rcm_jacobian(j_end, j_ins, d, 0.0)[:, :11], j_end)
        assert np.allclose(rcm_jacobian(j_end, j_ins, d, 1.0)[:, :11], j_ins)
        assert np.allclose(rcm_jacobian(j_end, j_ins, d, 0.3)[:, 11], d)

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            rcm_jacobian(np.zeros((3, 11)), np.zeros((3, 10)), np.zeros(3), 0.4)

    def test_matches_fd_of_rcm_point(self, chain, home_q):
        for i, q in enumerate(sample_configs(chain, home_q, 10, seed=21)):
            lam = 0.2 + 0.06 * i
            ctx = build_context(chain, q, lam)
            fd = fd_rcm_jacobian(chain, q, lam, chain.end_effector_index,
                                 chain.instrument_index, step=1e-6)
            err = np.abs(ctx.j_rcm - fd) / (1.0 + np.abs(ctx.j_rcm))
            assert np.max(err) < 1e-5


class TestTotalJacobian:
    def test_block_structure(self, chain, home_q):
        ctx = build_context(chain, home_q, 0.4)
        assert ctx.j_total.shape == (9, 12)
        assert np.all(ctx.j_total[:6, 11] == 0.0)
        assert np.array_equal(ctx.j_total[6:], ctx.j_rcm)
        assert np.array_equal(ctx.j_total[:6, :11], ctx.j_ins)

    def test_shape_checks(self):
        with pytest.raises(ValueError):
            total_jacobian(np.zeros((5, 11)), np.zeros((3, 12)))
        with pytest.raises(ValueError):
            total_jacobian(np.zeros((6, 11)), np.zeros((3, 11)))

    def test_product_stacks_twist_over_rcm_velocity(self, chain, home_q):
        # J_total qdot_aug must reproduce the instrument twist and the RCM
        # point velocity, each checked against its own finite difference.
        task_cols = np.arange(11) != 10
        rng = np.random.default_rng(17)
        for q in sample_configs(chain, home_q, 5, seed=33):
            lam = 0.35
            ctx = build_context(chain, q, lam)
            qdot_aug = rng.normal(size=12)
            qdot_aug[10] = 0.0   # gripper never carries task velocity
            product = ctx.j_total @ qdot_aug
            fd_ins = fd_jacobian(chain, q, 11, step=1e-6)
            fd_rcm = fd_rcm_jacobian(chain, q, lam, 7, 11, step=1e-6)
            want_twist = fd_ins[:, task_cols] @ qdot_aug[:11][task_cols]
            want_rcm = fd_rcm @ qdot_aug
            assert np.max(np.abs(product[:6] - want_twist)) < 1e-5
            assert np.max(np.abs(product[6:] - want_rcm)) < 1e-5

    def test_rank_nine_at_generic_configurations(self, chain, home_q):
        for q in sample_configs(chain, home_q, 100, seed=101):
            ctx = build_context(chain, q, 0.4)
            sv = np.linalg.svd(ctx.j_total, compute_uv=False)
            assert sv[8] > 1e-8


class TestAugmentedTwist:
    def test_zero(self):
        assert np.array_equal(augmented_twist(Twist.zero(), np.zeros(3)), np.zeros(9))

    def test_ordering(self):
        xi = augmented_twist(Twist(np.array([1.0, 2, 3]), np.array([4.0, 5, 6])),
                             np.array([7.0, 8, 9]))
        assert np.array_equal(xi, np.arange(1.0, 10.0))

    def test_round_trip(self):
        v = np.array([0.1, 0.2, 0.3])
        w = np.array([-1.0, 0.5, 0.0])
        u = np.array([0.0, 0.01, -0.02])
        xi = augmented_twist(Twist(v, w), u)
        assert np.array_equal(xi[:3], v)
        assert np.array_equal(xi[3:6], w)
        assert np.array_equal(xi[6:], u)


class TestAugmentedState:
    def test_copy_is_independent(self):
        s = AugmentedState(np.zeros(11), 0.4)
        c = s.copy()
        c.q[0] = 1.0
        assert s.q[0] == 0.0
