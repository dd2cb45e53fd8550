import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ghzw.core import I2, SIGMA_MINUS, SIGMA_PLUS, check_density_matrix, ghz_state, kron, projector, w_state
from ghzw.decoherence import (
    EnvironmentKind,
    closed_ghz,
    closed_single_qubit,
    closed_w,
    evolve,
    evolve_rk4,
    lindblad_ops,
    lindblad_rhs,
)

ZERO = EnvironmentKind.ZERO_TEMPERATURE
INF = EnvironmentKind.INFINITE_TEMPERATURE
DEPH = EnvironmentKind.DEPHASING
GT_GRID = [round(0.1 * k, 10) for k in range(1, 21)]


def random_density(rng, dim):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = a @ a.conj().T
    return rho / np.trace(rho)


class TestLindbladOps:
    def test_zero_temperature_single(self):
        (L,) = lindblad_ops(ZERO, 1, 1)
        np.testing.assert_array_equal(L, [[0, 0], [1, 0]])

    def test_dephasing_projector(self):
        (L,) = lindblad_ops(DEPH, 1, 1)
        np.testing.assert_array_equal(L, np.diag([1, 0]))

    def test_infinite_temperature_embedding(self):
        ops = lindblad_ops(INF, 2, 2)
        assert len(ops) == 2
        np.testing.assert_array_equal(ops[0], kron(I2, SIGMA_MINUS))
        np.testing.assert_array_equal(ops[1], kron(I2, SIGMA_PLUS))

    def test_index_out_of_range(self):
        with pytest.raises(ValueError):
            lindblad_ops(ZERO, 3, 2)


class TestRhs:
    def test_ground_jump(self):
        out = lindblad_rhs(np.diag([1, 0]), ZERO, 1.0)
        np.testing.assert_allclose(out, np.diag([-1, 1]), atol=1e-15)

    def test_steady_state(self):
        np.testing.assert_allclose(lindblad_rhs(np.diag([0, 1]), ZERO), 0, atol=1e-15)

    def test_dephasing_plus_state(self):
        # by hand with L = |0><0|: 2 L rho L - L rho - rho L = [[0, -1/2], [-1/2, 0]] for |+><+|
        plus = np.full((2, 2), 0.5)
        out = lindblad_rhs(plus, DEPH, 1.0)
        np.testing.assert_allclose(out, [[0, -0.25], [-0.25, 0]], atol=1e-15)
        # off-diagonals shrink at rate 1/2 relative to their value
        assert out[0, 1] / plus[0, 1] == pytest.approx(-0.5)

    @pytest.mark.parametrize("env", list(EnvironmentKind))
    def test_trace_and_hermiticity_preserved(self, env):
        rng = np.random.default_rng(7)
        for _ in range(100):
            dim = 2 ** rng.integers(1, 4)
            out = lindblad_rhs(random_density(rng, dim), env, rng.uniform(0.1, 3))
            assert abs(np.trace(out)) < 1e-12
            assert np.max(np.abs(out - out.conj().T)) < 1e-12


class TestEvolveRK4:
    def test_zero_time(self):
        rho = random_density(np.random.default_rng(1), 8)
        np.testing.assert_array_equal(evolve_rk4(rho, ZERO, 1.0, 0.0), rho)

    def test_half_decay(self):
        out = evolve_rk4(np.diag([1, 0]), ZERO, 1.0, math.log(2))
        np.testing.assert_allclose(out, np.diag([0.5, 0.5]), atol=1e-8)

    def test_ghz_dephasing_coherence(self):
        out = evolve_rk4(ghz_state(), DEPH, 1.0, 1.0)
        assert abs(out[0, 7] - math.exp(-1.5) / 2) < 1e-8

    def test_gamma_and_time_enter_as_product(self):
        rho = random_density(np.random.default_rng(2), 4)
        np.testing.assert_allclose(evolve_rk4(rho, INF, 2.0, 0.35), evolve_rk4(rho, INF, 0.7, 1.0), atol=1e-12)

    def test_fourth_order_convergence(self):
        rho0 = w_state()
        exact = closed_w(ZERO, 1.0)
        errs = [np.max(np.abs(evolve_rk4(rho0, ZERO, 1.0, 1.0, steps=s) - exact)) for s in (10, 20)]
        assert 12 < errs[0] / errs[1] < 20

    def test_steps_validated(self):
        with pytest.raises(ValueError):
            evolve_rk4(np.diag([1, 0]), ZERO, 1.0, 1.0, steps=0)

    def test_negative_time(self):
        with pytest.raises(ValueError):
            evolve_rk4(np.diag([1, 0]), ZERO, 1.0, -1.0)


class TestClosedForms:
    def test_single_qubit_zero_temperature(self):
        rho0 = np.array([[0.7, 0.2 + 0.1j], [0.2 - 0.1j, 0.3]])
        g = 0.8
        out = closed_single_qubit(rho0, ZERO, g)
        assert out[0, 0] == pytest.approx(0.7 * math.exp(-g))
        assert out[0, 1] == pytest.approx((0.2 + 0.1j) * math.exp(-g / 2))
        assert out[1, 1] == pytest.approx(1 - 0.7 * math.exp(-g))

    def test_single_qubit_infinite_temperature(self):
        rho0 = np.array([[0.7, 0.2 + 0.1j], [0.2 - 0.1j, 0.3]])
        g = 0.8
        out = closed_single_qubit(rho0, INF, g)
        assert out[0, 0] == pytest.approx((1 + 0.4 * math.exp(-2 * g)) / 2)
        assert out[1, 1] == pytest.approx((1 - 0.4 * math.exp(-2 * g)) / 2)
        assert out[1, 0] == pytest.approx((0.2 - 0.1j) * math.exp(-g))

    def test_single_qubit_dephasing_at_zero(self):
        rho0 = random_density(np.random.default_rng(5), 2)
        np.testing.assert_allclose(closed_single_qubit(rho0, DEPH, 0.0), rho0)

    def test_ghz_zero_temperature_entries(self):
        g = 0.6
        e = math.exp
        rho = closed_ghz(ZERO, g)
        assert rho[0, 0] == pytest.approx(e(-3 * g) / 2)
        assert rho[0, 7] == rho[7, 0] == pytest.approx(e(-1.5 * g) / 2)
        for j in (1, 2, 4):
            assert rho[j, j] == pytest.approx((e(-2 * g) - e(-3 * g)) / 2)
        for j in (3, 5, 6):
            assert rho[j, j] == pytest.approx(e(-g) / 2 - e(-2 * g) + e(-3 * g) / 2)
        assert rho[7, 7] == pytest.approx(1 - 1.5 * e(-g) + 1.5 * e(-2 * g) - e(-3 * g) / 2)

    def test_w_zero_temperature_entries(self):
        g = 0.6
        e = math.exp
        u = e(-g) - e(-2 * g)
        rho = closed_w(ZERO, g)
        assert rho[1, 1] == pytest.approx(e(-2 * g) / 2)
        assert rho[1, 2] == pytest.approx(e(-2 * g) / (2 * math.sqrt(2)))
        assert rho[3, 3] == pytest.approx(3 * u / 4)
        assert rho[3, 5] == pytest.approx(u / 4)
        assert rho[3, 6] == pytest.approx(math.sqrt(2) * u / 4)
        assert rho[6, 6] == pytest.approx(u / 2)
        assert rho[7, 7] == pytest.approx(1 - 2 * e(-g) + e(-2 * g))

    @pytest.mark.parametrize("env", list(EnvironmentKind))
    def test_initial_values(self, env):
        np.testing.assert_allclose(closed_ghz(env, 0.0), ghz_state(), atol=1e-15)
        np.testing.assert_allclose(closed_w(env, 0.0), w_state(), atol=1e-15)

    @pytest.mark.parametrize("env", list(EnvironmentKind))
    @pytest.mark.parametrize("builder", [closed_ghz, closed_w])
    @settings(max_examples=25, deadline=None)
    @given(gt=st.floats(0, 20))
    def test_valid_density_matrices(self, env, builder, gt):
        check_density_matrix(builder(env, gt))


class TestOracleEquivalence:
    @pytest.mark.parametrize("env", list(EnvironmentKind))
    def test_single_qubit(self, env):
        rho0 = random_density(np.random.default_rng(11), 2)
        dev = max(np.max(np.abs(evolve(rho0, env, g) - closed_single_qubit(rho0, env, g))) for g in GT_GRID)
        assert dev < 1e-8

    @pytest.mark.parametrize("env", list(EnvironmentKind))
    def test_ghz(self, env):
        dev = max(np.max(np.abs(evolve(ghz_state(), env, g) - closed_ghz(env, g))) for g in GT_GRID)
        assert dev < 1e-8

    @pytest.mark.parametrize("env", list(EnvironmentKind))
    def test_w(self, env):
        dev = max(np.max(np.abs(evolve(w_state(), env, g) - closed_w(env, g))) for g in GT_GRID)
        assert dev < 1e-8

    @pytest.mark.parametrize("state", [ghz_state, w_state])
    def test_dephasing_keeps_diagonal(self, state):
        rho0 = state()
        for g in (0.5, 2.0):
            np.testing.assert_allclose(np.diag(evolve(rho0, DEPH, g)), np.diag(rho0), atol=1e-8)

    @pytest.mark.parametrize("state", [ghz_state, w_state])
    def test_zero_temperature_fixed_point(self, state):
        assert evolve(state(), ZERO, 10.0)[7, 7].real > 0.9999

    @pytest.mark.parametrize("state", [ghz_state, w_state])
    def test_infinite_temperature_fixed_point(self, state):
        np.testing.assert_allclose(evolve(state(), INF, 10.0), np.eye(8) / 8, atol=1e-4)

    def test_output_is_valid_state(self):
        rng = np.random.default_rng(4)
        for env in EnvironmentKind:
            check_density_matrix(evolve(random_density(rng, 16), env, 1.3))

    def test_single_qubit_pure_input(self):
        psi = np.array([math.cos(0.4), math.sin(0.4)])
        out = evolve(projector(psi), ZERO, 0.9)
        np.testing.assert_allclose(out, closed_single_qubit(projector(psi), ZERO, 0.9), atol=1e-10)
