import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ghzw.core import PureStateAngles, check_density_matrix, fidelity_against_pure, ghz_state, input_state, projector, w_state
from ghzw.decoherence import EnvironmentKind, closed_ghz, closed_single_qubit, closed_w
from ghzw.teleport import (
    W_COMPLEMENT_CORRECTIONS,
    ChannelKind,
    ghz_protocol_unitary,
    search_w_complement_corrections,
    teleport_output,
    w_measurement_basis,
    w_protocol_unitary,
)

ZERO = EnvironmentKind.ZERO_TEMPERATURE
INF = EnvironmentKind.INFINITE_TEMPERATURE
DEPH = EnvironmentKind.DEPHASING
PRISTINE = {ChannelKind.GHZ: ghz_state(), ChannelKind.W: w_state()}


def random_angles(rng, n):
    return [PureStateAngles(rng.uniform(0, math.pi), rng.uniform(0, 2 * math.pi)) for _ in range(n)]


def w_fidelity_reference(env, theta, g):
    """Channel-decoherence fidelity for the W resource, written out term by term."""
    e = math.exp
    s2 = math.sin(theta) ** 2
    if env is ZERO:
        return 1 - 1.5 * e(-g) + 1.5 * e(-2 * g) - 0.5 * (1 - 3 * e(-g) + 2 * e(-2 * g)) * s2
    if env is INF:
        return 0.25 * (2 + e(-4 * g) + e(-6 * g)) + 0.5 * (e(-2 * g) - e(-6 * g)) * s2
    return 0.25 * (3 + e(-g)) - (1 - e(-g)) * s2 / 16


@pytest.mark.parametrize("builder", [ghz_protocol_unitary, w_protocol_unitary])
def test_unitary(builder):
    u = builder().u
    assert np.max(np.abs(u.conj().T @ u - np.eye(16))) < 1e-12


def test_w_measurement_basis_orthonormal():
    b = np.array(w_measurement_basis())
    np.testing.assert_allclose(b @ b.conj().T, np.eye(8), atol=1e-15)


def test_ghz_ground_state_teleported():
    out = teleport_output(np.diag([1, 0]), ghz_state(), ChannelKind.GHZ)
    np.testing.assert_allclose(out, np.diag([1, 0]), atol=1e-14)


@pytest.mark.parametrize("channel", list(ChannelKind))
def test_noiseless_perfect(channel):
    for a in random_angles(np.random.default_rng(0), 50):
        psi = input_state(a)
        out = teleport_output(projector(psi), PRISTINE[channel], channel)
        assert fidelity_against_pure(psi, out) == pytest.approx(1, abs=1e-12)


def test_w_zero_temperature_equator():
    # 1 - 1.5 e^-0.5 + 1.5 e^-1 - 0.5 (1 - 3 e^-0.5 + 2 e^-1), evaluated independently
    psi = input_state(PureStateAngles(math.pi / 2, 0.0))
    out = teleport_output(projector(psi), closed_w(ZERO, 0.5), ChannelKind.W)
    assert fidelity_against_pure(psi, out) == pytest.approx(0.683939720585721, abs=1e-12)


def test_input_decoherence_passes_through():
    psi = input_state(PureStateAngles(1.0, 2.0))
    rho = closed_single_qubit(projector(psi), INF, 0.7)
    for channel in ChannelKind:
        np.testing.assert_allclose(teleport_output(rho, PRISTINE[channel], channel), rho, atol=1e-13)


@pytest.mark.parametrize("g", [0.3, 1.0, 3.0])
def test_ghz_dephasing_keeps_poles_perfect(g):
    for theta in (0.0, math.pi):
        psi = input_state(PureStateAngles(theta, 0.0))
        out = teleport_output(projector(psi), closed_ghz(DEPH, g), ChannelKind.GHZ)
        assert fidelity_against_pure(psi, out) == pytest.approx(1, abs=1e-12)


def test_channel_independence_for_input_decoherence():
    rng = np.random.default_rng(3)
    for a in random_angles(rng, 20):
        env = list(EnvironmentKind)[rng.integers(3)]
        rho = closed_single_qubit(projector(input_state(a)), env, rng.uniform(0, 3))
        np.testing.assert_allclose(
            teleport_output(rho, ghz_state(), ChannelKind.GHZ),
            teleport_output(rho, w_state(), ChannelKind.W),
            atol=1e-10,
        )


@settings(max_examples=30, deadline=None)
@given(st.floats(0, 1), st.integers(0, 2**32 - 1), st.sampled_from(list(ChannelKind)))
def test_linear_in_input(alpha, seed, channel):
    rng = np.random.default_rng(seed)
    r1, r2 = (projector(input_state(a)) for a in random_angles(rng, 2))
    ch = (closed_ghz if channel is ChannelKind.GHZ else closed_w)(INF, rng.uniform(0, 2))
    mixed = teleport_output(alpha * r1 + (1 - alpha) * r2, ch, channel)
    separate = alpha * teleport_output(r1, ch, channel) + (1 - alpha) * teleport_output(r2, ch, channel)
    np.testing.assert_allclose(mixed, separate, atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.floats(0, 5), st.sampled_from(list(EnvironmentKind)), st.sampled_from(list(ChannelKind)),
       st.floats(0, math.pi), st.floats(0, 2 * math.pi))
def test_output_is_a_state(g, env, channel, theta, phi):
    ch = (closed_ghz if channel is ChannelKind.GHZ else closed_w)(env, g)
    check_density_matrix(teleport_output(projector(input_state(PureStateAngles(theta, phi))), ch, channel))


def test_dim_mismatch():
    with pytest.raises(ValueError):
        teleport_output(np.eye(4) / 4, ghz_state(), ChannelKind.GHZ)


@pytest.fixture(scope="module")
def ranked():
    return search_w_complement_corrections(w_fidelity_reference, closed_w, list(EnvironmentKind))


class TestComplementSearch:
    def test_covers_all_assignments(self, ranked):
        assert len(ranked) == 256
        assert len({c.complement for c in ranked}) == 256

    def test_shipped_assignment_is_winner(self, ranked):
        assert ranked[0].complement == W_COMPLEMENT_CORRECTIONS

    def test_zero_temperature_reproduced_exactly(self, ranked):
        assert ranked[0].errors["zero"] < 1e-12

    def test_no_assignment_fits_every_environment(self, ranked):
        # recorded outcome of the search: the infinite-temperature and dephasing
        # references are not met by any assignment in this family
        assert ranked[0].max_error == pytest.approx(0.1185226047803547, abs=1e-9)
        assert min(c.errors["inf"] for c in ranked) == pytest.approx(0.09585012489105105, abs=1e-9)

    def test_zero_temperature_alone_has_several_exact_fits(self):
        ranked = search_w_complement_corrections(w_fidelity_reference, closed_w, [ZERO])
        exact = [c.complement for c in ranked if c.max_error < 1e-10]
        assert exact[0] == ("I", "X", "I", "X")
        # only the bit-flip part of each correction is pinned; a Z factor is free
        assert len(exact) == 16
        assert all(c[0] in ("I", "Z") and c[1] in ("X", "ZX") and c[2] in ("I", "Z") and c[3] in ("X", "ZX")
                   for c in exact)


def test_fully_dephased_w_cannot_beat_classical_limit():
    """A fully dephased W resource is a classical mixture of product states,
    so no protocol can push the average fidelity above 2/3."""
    rho = closed_w(DEPH, 50.0)
    u, w = np.polynomial.legendre.leggauss(16)
    total = 0.0
    for ui, wi in zip(u, w):
        psi = input_state(PureStateAngles(math.acos(ui), 0.0))
        total += wi * fidelity_against_pure(psi, teleport_output(projector(psi), rho, ChannelKind.W))
    assert total / 2 <= 2 / 3 + 1e-12
