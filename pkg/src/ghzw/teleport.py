"""Coherent teleportation circuits for GHZ and W resources.

Register order is (input, alice-2, alice-3, bob-4). Alice's measurement and
Bob's classically controlled correction are replaced by a unitary that
rotates Alice's measurement basis onto the computational basis and applies
the correction controlled on it; tracing out Alice afterwards averages over
all outcomes.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .core import (
    H,
    I2,
    P0,
    P1,
    X,
    Z,
    PureStateAngles,
    basis_vector,
    embed,
    input_state,
    kron,
    partial_trace,
    projector,
)

PAULI_CORRECTIONS = {"I": I2, "X": X, "Z": Z, "ZX": Z @ X}
CORRECTION_ORDER = ("I", "X", "Z", "ZX")


class ChannelKind(enum.Enum):
    GHZ = "ghz"
    W = "w"


class Scenario(enum.Enum):
    INPUT_DECOHERES = "input"
    CHANNEL_DECOHERES = "channel"
    BOTH_DECOHERE = "both"


@dataclass(frozen=True)
class ProtocolUnitary:
    u: np.ndarray
    channel: ChannelKind


def _controlled(ctrl: int, target_op: np.ndarray, target: int, n: int = 4) -> np.ndarray:
    return embed(P0, ctrl, n) + embed(P1, ctrl, n) @ embed(target_op, target, n)


def ghz_protocol_unitary() -> ProtocolUnitary:
    """Bell-type measurement on (1, 2), X-basis on 3, then X^{m2} Z^{m1 xor m3} on Bob."""
    measure = kron(H, I2, H, I2) @ _controlled(1, X, 2)
    correct = _controlled(3, Z, 4) @ _controlled(1, Z, 4) @ _controlled(2, X, 4)
    return ProtocolUnitary(correct @ measure, ChannelKind.GHZ)


def w_measurement_basis() -> list[np.ndarray]:
    """Orthonormal basis of Alice's three qubits for the W protocol.

    The first four vectors carry the perfect-teleportation outcomes; the
    last four span their complement, which only decohered channels reach.
    """
    b = basis_vector
    r2 = math.sqrt(2)
    return [
        (r2 * b("000") + b("110") + b("101")) / 2,
        (r2 * b("000") - b("110") - b("101")) / 2,
        (r2 * b("100") + b("010") + b("001")) / 2,
        (r2 * b("100") - b("010") - b("001")) / 2,
        b("111"),
        b("011"),
        (b("110") - b("101")) / r2,
        (b("010") - b("001")) / r2,
    ]


W_MAIN_CORRECTIONS = ("X", "ZX", "I", "Z")
# outcome of search_w_complement_corrections(); see scripts/search_w_corrections.py
W_COMPLEMENT_CORRECTIONS = ("I", "X", "I", "X")


def w_protocol_unitary(complement: tuple[str, str, str, str] = W_COMPLEMENT_CORRECTIONS) -> ProtocolUnitary:
    """``C (U_meas^+ x I)`` for the W channel with the given complement corrections."""
    corrections = W_MAIN_CORRECTIONS + tuple(complement)
    u = np.zeros((16, 16), dtype=complex)
    for k, (vec, name) in enumerate(zip(w_measurement_basis(), corrections)):
        e = np.zeros(8, dtype=complex)
        e[k] = 1.0
        u += np.kron(np.outer(e, vec.conj()), PAULI_CORRECTIONS[name])
    return ProtocolUnitary(u, ChannelKind.W)


@lru_cache(maxsize=None)
def protocol_unitary(channel: ChannelKind) -> ProtocolUnitary:
    if channel is ChannelKind.GHZ:
        return ghz_protocol_unitary()
    return w_protocol_unitary()


def teleport_output(
    rho_in: np.ndarray,
    rho_channel: np.ndarray,
    channel: ChannelKind | ProtocolUnitary,
) -> np.ndarray:
    """Bob's state ``Tr_{1,2,3}[U (rho_in x rho_channel) U^+]``."""
    rho_in = np.asarray(rho_in, dtype=complex)
    rho_channel = np.asarray(rho_channel, dtype=complex)
    if rho_in.shape != (2, 2) or rho_channel.shape != (8, 8):
        raise ValueError(f"expected 2x2 input and 8x8 channel, got {rho_in.shape}, {rho_channel.shape}")
    proto = channel if isinstance(channel, ProtocolUnitary) else protocol_unitary(channel)
    u = proto.u
    return partial_trace(u @ np.kron(rho_in, rho_channel) @ u.conj().T, keep=[4])


@dataclass(frozen=True)
class CorrectionCandidate:
    complement: tuple[str, str, str, str]
    max_error: float
    errors: dict  # env value -> max abs deviation


def search_w_complement_corrections(target, channel_state, envs, gts=(0.25, 0.5, 1.0),
                                    thetas=(0.0, math.pi / 4, math.pi / 2), phi=0.3):
    """Rank all 256 complement-correction assignments against ``target``.

    ``target(env, theta, gt)`` gives the reference fidelity and
    ``channel_state(env, gt)`` the decohered W state. Candidates are sorted by
    their worst deviation (rounded to 1e-12), ties broken lexicographically in the order
    I < X < Z < ZX.
    """
    inputs = {th: input_state(PureStateAngles(th, phi)) for th in thetas}
    channels = {(env, g): channel_state(env, g) for env in envs for g in gts}
    refs = {(env, th, g): target(env, th, g) for env in envs for th in thetas for g in gts}

    ranked = []
    for combo in itertools.product(CORRECTION_ORDER, repeat=4):
        proto = w_protocol_unitary(combo)
        errors = {}
        for env in envs:
            worst = 0.0
            for g in gts:
                for th, psi in inputs.items():
                    out = teleport_output(projector(psi), channels[(env, g)], proto)
                    f = float(np.real(psi.conj() @ out @ psi))
                    worst = max(worst, abs(f - refs[(env, th, g)]))
            errors[env.value] = worst
        key = tuple(CORRECTION_ORDER.index(c) for c in combo)
        ranked.append((max(errors.values()), key, CorrectionCandidate(combo, max(errors.values()), errors)))
    # round so floating-point noise cannot break lexicographic ties
    ranked.sort(key=lambda r: (round(r[0], 12), r[1]))
    return [r[2] for r in ranked]
