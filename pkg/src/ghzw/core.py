"""Dense matrix helpers and the quantum states used throughout the package.

Basis convention: for an n-qubit register, basis index ``j`` (0-based) is the
bitstring of ``j`` with the leftmost bit belonging to qubit 1. Qubits are
labelled 1..n everywhere in the public API.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

MAX_DIM = 16
HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = -1e-9

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
P0 = np.array([[1, 0], [0, 0]], dtype=complex)
P1 = np.array([[0, 0], [0, 1]], dtype=complex)

# sigma^- moves population from |0> (index 1) to |1>; fixed by the
# single-qubit decay rho^{11}(t) = rho^{11}(0) exp(-gamma t).
SIGMA_MINUS = np.array([[0, 0], [1, 0]], dtype=complex)
SIGMA_PLUS = SIGMA_MINUS.conj().T


class InvalidStateError(ValueError):
    """A matrix failed the density-matrix checks."""


def _is_power_of_two(n: int) -> bool:
    return n >= 2 and (n & (n - 1)) == 0


def num_qubits(op: np.ndarray) -> int:
    dim = op.shape[0]
    if op.ndim != 2 or op.shape[1] != dim or not _is_power_of_two(dim) or dim > MAX_DIM:
        raise ValueError(f"expected a square operator of dimension 2..{MAX_DIM}, got {op.shape}")
    return dim.bit_length() - 1


def kron(*ops: np.ndarray) -> np.ndarray:
    """Kronecker product of operators, refusing registers larger than 4 qubits."""
    if not ops:
        raise ValueError("kron needs at least one operator")
    out = np.eye(1, dtype=complex)
    for op in ops:
        op = np.asarray(op, dtype=complex)
        if op.ndim != 2 or op.shape[0] != op.shape[1] or not _is_power_of_two(op.shape[0]):
            raise ValueError(f"operand has shape {op.shape}, expected 2^k x 2^k")
        if out.shape[0] * op.shape[0] > MAX_DIM:
            raise ValueError(f"kron result would exceed dimension {MAX_DIM}")
        out = np.kron(out, op)
    return out


def embed(op: np.ndarray, qubit: int, n: int) -> np.ndarray:
    """``I x ... x op x ... x I`` with ``op`` acting on ``qubit`` (1-based)."""
    if not 1 <= qubit <= n <= 4:
        raise ValueError(f"qubit {qubit} out of range for a {n}-qubit register")
    return kron(*[op if k == qubit else I2 for k in range(1, n + 1)])


def partial_trace(rho: np.ndarray, keep: Iterable[int]) -> np.ndarray:
    """Reduced state on the qubits in ``keep`` (1-based labels, any order).

    The kept qubits appear in ascending label order in the result.
    """
    rho = np.asarray(rho, dtype=complex)
    n = num_qubits(rho)
    keep = sorted(set(keep))
    if not keep:
        raise ValueError("keep must name at least one qubit")
    if keep[0] < 1 or keep[-1] > n:
        raise ValueError(f"keep={keep} has labels outside 1..{n}")

    traced = [q for q in range(1, n + 1) if q not in keep]
    t = rho.reshape([2] * (2 * n))
    # axes 0..n-1 are row qubits, n..2n-1 column qubits; contract pairs from the back
    for q in sorted(traced, reverse=True):
        m = t.ndim // 2
        t = np.trace(t, axis1=q - 1, axis2=q - 1 + m)
    d = 2 ** len(keep)
    return t.reshape(d, d)


@dataclass(frozen=True)
class PureStateAngles:
    """Bloch angles of the state to be teleported."""

    theta: float
    phi: float = 0.0

    def __post_init__(self):
        if not (0.0 <= self.theta <= math.pi):
            raise ValueError(f"theta={self.theta} outside [0, pi]")
        if not (0.0 <= self.phi <= 2 * math.pi):
            raise ValueError(f"phi={self.phi} outside [0, 2pi]")


def input_state(angles: PureStateAngles) -> np.ndarray:
    """cos(theta/2) e^{i phi/2}|0> + sin(theta/2) e^{-i phi/2}|1>."""
    th, ph = angles.theta, angles.phi
    return np.array(
        [math.cos(th / 2) * np.exp(0.5j * ph), math.sin(th / 2) * np.exp(-0.5j * ph)],
        dtype=complex,
    )


def projector(psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


def basis_vector(bits: str) -> np.ndarray:
    v = np.zeros(2 ** len(bits), dtype=complex)
    v[int(bits, 2)] = 1.0
    return v


def ghz_vector() -> np.ndarray:
    return (basis_vector("000") + basis_vector("111")) / math.sqrt(2)


def w_vector() -> np.ndarray:
    return (math.sqrt(2) * basis_vector("001") + basis_vector("010") + basis_vector("100")) / 2


def ghz_state() -> np.ndarray:
    return projector(ghz_vector())


def w_state() -> np.ndarray:
    return projector(w_vector())


def check_density_matrix(rho: np.ndarray) -> np.ndarray:
    """Raise :class:`InvalidStateError` unless ``rho`` is Hermitian, unit trace and PSD."""
    rho = np.asarray(rho, dtype=complex)
    num_qubits(rho)
    if not np.all(np.isfinite(rho)):
        raise InvalidStateError("non-finite entries")
    herm = np.max(np.abs(rho - rho.conj().T))
    if herm > HERMITIAN_TOL:
        raise InvalidStateError(f"not Hermitian (max deviation {herm:.3e})")
    tr = np.trace(rho)
    if abs(tr - 1) > TRACE_TOL:
        raise InvalidStateError(f"trace {tr:.12g} != 1")
    lam = np.linalg.eigvalsh((rho + rho.conj().T) / 2)[0]
    if lam < PSD_TOL:
        raise InvalidStateError(f"negative eigenvalue {lam:.3e}")
    return rho


def fidelity_against_pure(psi: np.ndarray, rho: np.ndarray) -> float:
    """<psi|rho|psi>, clamped to [0, 1]."""
    psi = np.asarray(psi, dtype=complex)
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (psi.size, psi.size):
        raise ValueError(f"state of size {psi.size} vs operator {rho.shape}")
    f = float(np.real(psi.conj() @ rho @ psi))
    if not (-1e-12 <= f <= 1 + 1e-12):
        raise InvalidStateError(f"fidelity {f} outside [0, 1]")
    return min(max(f, 0.0), 1.0)
