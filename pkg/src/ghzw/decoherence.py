"""Markovian decoherence of qubit registers.

Two independent routes to the same states:

* :func:`evolve_rk4` integrates the Lindblad master equation
  ``d rho/dt = (gamma/2) sum_{k,i} (2 L rho L^+ - L^+ L rho - rho L^+ L)``
  with a fixed-step classical Runge-Kutta scheme;
* :func:`closed_single_qubit`, :func:`closed_ghz` and :func:`closed_w`
  evaluate the analytic solutions entry by entry.

Every qubit couples to its own environment with the same rate; results
depend on ``gamma * t`` only.
"""

from __future__ import annotations

import enum
import math
from functools import lru_cache

import numpy as np

from .core import SIGMA_MINUS, SIGMA_PLUS, embed, num_qubits

DEFAULT_DT = 1e-3
DRIFT_TOL = 1e-8


class EnvironmentKind(enum.Enum):
    ZERO_TEMPERATURE = "zero"
    INFINITE_TEMPERATURE = "inf"
    DEPHASING = "deph"


_SINGLE_QUBIT_JUMPS = {
    EnvironmentKind.ZERO_TEMPERATURE: (SIGMA_MINUS,),
    EnvironmentKind.INFINITE_TEMPERATURE: (SIGMA_MINUS, SIGMA_PLUS),
    EnvironmentKind.DEPHASING: (SIGMA_PLUS @ SIGMA_MINUS,),
}


class IntegratorError(RuntimeError):
    """Raw integrator output drifted from a valid density matrix."""


def lindblad_ops(env: EnvironmentKind, qubit: int, n: int) -> list[np.ndarray]:
    """Jump operators of ``qubit`` (1-based) embedded in an ``n``-qubit register."""
    return [embed(L, qubit, n) for L in _SINGLE_QUBIT_JUMPS[env]]


def _all_ops(env: EnvironmentKind, n: int) -> list[np.ndarray]:
    return [L for k in range(1, n + 1) for L in lindblad_ops(env, k, n)]


def lindblad_rhs(rho: np.ndarray, env: EnvironmentKind, gamma: float = 1.0) -> np.ndarray:
    """Right-hand side of the master equation, every qubit damped at rate ``gamma``."""
    rho = np.asarray(rho, dtype=complex)
    out = np.zeros_like(rho)
    for L in _all_ops(env, num_qubits(rho)):
        Ld = L.conj().T
        LdL = Ld @ L
        out += 2 * L @ rho @ Ld - LdL @ rho - rho @ LdL
    return 0.5 * gamma * out


@lru_cache(maxsize=None)
def _generator(env: EnvironmentKind, n: int) -> np.ndarray:
    """Superoperator of :func:`lindblad_rhs` (gamma = 1) acting on row-major vec(rho)."""
    d = 2**n
    G = np.empty((d * d, d * d), dtype=complex)
    for col in range(d * d):
        e = np.zeros(d * d, dtype=complex)
        e[col] = 1.0
        G[:, col] = lindblad_rhs(e.reshape(d, d), env).reshape(-1)
    G.flags.writeable = False
    return G


@lru_cache(maxsize=256)
def _rk4_step(env: EnvironmentKind, n: int, h: float) -> np.ndarray:
    # for a linear ODE one RK4 step is the 4th-order Taylor polynomial of exp(hG)
    A = h * _generator(env, n)
    eye = np.eye(A.shape[0], dtype=complex)
    A2 = A @ A
    step = eye + A + A2 / 2 + A2 @ A / 6 + A2 @ A2 / 24
    step.flags.writeable = False
    return step


def evolve_rk4(
    rho0: np.ndarray,
    env: EnvironmentKind,
    gamma: float,
    t: float,
    steps: int | None = None,
) -> np.ndarray:
    """Integrate the master equation from ``rho0`` for a time ``t``.

    ``steps`` defaults to the count giving ``gamma * dt <= 1e-3``. The raw
    result is checked for Hermiticity and trace drift (both must stay below
    1e-8), then symmetrised and renormalised once.
    """
    rho0 = np.asarray(rho0, dtype=complex)
    n = num_qubits(rho0)
    gt = gamma * t
    if gt < 0:
        raise ValueError(f"gamma*t = {gt} must be non-negative")
    if gt == 0:
        return rho0.copy()
    if steps is None:
        steps = max(1, math.ceil(gt / DEFAULT_DT - 1e-9))
    if steps < 1:
        raise ValueError("steps must be >= 1")

    step = _rk4_step(env, n, gt / steps)
    vec = np.linalg.matrix_power(step, steps) @ rho0.reshape(-1)
    rho = vec.reshape(rho0.shape)

    herm = np.max(np.abs(rho - rho.conj().T))
    tr = np.trace(rho)
    drift = max(herm, abs(tr - np.trace(rho0)))
    if drift > DRIFT_TOL:
        raise IntegratorError(f"integrator drift {drift:.3e} exceeds {DRIFT_TOL:g}; use more steps")
    rho = (rho + rho.conj().T) / 2
    return rho / np.trace(rho).real


def evolve(rho0: np.ndarray, env: EnvironmentKind, gt: float) -> np.ndarray:
    """Shorthand for :func:`evolve_rk4` in rescaled time (gamma = 1)."""
    return evolve_rk4(rho0, env, 1.0, gt)


def closed_single_qubit(rho0: np.ndarray, env: EnvironmentKind, gt: float) -> np.ndarray:
    """Analytic single-qubit solution starting from ``rho0``."""
    rho0 = np.asarray(rho0, dtype=complex)
    if rho0.shape != (2, 2):
        raise ValueError("closed_single_qubit needs a 2x2 state")
    r11, r12, r21, r22 = rho0[0, 0], rho0[0, 1], rho0[1, 0], rho0[1, 1]
    if env is EnvironmentKind.ZERO_TEMPERATURE:
        p = r11 * math.exp(-gt)
        c = math.exp(-gt / 2)
        return np.array([[p, r12 * c], [r21 * c, 1 - p]])
    if env is EnvironmentKind.INFINITE_TEMPERATURE:
        diff = (r11 - r22) * math.exp(-2 * gt)
        c = math.exp(-gt)
        return np.array([[(1 + diff) / 2, r12 * c], [r21 * c, (1 - diff) / 2]])
    c = math.exp(-gt / 2)
    return np.array([[r11, r12 * c], [r21 * c, r22]])


def _hermitian_from(entries: dict[tuple[int, int], float], dim: int = 8) -> np.ndarray:
    """Build a real symmetric matrix from 1-based ``(j, k)`` entries."""
    rho = np.zeros((dim, dim), dtype=complex)
    for (j, k), v in entries.items():
        rho[j - 1, k - 1] = v
        rho[k - 1, j - 1] = v
    return rho


def closed_ghz(env: EnvironmentKind, gt: float) -> np.ndarray:
    """Decohered GHZ state; unlisted entries vanish."""
    e = math.exp
    if env is EnvironmentKind.ZERO_TEMPERATURE:
        one = (e(-2 * gt) - e(-3 * gt)) / 2
        two = e(-gt) / 2 - e(-2 * gt) + e(-3 * gt) / 2
        entries = {
            (1, 1): e(-3 * gt) / 2,
            (1, 8): e(-1.5 * gt) / 2,
            (2, 2): one, (3, 3): one, (5, 5): one,
            (4, 4): two, (6, 6): two, (7, 7): two,
            (8, 8): 1 - 1.5 * e(-gt) + 1.5 * e(-2 * gt) - e(-3 * gt) / 2,
        }
    elif env is EnvironmentKind.INFINITE_TEMPERATURE:
        entries = {(1, 1): (1 + 3 * e(-4 * gt)) / 8, (8, 8): (1 + 3 * e(-4 * gt)) / 8,
                   (1, 8): e(-3 * gt) / 2}
        for j in range(2, 8):
            entries[(j, j)] = (1 - e(-4 * gt)) / 8
    else:
        entries = {(1, 1): 0.5, (8, 8): 0.5, (1, 8): e(-1.5 * gt) / 2}
    return _hermitian_from(entries)


def closed_w(env: EnvironmentKind, gt: float) -> np.ndarray:
    """Decohered W state ``(sqrt2|001> + |010> + |100>)/2``; unlisted entries vanish."""
    e = math.exp
    r2 = math.sqrt(2)
    if env is EnvironmentKind.ZERO_TEMPERATURE:
        a = e(-2 * gt)
        u = e(-gt) - e(-2 * gt)
        entries = {
            (2, 2): a / 2, (2, 3): a / (2 * r2), (2, 5): a / (2 * r2),
            (3, 3): a / 4, (5, 5): a / 4, (3, 5): a / 4,
            (4, 4): 3 * u / 4, (6, 6): 3 * u / 4, (4, 6): u / 4,
            (4, 7): r2 * u / 4, (6, 7): r2 * u / 4, (7, 7): u / 2,
            (8, 8): 1 - 2 * e(-gt) + e(-2 * gt),
        }
    elif env is EnvironmentKind.INFINITE_TEMPERATURE:
        vp, vm = e(-2 * gt) + e(-4 * gt), e(-2 * gt) - e(-4 * gt)
        wp, wm = 1 + e(-6 * gt), 1 - e(-6 * gt)
        entries = {
            (1, 1): (wm + vm) / 8, (7, 7): (wm - vm) / 8,
            (2, 2): (wp + vp) / 8, (8, 8): (wp - vp) / 8,
            (2, 3): r2 * vp / 8, (2, 5): r2 * vp / 8,
            (4, 7): r2 * vm / 8, (6, 7): r2 * vm / 8,
            (3, 5): vp / 8, (4, 6): vm / 8,
            (3, 3): wp / 8, (5, 5): wp / 8,
            (4, 4): wm / 8, (6, 6): wm / 8,
        }
    else:
        c = e(-gt)
        entries = {
            (2, 2): 0.5, (3, 3): 0.25, (5, 5): 0.25,
            (2, 3): r2 * c / 4, (2, 5): r2 * c / 4, (3, 5): c / 4,
        }
    return _hermitian_from(entries)
