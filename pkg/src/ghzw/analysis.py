"""Teleportation fidelities, Bloch-sphere averages and derived thresholds.

Each quantity is available in closed form and from the full density-matrix
pipeline (master-equation evolution, coherent circuit, partial trace), so
the two can be checked against each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.optimize import bisect

from .core import PureStateAngles, fidelity_against_pure, ghz_state, input_state, projector, w_state
from .decoherence import EnvironmentKind, closed_ghz, closed_w, evolve
from .teleport import ChannelKind, Scenario, teleport_output

CLASSICAL_LIMIT = 2.0 / 3.0

ZERO = EnvironmentKind.ZERO_TEMPERATURE
INF = EnvironmentKind.INFINITE_TEMPERATURE
DEPH = EnvironmentKind.DEPHASING


class UnsupportedConfiguration(ValueError):
    """The (scenario, environment, channel) combination has no defined result."""


def _check(scenario: Scenario, channel: ChannelKind | None, closed: bool) -> None:
    if scenario is Scenario.CHANNEL_DECOHERES and channel is None:
        raise UnsupportedConfiguration("channel decoherence needs a channel (ghz or w)")
    if closed and scenario is Scenario.BOTH_DECOHERE:
        raise UnsupportedConfiguration(
            "no closed form when both the input and the channel decohere; use the simulated pipeline"
        )


# ---------------------------------------------------------------- closed forms

def _coefficients(scenario: Scenario, env: EnvironmentKind, channel: ChannelKind | None,
                  gt: float) -> tuple[float, float, float]:
    """(A, B, C) with F = A + B sin^2(theta) + C sin^2(theta/2)."""
    e = math.exp
    if scenario is Scenario.INPUT_DECOHERES:
        if env is ZERO:
            return e(-gt), 0.5 * (e(-gt / 2) - e(-gt)), 1 - e(-gt)
        if env is INF:
            return 0.5 * (1 + e(-2 * gt)), 0.5 * (e(-gt) - e(-2 * gt)), 0.0
        return 1.0, 0.5 * (e(-gt / 2) - 1), 0.0
    if channel is ChannelKind.GHZ:
        if env is ZERO:
            return (1 - e(-gt) + e(-2 * gt),
                    -0.5 * (1 - e(-1.5 * gt) - 2 * e(-gt) + 2 * e(-2 * gt)), 0.0)
        if env is INF:
            return 0.5 * (1 + e(-4 * gt)), 0.5 * (e(-3 * gt) - e(-4 * gt)), 0.0
        return 1.0, -0.5 * (1 - e(-1.5 * gt)), 0.0
    if env is ZERO:
        return (1 - 1.5 * e(-gt) + 1.5 * e(-2 * gt),
                -0.5 * (1 - 3 * e(-gt) + 2 * e(-2 * gt)), 0.0)
    if env is INF:
        return 0.25 * (2 + e(-4 * gt) + e(-6 * gt)), 0.5 * (e(-2 * gt) - e(-6 * gt)), 0.0
    return 0.25 * (3 + e(-gt)), -(1 - e(-gt)) / 16, 0.0


def fidelity_closed(scenario: Scenario, env: EnvironmentKind, channel: ChannelKind | None,
                    theta: float, gt: float) -> float:
    """Analytic teleportation fidelity; independent of the azimuthal angle."""
    _check(scenario, channel, closed=True)
    a, b, c = _coefficients(scenario, env, channel, gt)
    return a + b * math.sin(theta) ** 2 + c * math.sin(theta / 2) ** 2


def average_fidelity_closed(scenario: Scenario, env: EnvironmentKind,
                            channel: ChannelKind | None, gt: float) -> float:
    """Analytic Bloch-sphere average of :func:`fidelity_closed`."""
    _check(scenario, channel, closed=True)
    e = math.exp
    if scenario is Scenario.INPUT_DECOHERES:
        if env is ZERO:
            return 0.5 + e(-gt / 2) / 3 + e(-gt) / 6
        if env is INF:
            return 0.5 + e(-gt) / 3 + e(-2 * gt) / 6
        return 2 / 3 + e(-gt / 2) / 3
    if channel is ChannelKind.GHZ:
        if env is ZERO:
            return 2 / 3 - e(-gt) / 3 + e(-2 * gt) / 3 + e(-1.5 * gt) / 3
        if env is INF:
            return 0.5 + e(-3 * gt) / 3 + e(-4 * gt) / 6
        return 2 / 3 + e(-1.5 * gt) / 3
    if env is ZERO:
        return 2 / 3 - e(-gt) / 2 + 5 * e(-2 * gt) / 6
    if env is INF:
        return 0.5 + e(-2 * gt) / 3 + e(-4 * gt) / 4 - e(-6 * gt) / 12
    return 17 / 24 + 7 * e(-gt) / 24


# ---------------------------------------------------------------- simulation

_PRISTINE = {ChannelKind.GHZ: ghz_state, ChannelKind.W: w_state}
_CLOSED_CHANNEL = {ChannelKind.GHZ: closed_ghz, ChannelKind.W: closed_w}


@lru_cache(maxsize=4096)
def decohered_channel(channel: ChannelKind, env: EnvironmentKind, gt: float,
                      evolution: str = "rk4") -> np.ndarray:
    """Channel state after decoherence, by integration (``rk4``) or analytically (``closed``)."""
    if evolution == "rk4":
        rho = evolve(_PRISTINE[channel](), env, gt)
    elif evolution == "closed":
        rho = _CLOSED_CHANNEL[channel](env, gt)
    else:
        raise ValueError(f"unknown evolution {evolution!r}")
    rho.flags.writeable = False
    return rho


def fidelity_simulated(scenario: Scenario, env: EnvironmentKind, channel: ChannelKind | None,
                       theta: float, phi: float, gt: float, evolution: str = "rk4") -> float:
    """Fidelity from the full pipeline: decohere, run the circuit, trace out Alice.

    For input decoherence ``channel`` may be None, in which case the GHZ
    circuit is used (the result does not depend on it).
    """
    _check(scenario, channel, closed=False)
    channel = channel or ChannelKind.GHZ
    psi = input_state(PureStateAngles(theta, phi))
    rho_in = projector(psi)
    if scenario in (Scenario.INPUT_DECOHERES, Scenario.BOTH_DECOHERE):
        rho_in = evolve(rho_in, env, gt)
    if scenario in (Scenario.CHANNEL_DECOHERES, Scenario.BOTH_DECOHERE):
        rho_ch = decohered_channel(channel, env, gt, evolution)
    else:
        rho_ch = _PRISTINE[channel]()
    return fidelity_against_pure(psi, teleport_output(rho_in, rho_ch, channel))


@dataclass(frozen=True)
class FidelitySample:
    theta: float
    phi: float
    gt: float
    f: float


def fidelity_grid(scenario: Scenario, env: EnvironmentKind, channel: ChannelKind | None,
                  thetas: Iterable[float], gts: Iterable[float], phi: float = 0.0,
                  method: str = "closed") -> list[FidelitySample]:
    gts = list(gts)
    out = []
    for th in thetas:
        for g in gts:
            if method == "closed":
                f = fidelity_closed(scenario, env, channel, th, g)
            else:
                f = fidelity_simulated(scenario, env, channel, th, phi, g)
            out.append(FidelitySample(th, phi, g, min(max(f, 0.0), 1.0)))
    return out


# ---------------------------------------------------------------- averages

@dataclass(frozen=True)
class AverageFidelityResult:
    gt: float
    f_av: float
    method: str  # "closed", "quadrature" or "montecarlo"


def _integrand(scenario, env, channel, gt, integrand: str) -> Callable[[float, float], float]:
    if integrand == "closed":
        return lambda th, ph: fidelity_closed(scenario, env, channel, th, gt)
    if integrand == "simulated":
        return lambda th, ph: fidelity_simulated(scenario, env, channel, th, ph, gt)
    raise ValueError(f"unknown integrand {integrand!r}")


def sphere_average(f: Callable[[float, float], float], n_nodes: int = 32, n_phi: int = 4) -> float:
    """Average of ``f(theta, phi)`` over the unit sphere.

    Gauss-Legendre in ``cos(theta)`` and a uniform rule in ``phi``.
    """
    if n_nodes < 8:
        raise ValueError("n_nodes must be >= 8")
    u, w = leggauss(n_nodes)
    phis = 2 * np.pi * np.arange(n_phi) / n_phi
    total = 0.0
    for ui, wi in zip(u, w):
        th = math.acos(float(np.clip(ui, -1.0, 1.0)))
        total += wi * sum(f(th, ph) for ph in phis) / n_phi
    return total / 2


def average_fidelity_quadrature(scenario: Scenario, env: EnvironmentKind,
                                channel: ChannelKind | None, gt: float, n_nodes: int = 32,
                                integrand: str = "closed") -> float:
    """Sphere average by quadrature of either the analytic or the simulated fidelity."""
    if integrand == "closed":
        _check(scenario, channel, closed=True)
    return sphere_average(_integrand(scenario, env, channel, gt, integrand), n_nodes)


def average_fidelity_montecarlo(scenario: Scenario, env: EnvironmentKind,
                                channel: ChannelKind | None, gt: float, samples: int = 2000,
                                seed: int = 0, integrand: str = "closed") -> float:
    """Uniform random points on the sphere; standard error about 0.1/sqrt(samples)."""
    rng = np.random.default_rng(seed)
    f = _integrand(scenario, env, channel, gt, integrand)
    thetas = np.arccos(rng.uniform(-1.0, 1.0, samples))
    phis = rng.uniform(0.0, 2 * np.pi, samples)
    return float(np.mean([f(t, p) for t, p in zip(thetas, phis)]))


def average_fidelity(scenario: Scenario, env: EnvironmentKind, channel: ChannelKind | None,
                     gt: float, method: str = "closed") -> AverageFidelityResult:
    if method == "closed":
        f = average_fidelity_closed(scenario, env, channel, gt)
    elif method == "quadrature":
        f = average_fidelity_quadrature(scenario, env, channel, gt)
    elif method == "montecarlo":
        f = average_fidelity_montecarlo(scenario, env, channel, gt)
    else:
        raise ValueError(f"unknown method {method!r}")
    return AverageFidelityResult(gt, f, method)


# ---------------------------------------------------------------- thresholds

SCAN_STEP = 0.01
SCAN_MAX = 50.0
ROOT_TOL = 1e-12
# a scan point counts as "below" only past roundoff of O(1) quantities
BELOW_EPS = 1e-13


def first_downward_crossing(f: Callable[[float], float], start: float = 0.0,
                            stop: float = SCAN_MAX, step: float = SCAN_STEP) -> float | None:
    """Smallest root where ``f`` goes from positive to negative, or None.

    Values within ``BELOW_EPS`` of zero are not treated as a crossing, so a
    curve decaying asymptotically onto zero never reports one.
    """
    n = int(round((stop - start) / step))
    last_pos = start if f(start) > 0 else None
    for k in range(1, n + 1):
        x = start + k * step
        fx = f(x)
        if fx > 0:
            last_pos = x
        elif fx < -BELOW_EPS and last_pos is not None:
            return bisect(f, last_pos, x, xtol=ROOT_TOL)
    return None


@dataclass(frozen=True)
class CriticalTime:
    """Rescaled time at which the average fidelity falls to 2/3.

    ``gt_c`` is None when the average stays above 2/3 for all times.
    """

    scenario: Scenario
    env: EnvironmentKind
    channel: ChannelKind | None
    gt_c: float | None

    @property
    def finite(self) -> bool:
        return self.gt_c is not None


def critical_time(scenario: Scenario, env: EnvironmentKind,
                  channel: ChannelKind | None = None) -> CriticalTime:
    if scenario is Scenario.INPUT_DECOHERES:
        channel = None
    root = first_downward_crossing(
        lambda g: average_fidelity_closed(scenario, env, channel, g) - CLASSICAL_LIMIT
    )
    return CriticalTime(scenario, env, channel, root)


# Known analytic critical times, as (label, value).
CLOSED_FORM_CRITICAL_TIMES = {
    (Scenario.INPUT_DECOHERES, None, ZERO): ("ln(3+2*sqrt(2))", math.log(3 + 2 * math.sqrt(2))),
    (Scenario.INPUT_DECOHERES, None, INF): ("ln(1+sqrt(2))", math.log(1 + math.sqrt(2))),
    (Scenario.CHANNEL_DECOHERES, ChannelKind.GHZ, ZERO): ("ln((3+sqrt(5))/2)",
                                                         math.log((3 + math.sqrt(5)) / 2)),
    (Scenario.CHANNEL_DECOHERES, ChannelKind.W, ZERO): ("ln(5/3)", math.log(5 / 3)),
}


def sin2_coefficient(channel: ChannelKind, gt: float) -> float:
    """Coefficient of sin^2(theta) in the zero-temperature channel fidelity."""
    return _coefficients(Scenario.CHANNEL_DECOHERES, ZERO, channel, gt)[1]


def monotonicity_switch(channel: ChannelKind, scenario: Scenario = Scenario.CHANNEL_DECOHERES,
                        env: EnvironmentKind = ZERO) -> float:
    """Time at which the zero-temperature fidelity stops peaking at theta = pi/2.

    Before it F falls with |theta - pi/2|, afterwards it grows.
    """
    if scenario is not Scenario.CHANNEL_DECOHERES or env is not ZERO:
        raise UnsupportedConfiguration("monotonicity switch is defined for zero-temperature channel decoherence")
    # the coefficient vanishes at gt = 0, so start the scan just after it
    root = first_downward_crossing(lambda g: sin2_coefficient(channel, g), start=SCAN_STEP)
    if root is None:
        raise RuntimeError("no sign change of the sin^2 coefficient found")
    return root


@dataclass(frozen=True)
class CrossoverInterval:
    """Band ``theta_low < theta/pi < theta_high`` where the W channel beats GHZ.

    Both bounds are None when GHZ is at least as good for every theta.
    """

    env: EnvironmentKind
    gt: float
    theta_low: float | None
    theta_high: float | None

    @property
    def empty(self) -> bool:
        return self.theta_low is None


def robustness_crossover(env: EnvironmentKind, gt: float, method: str = "closed") -> CrossoverInterval:
    """Where ``F_W(theta) > F_GHZ(theta)`` under channel decoherence at ``gt``."""
    if method == "closed":
        def fid(ch, th):
            return fidelity_closed(Scenario.CHANNEL_DECOHERES, env, ch, th, gt)
    else:
        def fid(ch, th):
            return fidelity_simulated(Scenario.CHANNEL_DECOHERES, env, ch, th, 0.0, gt)

    def diff(th):
        return fid(ChannelKind.W, th) - fid(ChannelKind.GHZ, th)

    pole, equator = diff(0.0), diff(math.pi / 2)
    if pole <= 0 and equator <= 0:
        return CrossoverInterval(env, gt, None, None)
    if pole > 0 and equator > 0:
        return CrossoverInterval(env, gt, 0.0, 1.0)
    if pole > 0:
        raise ValueError("W wins near the poles only; the winning set is not a single band")
    root = bisect(diff, 0.0, math.pi / 2, xtol=ROOT_TOL)
    return CrossoverInterval(env, gt, root / math.pi, 1 - root / math.pi)
