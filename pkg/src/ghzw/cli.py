"""Command-line front end: CSV sweeps, critical-time table and self-validation.

Exit codes: 0 success, 1 validation failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import io
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from .analysis import (
    CLOSED_FORM_CRITICAL_TIMES,
    UnsupportedConfiguration,
    average_fidelity_closed,
    average_fidelity_quadrature,
    critical_time,
    fidelity_closed,
    fidelity_simulated,
)
from .decoherence import EnvironmentKind
from .teleport import ChannelKind, Scenario
from .validation import DEFAULT_TOLERANCES, run_validation

GT_LIMIT = 50.0


class UsageError(Exception):
    pass


@dataclass
class SweepSpec:
    scenario: Scenario
    env: EnvironmentKind
    channel: ChannelKind | None
    variable: str  # "gt" or "theta"
    start: float
    stop: float
    count: int
    fixed: dict = field(default_factory=dict)
    method: str = "closed"  # "closed", "sim" or "both"

    def __post_init__(self):
        if self.count < 2:
            raise UsageError("--points must be at least 2")
        if not self.start < self.stop:
            raise UsageError("sweep range must have start < stop")
        if self.variable == "gt" and not (0 <= self.start and self.stop <= GT_LIMIT):
            raise UsageError(f"gt range must lie in [0, {GT_LIMIT:g}]")
        if self.variable == "theta" and not (0 <= self.start and self.stop <= 1):
            raise UsageError("theta/pi range must lie in [0, 1]")
        if self.method not in ("closed", "sim", "both"):
            raise UsageError(f"unknown method {self.method}")
        if self.scenario is Scenario.CHANNEL_DECOHERES and self.channel is None and self.variable == "gt":
            raise UsageError("scenario 'channel' needs --channel {ghz|w}")
        if self.scenario is Scenario.BOTH_DECOHERE and self.method != "sim":
            raise UsageError(
                f"(scenario=both, env={self.env.value}) has no closed form; only --method sim is supported"
            )

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.count)


@dataclass
class CsvTable:
    header: list[str]
    rows: list[list]

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(",".join(self.header) + "\n")
        for row in self.rows:
            buf.write(",".join(_fmt(v) for v in row) + "\n")
        return buf.getvalue()


def _fmt(v) -> str:
    if isinstance(v, str):
        return v
    if v is None or (isinstance(v, float) and math.isinf(v)):
        return "inf"
    return f"{float(v):.12g}"


def cmd_sweep_time(spec: SweepSpec) -> CsvTable:
    """Average fidelity (or fidelity at a fixed theta) against gt."""
    sc, env, ch = spec.scenario, spec.env, spec.channel
    theta_over_pi = spec.fixed.get("theta_over_pi")
    rows = []
    if theta_over_pi is None:
        header = {"closed": ["gt", "f_av_closed"],
                  "sim": ["gt", "f_av_quadrature"],
                  "both": ["gt", "f_av_closed", "f_av_quadrature"]}[spec.method]
        for g in spec.values():
            row = [g]
            if spec.method in ("closed", "both"):
                row.append(average_fidelity_closed(sc, env, ch, g))
            if spec.method in ("sim", "both"):
                row.append(average_fidelity_quadrature(sc, env, ch, g, integrand="simulated"))
            rows.append(row)
    else:
        th = theta_over_pi * math.pi
        phi = spec.fixed.get("phi", 0.0)
        header = {"closed": ["gt", "f_closed"], "sim": ["gt", "f_sim"],
                  "both": ["gt", "f_closed", "f_sim"]}[spec.method]
        for g in spec.values():
            row = [g]
            if spec.method in ("closed", "both"):
                row.append(fidelity_closed(sc, env, ch, th, g))
            if spec.method in ("sim", "both"):
                row.append(fidelity_simulated(sc, env, ch, th, phi, g))
            rows.append(row)
    return CsvTable(header, rows)


def cmd_sweep_theta(spec: SweepSpec) -> CsvTable:
    """Fidelity against theta/pi at fixed gt; both channels side by side for channel decoherence."""
    g = spec.fixed["gt"]
    sc, env = spec.scenario, spec.env
    channels = [spec.channel] if sc is not Scenario.CHANNEL_DECOHERES else [ChannelKind.GHZ, ChannelKind.W]
    methods = {"closed": ["closed"], "sim": ["sim"], "both": ["closed", "sim"]}[spec.method]

    header = ["theta_over_pi"]
    for ch in channels:
        for m in methods:
            name = "f" if sc is not Scenario.CHANNEL_DECOHERES else f"f_{ch.value}"
            header.append(name if len(methods) == 1 else f"{name}_{m}")
    rows = []
    for t in spec.values():
        th = float(t) * math.pi
        row = [t]
        for ch in channels:
            for m in methods:
                if m == "closed":
                    row.append(fidelity_closed(sc, env, ch, th, g))
                else:
                    row.append(fidelity_simulated(sc, env, ch, th, 0.0, g))
        rows.append(row)
    return CsvTable(header, rows)


def cmd_critical_times() -> CsvTable:
    rows = []
    for scenario, channels in ((Scenario.INPUT_DECOHERES, [None]),
                               (Scenario.CHANNEL_DECOHERES, [ChannelKind.GHZ, ChannelKind.W])):
        for ch in channels:
            for env in EnvironmentKind:
                ct = critical_time(scenario, env, ch)
                label = CLOSED_FORM_CRITICAL_TIMES.get((scenario, ch, env), ("",))[0]
                rows.append([scenario.value, ch.value if ch else "-", env.value, ct.gt_c, label])
    return CsvTable(["scenario", "channel", "env", "gt_c", "closed_form"], rows)


def cmd_validate(tolerances: dict[str, float] | None = None, out=None) -> int:
    out = out or sys.stdout
    results = run_validation(tolerances)
    for r in results:
        print(r.line(), file=out)
    failed = [r for r in results if not r.passed]
    if failed:
        print(f"validation FAILED: {len(failed)} of {len(results)} checks; first failure: {failed[0].name}",
              file=out)
        return 1
    print(f"validation passed: {len(results)} checks", file=out)
    return 0


# ---------------------------------------------------------------- argument parsing

_SCENARIOS = {s.value: s for s in Scenario}
_ENVS = {e.value: e for e in EnvironmentKind}
_CHANNELS = {c.value: c for c in ChannelKind}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ghzw", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--scenario", choices=list(_SCENARIOS), required=True)
        sp.add_argument("--env", choices=list(_ENVS), required=True)
        sp.add_argument("--channel", choices=list(_CHANNELS))
        sp.add_argument("--points", type=int, default=101)
        sp.add_argument("--method", choices=["closed", "sim", "both"], default="closed")
        sp.add_argument("--out", help="output path (default: standard output)")

    st = sub.add_parser("sweep-time", help="average fidelity versus gt")
    common(st)
    st.add_argument("--gt-min", type=float, default=0.0)
    st.add_argument("--gt-max", type=float, default=3.0)
    st.add_argument("--theta-over-pi", type=float,
                    help="sweep the fidelity at this fixed theta instead of the average")

    sth = sub.add_parser("sweep-theta", help="fidelity versus theta/pi at fixed gt")
    common(sth)
    sth.add_argument("--gt", type=float, required=True)

    ct = sub.add_parser("critical-times", help="table of times where the average fidelity hits 2/3")
    ct.add_argument("--out")

    va = sub.add_parser("validate", help="run the self-check suite")
    va.add_argument("--tol", action="append", default=[], metavar="NAME=VALUE",
                    help=f"override a tolerance; names: {', '.join(DEFAULT_TOLERANCES)}")
    return p


def _parse_tolerances(items: list[str]) -> dict[str, float]:
    out = {}
    for item in items:
        name, sep, value = item.partition("=")
        if not sep or name not in DEFAULT_TOLERANCES:
            raise UsageError(f"bad tolerance override {item!r}")
        out[name] = float(value)
    return out


def _spec_from_args(args) -> SweepSpec:
    scenario = _SCENARIOS[args.scenario]
    channel = _CHANNELS[args.channel] if args.channel else None
    if scenario is Scenario.INPUT_DECOHERES:
        channel = None
    if args.command == "sweep-time":
        fixed = {} if args.theta_over_pi is None else {"theta_over_pi": args.theta_over_pi}
        if args.theta_over_pi is not None and not 0 <= args.theta_over_pi <= 1:
            raise UsageError("--theta-over-pi must lie in [0, 1]")
        return SweepSpec(scenario, _ENVS[args.env], channel, "gt", args.gt_min, args.gt_max,
                         args.points, fixed, args.method)
    if not 0 <= args.gt <= GT_LIMIT:
        raise UsageError(f"--gt must lie in [0, {GT_LIMIT:g}]")
    if scenario is Scenario.BOTH_DECOHERE and channel is None:
        channel = ChannelKind.GHZ
    return SweepSpec(scenario, _ENVS[args.env], channel, "theta", 0.0, 1.0, args.points,
                     {"gt": args.gt}, args.method)


def _emit(table: CsvTable, path: str | None) -> None:
    text = table.to_csv()
    if path:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "validate":
            return cmd_validate(_parse_tolerances(args.tol))
        if args.command == "critical-times":
            _emit(cmd_critical_times(), args.out)
            return 0
        spec = _spec_from_args(args)
        if spec.scenario is Scenario.BOTH_DECOHERE:
            print("notice: scenario 'both' has no closed-form reference; values come from simulation only",
                  file=sys.stderr)
        table = cmd_sweep_time(spec) if args.command == "sweep-time" else cmd_sweep_theta(spec)
        _emit(table, args.out)
        return 0
    except (UsageError, UnsupportedConfiguration) as exc:
        print(f"ghzw: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
