"""Write the CSV data behind the fidelity figures.

fig2_input_<env>.csv     average fidelity vs gt, input decoherence
fig3_theta_<env>.csv     fidelity vs theta/pi at gt = 0.5, GHZ and W channels
fig4_channel_<env>.csv   average fidelity vs gt, GHZ and W channels
critical_times.csv       the critical-time table

Closed-form and simulated columns are written side by side so that the
W-channel mismatch for the inf and deph environments is visible in the data.

    python3 scripts/reproduce_figures.py --out figures/
"""

import argparse
import pathlib

from ghzw.cli import CsvTable, SweepSpec, cmd_critical_times, cmd_sweep_theta, cmd_sweep_time
from ghzw.decoherence import EnvironmentKind
from ghzw.teleport import ChannelKind, Scenario


def merge(tables: dict[str, CsvTable]) -> CsvTable:
    """Join sweeps that share their first column, prefixing the value columns."""
    names = list(tables)
    first = tables[names[0]]
    header = [first.header[0]]
    for name in names:
        header += [f"{name}_{h}" for h in tables[name].header[1:]]
    rows = []
    for i, row in enumerate(first.rows):
        merged = [row[0]]
        for name in names:
            merged += tables[name].rows[i][1:]
        rows.append(merged)
    return CsvTable(header, rows)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=pathlib.Path, default=pathlib.Path("figures"))
    ap.add_argument("--points", type=int, default=101)
    ap.add_argument("--gt-max", type=float, default=3.0)
    args = ap.parse_args(argv)
    args.out.mkdir(parents=True, exist_ok=True)

    for env in EnvironmentKind:
        t = cmd_sweep_time(SweepSpec(Scenario.INPUT_DECOHERES, env, None, "gt", 0.0, args.gt_max,
                                     args.points, method="both"))
        (args.out / f"fig2_input_{env.value}.csv").write_text(t.to_csv())

        t = cmd_sweep_theta(SweepSpec(Scenario.CHANNEL_DECOHERES, env, None, "theta", 0.0, 1.0,
                                      args.points, fixed={"gt": 0.5}, method="both"))
        (args.out / f"fig3_theta_{env.value}.csv").write_text(t.to_csv())

        per_channel = {
            ch.value: cmd_sweep_time(SweepSpec(Scenario.CHANNEL_DECOHERES, env, ch, "gt", 0.0, args.gt_max,
                                               args.points, method="both"))
            for ch in ChannelKind
        }
        (args.out / f"fig4_channel_{env.value}.csv").write_text(merge(per_channel).to_csv())

    (args.out / "critical_times.csv").write_text(cmd_critical_times().to_csv())
    print(f"wrote {len(list(args.out.glob('*.csv')))} files to {args.out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
