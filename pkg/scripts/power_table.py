"""Per-node power breakdown and its dependence on write current and supply.

    python scripts/power_table.py --out runs/power
"""

import argparse
import csv
import dataclasses
import json
from pathlib import Path

import numpy as np

from pbitrc.power import DeviceParams, format_table, power_report


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--params", help="JSON file with DeviceParams fields")
    ap.add_argument("--out", default="runs/power")
    args = ap.parse_args()
    base = DeviceParams()
    if args.params:
        with open(args.params) as fh:
            base = DeviceParams(**json.load(fh))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    print(format_table(power_report(base)))
    with open(out / "power_sweep.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["i_write_uA", "vdd_V", "gshe_writer", "mtj_reader", "r_up", "node_total"])
        for i_write in np.linspace(5, 40, 8):
            for vdd in (0.6, 0.8, 1.0):
                r = power_report(dataclasses.replace(base, i_write=float(i_write), vdd=vdd))
                w.writerow([i_write, vdd, r.gshe_writer, r.mtj_reader, r.r_up, r.node_total])
    print(f"wrote {out / 'power_sweep.csv'}")


if __name__ == "__main__":
    main()
