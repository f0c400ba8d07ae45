"""Equalizer SER against channel noise and node settings.

The default grid crosses noise half-width with node kind. ``--stochastic-grid``
additionally scans leak/gain, input scale and input hold length for
stochastic nodes, which is how the stochastic operating point in the
acceptance suite was chosen.

    python scripts/equalizer_sweep.py --out runs/eq_sweep
"""

import argparse
import csv
import itertools
from pathlib import Path

from pbitrc.config import resolve
from pbitrc.experiments import run_experiment


def _ser(raw, seeds):
    s = run_experiment(resolve(dict(raw, seeds=seeds), "equalize"), write=False)["aggregate"]
    return s["ser"]["median"], s["train_ser"]["median"]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--noise", type=float, nargs="+", default=[0.0, 0.01, 0.05, 0.1, 0.2])
    ap.add_argument("--seeds", type=int, nargs="+", default=[0, 1, 2, 3, 4])
    ap.add_argument("--stochastic-grid", action="store_true")
    ap.add_argument("--out", default="runs/eq_sweep")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    with open(out / "noise.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["kind", "noise_halfwidth", "ser_median", "train_ser_median"])
        for kind, c in itertools.product(("deterministic", "stochastic"), args.noise):
            raw = {"reservoir": {"node": {"kind": kind}}, "task_params": {"noise_halfwidth": c}}
            test, train = _ser(raw, args.seeds)
            w.writerow([kind, c, test, train])
            print(f"{kind:<13} c={c:<5} SER {test:.4f} (train {train:.4f})")

    if not args.stochastic_grid:
        return
    with open(out / "stochastic_grid.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["leak", "input_scale", "hold_steps", "ser_median", "train_ser_median"])
        for leak, scale, hold in itertools.product((0.1, 0.3, 1.0), (0.5, 2.0, 5.0, 20.0), (1, 10)):
            raw = {
                "reservoir": {"input_scale": scale, "node": {"kind": "stochastic", "leak": leak, "gain": leak}},
                "hold_steps": hold,
                "test_steps": 2000,
            }
            test, train = _ser(raw, args.seeds)
            w.writerow([leak, scale, hold, test, train])
            fh.flush()
            print(f"leak={leak:<4} scale={scale:<5} hold={hold:<3} SER {test:.3f} (train {train:.3f})")


if __name__ == "__main__":
    main()
