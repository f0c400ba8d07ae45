"""Mackey-Glass NMSE against reservoir size, teacher-forced and free-running.

    python scripts/mg_size_sweep.py --sizes 10 20 50 100 200 500 1000 --out runs/mg_sweep
"""

import argparse
import csv
from pathlib import Path

from pbitrc.config import resolve
from pbitrc.experiments import run_experiment


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", type=int, nargs="+", default=[10, 20, 50, 100, 200, 500, 1000])
    ap.add_argument("--seeds", type=int, nargs="+", default=[0, 1, 2, 3, 4])
    ap.add_argument("--kinds", nargs="+", default=["deterministic", "stochastic"])
    ap.add_argument("--horizon", type=int, default=200)
    ap.add_argument("--out", default="runs/mg_sweep")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    with open(out / "mg_sweep.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["task", "kind", "N", "nmse_median", "nmse_min", "nmse_max"])
        for task in ("mg-follow", "mg-generate"):
            for kind in args.kinds:
                for N in args.sizes:
                    raw = {"reservoir": {"N": N, "node": {"kind": kind}}, "seeds": args.seeds,
                           "free_horizon": args.horizon}
                    agg = run_experiment(resolve(raw, task), write=False)["aggregate"]["nmse"]
                    w.writerow([task, kind, N, agg["median"], agg["min"], agg["max"]])
                    fh.flush()
                    print(f"{task:<12} {kind:<13} N={N:<5} median NMSE {agg['median']:.3e}")


if __name__ == "__main__":
    main()
