"""Per-task experiment pipelines and the multi-seed runner.

Each seed rebuilds the reservoir from that seed (the ``reservoir.seed``
field of the config is replaced) and draws task data from streams derived
from the same seed, so a seed fully determines its run.
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path

import numpy as np

from .config import ExperimentConfig
from .errors import ConfigError
from .metrics import nmse, ser
from .pbit import pbit_sample_many
from .power import format_table, power_report
from .readout import ridge_fit, predict
from .reservoir import build_weights, run_free, run_teacher_forced
from .rng import child_generator, uniform_pm1
from .model_io import model_to_dict
from .tasks import channel_dataset, mackey_glass, normalize_signal, write_channel_csv

__all__ = ["mg_signal", "run_seed", "run_experiment", "simulate_pair", "pbit_stats", "atomic_write"]


def atomic_write(path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _csv_text(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(header)
    for row in rows:
        w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def mg_signal(cfg: ExperimentConfig):
    """Subsampled, transient-free Mackey-Glass series, normalized on the training part."""
    raw = mackey_glass(cfg.task_params)[:: cfg.subsample][cfg.transient:]
    _, record = normalize_signal(raw[: cfg.train_steps])
    return record.apply(raw), record


def _harvest(weights, rcfg, inputs, hold, washout, state=None, return_state=False):
    """Teacher-forced features with each input held for ``hold`` reservoir steps."""
    if hold == 1:
        return run_teacher_forced(weights, rcfg, inputs, washout=washout, state=state, return_state=return_state)
    u = np.repeat(np.asarray(inputs, dtype=float), hold, axis=0)
    out = run_teacher_forced(weights, rcfg, u, washout=0, state=state, return_state=return_state)
    X, st = out if return_state else (out, None)
    X = X[hold - 1 :: hold][washout:]
    return (X, st) if return_state else X


def _with_model(files, cfg, rcfg, weights, readout, seed):
    if cfg.save_weights:
        files[f"model_{seed}.json"] = json.dumps(model_to_dict(rcfg, weights, readout))
    return files


def _mg_follow(cfg, rcfg, out_dir, seed):
    s, _ = mg_signal(cfg)
    h, wash = cfg.target_shift, cfg.ridge.washout
    n_in = cfg.train_steps + cfg.test_steps
    weights = build_weights(rcfg)
    X = _harvest(weights, rcfg, s[:n_in], cfg.hold_steps, wash)
    Y = s[wash + h : n_in + h]
    n_tr = cfg.train_steps - wash
    readout = ridge_fit(X[:n_tr], Y[:n_tr], cfg.ridge.lam, rcfg.layout)
    y = predict(readout, X)[:, 0]
    metrics = {
        "nmse": nmse(y[n_tr:], Y[n_tr:], cfg.nmse_normalization),
        "train_nmse": nmse(y[:n_tr], Y[:n_tr], cfg.nmse_normalization),
        "lambda": readout.lam,
        "count": int(len(Y) - n_tr),
    }
    t0 = cfg.train_steps
    rows = zip(range(t0, n_in), s[t0:n_in], Y[n_tr:], y[n_tr:])
    files = {f"trace_{seed}.csv": _csv_text(["t", "input", "target", "output"], rows)}
    return metrics, _with_model(files, cfg, rcfg, weights, readout, seed)


def _mg_generate(cfg, rcfg, out_dir, seed):
    s, _ = mg_signal(cfg)
    h, wash, n_tr_in = cfg.target_shift, cfg.ridge.washout, cfg.train_steps
    if cfg.hold_steps != 1:
        raise ConfigError("mg-generate does not support hold_steps != 1")
    weights = build_weights(rcfg)
    X, state = run_teacher_forced(weights, rcfg, s[:n_tr_in], washout=wash, return_state=True)
    Y = s[wash + h : n_tr_in + h]
    readout = ridge_fit(X, Y, cfg.ridge.lam, rcfg.layout)
    L, H = cfg.prime_steps, cfg.free_horizon
    prime = s[n_tr_in : n_tr_in + L]
    _, primed = run_free(weights, rcfg, readout, prime, 0, state=state, return_state=True)
    y_free = run_free(weights, rcfg, readout, np.empty((0, 1)), H, state=primed)[:, 0]
    start = n_tr_in + L + h  # time index of the first free-run target
    truth = s[start : start + H]
    metrics = {
        "nmse": nmse(y_free, truth, cfg.nmse_normalization) if H >= 2 else None,
        "train_nmse": nmse(predict(readout, X)[:, 0], Y, cfg.nmse_normalization),
        "lambda": readout.lam,
        "count": int(H),
    }
    rows = zip(range(n_tr_in + L, n_tr_in + L + H), np.r_[primed.y_prev, y_free[:-1]][:H], truth, y_free)
    files = {f"trace_{seed}.csv": _csv_text(["t", "input", "target", "output"], rows)}
    return metrics, _with_model(files, cfg, rcfg, weights, readout, seed)


def _equalize(cfg, rcfg, out_dir, seed):
    p = cfg.task_params
    wash = cfg.ridge.washout
    n_in = cfg.train_steps + cfg.test_steps
    # edge trimming of the tap span consumes 9 symbols
    ds = channel_dataset(p, n_in + 9, child_generator(seed, "channel"))
    _, record = normalize_signal(ds.u[: cfg.train_steps])
    u = record.apply(ds.u)
    weights = build_weights(rcfg)
    X = _harvest(weights, rcfg, u, cfg.hold_steps, wash)
    Y = ds.target[wash:]
    n_tr = cfg.train_steps - wash
    readout = ridge_fit(X[:n_tr], Y[:n_tr], cfg.ridge.lam, rcfg.layout)
    y = predict(readout, X)[:, 0]
    metrics = {
        "ser": ser(y[n_tr:], Y[n_tr:], p.alphabet),
        "train_ser": ser(y[:n_tr], Y[:n_tr], p.alphabet),
        "nmse": nmse(y[n_tr:], Y[n_tr:], cfg.nmse_normalization),
        "lambda": readout.lam,
        "count": int(len(Y) - n_tr),
    }
    buf = io.StringIO()
    write_channel_csv(ds, buf)
    t = ds.t[wash:][n_tr:]
    rows = zip(t, ds.u[wash:][n_tr:], Y[n_tr:], y[n_tr:])
    files = {
        f"trace_{seed}.csv": _csv_text(["t", "input", "target", "output"], rows),
        f"channel_{seed}.csv": buf.getvalue(),
    }
    return metrics, _with_model(files, cfg, rcfg, weights, readout, seed)


def pbit_stats(params, seed: int):
    """Mean and std of p-bit spins on a grid of constant inputs.

    Grid point ``k`` uses node id ``k`` and steps ``0..samples-1``.
    """
    rows = []
    steps = np.arange(params.samples)
    for k, I in enumerate(params.grid):
        m = pbit_sample_many(I, seed, k, steps)
        rows.append((I, float(m.mean()), float(m.std()), float(np.tanh(I))))
    return rows


def _pbit_stats(cfg, rcfg, out_dir, seed):
    rows = pbit_stats(cfg.task_params, seed)
    n = cfg.task_params.samples
    z = [abs(mean - th) / max(np.sqrt((1 - th * th) / n), 1e-300) for _, mean, _, th in rows]
    metrics = {"max_z": float(max(z)), "max_abs_error": float(max(abs(r[1] - r[3]) for r in rows)), "count": n}
    return metrics, {"_rows": rows}


def simulate_pair(J: float, steps: int, seed: int = 0, order: str = "sequential", chunk: int = 65536) -> float:
    """Time-averaged ``m1*m2`` of two p-bits coupled with strength ``J``.

    ``order="sequential"`` updates bit 1 from bit 2's current spin, then
    bit 2 from bit 1's new spin. ``"synchronous"`` updates both from the
    previous step, which splits the pair into two independent alternating
    chains and leaves the equal-time correlation at zero. Starts from
    (+1, +1); bit ``i`` at step ``t`` uses uniform ``(seed, i, t)``.
    """
    if order not in ("sequential", "synchronous"):
        raise ValueError(f"unknown update order {order!r}")
    th = float(np.tanh(J))
    m1 = m2 = 1.0
    acc = 0.0
    sequential = order == "sequential"
    for start in range(1, steps + 1, chunk):
        idx = np.arange(start, min(start + chunk, steps + 1))
        r = uniform_pm1(seed, np.array([[0], [1]]), idx[None, :])
        r1, r2 = r[0].tolist(), r[1].tolist()
        if sequential:
            for a, b in zip(r1, r2):
                m1 = 1.0 if a + th * m2 >= 0.0 else -1.0
                m2 = 1.0 if b + th * m1 >= 0.0 else -1.0
                acc += m1 * m2
        else:
            for a, b in zip(r1, r2):
                m1, m2 = (1.0 if a + th * m2 >= 0.0 else -1.0), (1.0 if b + th * m1 >= 0.0 else -1.0)
                acc += m1 * m2
    return acc / steps


_PIPELINES = {
    "mg-follow": _mg_follow,
    "mg-generate": _mg_generate,
    "equalize": _equalize,
    "pbit-stats": _pbit_stats,
}


def run_seed(cfg: ExperimentConfig, seed: int):
    """Run one seed; returns ``(metrics, {filename: text})`` without writing files."""
    rcfg = replace(cfg.reservoir, seed=int(seed))
    return _PIPELINES[cfg.task](cfg, rcfg, cfg.output_dir, seed)


def _aggregate(per_seed):
    keys = sorted({k for m in per_seed.values() for k, v in m.items() if isinstance(v, (int, float)) and v is not None})
    agg = {}
    for k in keys:
        vals = [m[k] for m in per_seed.values() if m.get(k) is not None]
        if vals:
            agg[k] = {"median": float(np.median(vals)), "min": float(np.min(vals)), "max": float(np.max(vals))}
    return agg


def run_experiment(cfg: ExperimentConfig, write: bool = True, jobs: int = 1, echo: bool = False) -> dict:
    """Run every seed and return the summary dict (also written as summary.json)."""
    t0 = time.perf_counter()
    out = Path(cfg.output_dir)
    artifacts = []
    per_seed = {}
    extra = {}

    if cfg.task == "power":
        report = power_report(cfg.task_params)
        extra["power"] = report.to_dict()
        extra["table"] = format_table(report)
        if write:
            atomic_write(out / "power.json", json.dumps(report.to_dict(), indent=2) + "\n")
            artifacts.append(str(out / "power.json"))
        per_seed = {}
    else:
        if jobs > 1 and len(cfg.seeds) > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                results = list(pool.map(run_seed, [cfg] * len(cfg.seeds), cfg.seeds))
        else:
            results = [run_seed(cfg, s) for s in cfg.seeds]
        pooled = []
        for seed, (metrics, files) in zip(cfg.seeds, results):
            per_seed[str(seed)] = metrics
            for name, text in files.items():
                if name == "_rows":
                    pooled.append(text)
                    continue
                if write:
                    atomic_write(out / name, text)
                    artifacts.append(str(out / name))
        if pooled:
            rows = []
            for k in range(len(pooled[0])):
                I, _, _, th = pooled[0][k]
                means = [p[k][1] for p in pooled]
                stds = [p[k][2] for p in pooled]
                mean = float(np.mean(means))
                # pooled std of equal-sized groups
                var = float(np.mean([s * s + (m - mean) ** 2 for s, m in zip(stds, means)]))
                rows.append((I, mean, np.sqrt(var), th))
            extra["pbit_stats"] = rows
            if write:
                atomic_write(out / "pbit_stats.csv", _csv_text(["I", "mean", "std", "tanh_I"], rows))
                artifacts.append(str(out / "pbit_stats.csv"))

    summary = {
        "config": cfg.to_dict(),
        "per_seed": per_seed,
        "aggregate": _aggregate(per_seed),
        "wall_clock_s": time.perf_counter() - t0,
        "artifacts": artifacts,
    }
    if "power" in extra:
        summary["power"] = extra["power"]
    if write:
        path = out / "summary.json"
        summary["artifacts"].append(str(path))
        atomic_write(path, json.dumps(summary, indent=2) + "\n")
    summary["_extra"] = extra
    return summary
