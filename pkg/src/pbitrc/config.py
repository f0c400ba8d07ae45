"""Experiment configuration: strict JSON schema with per-task defaults.

A config file is a JSON object. Every key is optional; missing keys take
the task defaults below and unknown keys are rejected. The resolved
config (all defaults filled in) is echoed into ``summary.json`` and is
sufficient to reproduce a run exactly.

Top-level keys::

    task            mg-follow | mg-generate | equalize | pbit-stats | power
    reservoir       {N, rho_target, density, input_scale, fb_scale, bias_scale,
                     seed, n_inputs, n_outputs, feature_bias, feature_input,
                     node: {leak, gain, kind}}
    ridge           {lam (null = scale-aware default), washout}
    task_params     fields of MackeyGlassParams / ChannelParams /
                    PBitStatsParams / DeviceParams, depending on task
    train_steps, test_steps, prime_steps, free_horizon
    seeds           list of 64-bit unsigned ints
    output_dir      directory for summary.json and per-seed files
    target_shift    readout target is the input this many steps ahead
                    (null = 0 for mg-follow, 1 for mg-generate)
    subsample       integration steps per Mackey-Glass sample
    transient       Mackey-Glass samples discarded before training
    hold_steps      reservoir steps per input sample (input held constant)
    nmse_normalization   variance | power
"""

from __future__ import annotations

import copy
import dataclasses
import json
from dataclasses import dataclass, field

from .errors import ConfigError, DomainError
from .pbit import NodeKind, PBitParams
from .power import DeviceParams
from .readout import RidgeConfig
from .reservoir import ReservoirConfig
from .tasks import ChannelParams, MackeyGlassParams

__all__ = ["TASKS", "PBitStatsParams", "ExperimentConfig", "default_dict", "resolve", "load_config", "parse_override"]

TASKS = ("mg-follow", "mg-generate", "equalize", "pbit-stats", "power")


@dataclass(frozen=True)
class PBitStatsParams:
    I_min: float = -2.0
    I_max: float = 2.0
    I_step: float = 0.5
    samples: int = 100_000

    def __post_init__(self):
        if not (self.I_step > 0 and self.I_max >= self.I_min):
            raise DomainError("need I_step > 0 and I_max >= I_min")
        if self.samples < 2:
            raise DomainError("samples must be >= 2")

    @property
    def grid(self):
        n = int(round((self.I_max - self.I_min) / self.I_step))
        return [self.I_min + k * self.I_step for k in range(n + 1)]


_PARAM_TYPES = {
    "mg-follow": MackeyGlassParams,
    "mg-generate": MackeyGlassParams,
    "equalize": ChannelParams,
    "pbit-stats": PBitStatsParams,
    "power": DeviceParams,
}


@dataclass(frozen=True)
class ExperimentConfig:
    task: str
    reservoir: ReservoirConfig
    ridge: RidgeConfig
    task_params: object
    train_steps: int = 5000
    test_steps: int = 2000
    prime_steps: int = 100
    free_horizon: int = 500
    seeds: tuple = (0, 1, 2, 3, 4)
    output_dir: str = "runs"
    target_shift: int = 0
    subsample: int = 10
    transient: int = 1000
    hold_steps: int = 1
    nmse_normalization: str = "variance"
    save_weights: bool = False
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d.pop("extra")
        d["seeds"] = list(self.seeds)
        d["reservoir"]["node"]["kind"] = self.reservoir.node.kind.value
        tp = d["task_params"]
        for k, v in tp.items():
            if isinstance(v, tuple):
                tp[k] = list(v)
        return d


def _top_defaults(task):
    res = dataclasses.asdict(ReservoirConfig())
    res["node"]["kind"] = NodeKind.DETERMINISTIC.value
    d = {
        "task": task,
        "reservoir": res,
        "ridge": dataclasses.asdict(RidgeConfig()),
        "task_params": {},
        "train_steps": 5000,
        "test_steps": 2000,
        "prime_steps": 100,
        "free_horizon": 500,
        "seeds": [0, 1, 2, 3, 4],
        "output_dir": f"runs/{task}",
        "target_shift": None,
        "subsample": 10,
        "transient": 1000,
        "hold_steps": 1,
        "nmse_normalization": "variance",
        "save_weights": False,
    }
    tp = dataclasses.asdict(_PARAM_TYPES[task]())
    if task.startswith("mg-"):
        tp["t_total"] = None  # filled in from the step counts
    d["task_params"] = {k: list(v) if isinstance(v, tuple) else v for k, v in tp.items()}
    if task == "mg-follow":
        d["reservoir"]["N"] = 500
    elif task == "mg-generate":
        d["reservoir"]["N"] = 1000
    elif task == "equalize":
        # short symbol memory needs non-leaky nodes and moderate drive
        d["reservoir"].update(N=100, input_scale=0.5)
        d["reservoir"]["node"].update(leak=1.0, gain=1.0)
        d["test_steps"] = 10_000
    return d


def default_dict(task: str) -> dict:
    if task not in TASKS:
        raise ConfigError(f"unknown task {task!r}; expected one of {', '.join(TASKS)}")
    return _top_defaults(task)


def _overlay(base: dict, new: dict, path: str = ""):
    for key, value in new.items():
        where = f"{path}{key}"
        if key not in base:
            raise ConfigError(f"unknown config key '{where}'")
        if isinstance(base[key], dict):
            if not isinstance(value, dict):
                raise ConfigError(f"config key '{where}' must be an object")
            _overlay(base[key], value, where + ".")
        else:
            base[key] = value


def _required_mg_samples(d):
    shift = d["target_shift"]
    after = max(d["test_steps"], d["prime_steps"] + d["free_horizon"]) if d["task"] == "mg-generate" else d["test_steps"]
    return d["transient"] + d["train_steps"] + after + shift + 1


def resolve(raw: dict | None, task: str | None = None) -> ExperimentConfig:
    """Merge ``raw`` over the task defaults and validate everything."""
    raw = copy.deepcopy(raw or {})
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    file_task = raw.get("task")
    if task is None:
        task = file_task
    if task is None:
        raise ConfigError("no task given")
    if file_task is not None and file_task != task:
        raise ConfigError(f"config is for task '{file_task}' but '{task}' was requested")
    d = default_dict(task)
    mg_auto_total = task.startswith("mg-") and "t_total" not in raw.get("task_params", {})
    _overlay(d, raw)

    try:
        for key in ("train_steps", "test_steps", "prime_steps", "free_horizon", "subsample", "transient", "hold_steps"):
            if not isinstance(d[key], int) or isinstance(d[key], bool) or d[key] < 0:
                raise ConfigError(f"'{key}' must be a non-negative integer")
        if d["subsample"] < 1 or d["hold_steps"] < 1:
            raise ConfigError("'subsample' and 'hold_steps' must be >= 1")
        if d["target_shift"] is None:
            d["target_shift"] = 1 if task == "mg-generate" else 0
        if not isinstance(d["target_shift"], int) or d["target_shift"] < 0:
            raise ConfigError("'target_shift' must be a non-negative integer")
        seeds = d["seeds"]
        if not isinstance(seeds, list) or not seeds:
            raise ConfigError("'seeds' must be a non-empty list")
        if any(not isinstance(s, int) or isinstance(s, bool) or not 0 <= s < 2**64 for s in seeds):
            raise ConfigError("every seed must be a 64-bit unsigned integer")
        if not isinstance(d["save_weights"], bool):
            raise ConfigError("'save_weights' must be true or false")
        if d["nmse_normalization"] not in ("variance", "power"):
            raise ConfigError("'nmse_normalization' must be 'variance' or 'power'")
        if task in ("mg-follow", "mg-generate", "equalize") and d["train_steps"] <= d["ridge"]["washout"]:
            raise ConfigError("'train_steps' must exceed ridge.washout")
        if task.startswith("mg-"):
            needed = _required_mg_samples(d) * d["subsample"] * d["task_params"]["dt"]
            if mg_auto_total:
                d["task_params"]["t_total"] = needed
            elif d["task_params"]["t_total"] < needed - 1e-9:
                raise ConfigError(f"task_params.t_total={d['task_params']['t_total']} is too short; need {needed}")

        res = dict(d["reservoir"])
        res["node"] = PBitParams(**res["node"])
        reservoir = ReservoirConfig(**res)
        ridge = RidgeConfig(**d["ridge"])
        task_params = _PARAM_TYPES[task](**d["task_params"])
    except (DomainError, TypeError) as exc:
        raise ConfigError(str(exc)) from None

    return ExperimentConfig(
        task=task,
        reservoir=reservoir,
        ridge=ridge,
        task_params=task_params,
        train_steps=d["train_steps"],
        test_steps=d["test_steps"],
        prime_steps=d["prime_steps"],
        free_horizon=d["free_horizon"],
        seeds=tuple(d["seeds"]),
        output_dir=str(d["output_dir"]),
        target_shift=d["target_shift"],
        subsample=d["subsample"],
        transient=d["transient"],
        hold_steps=d["hold_steps"],
        nmse_normalization=d["nmse_normalization"],
        save_weights=d["save_weights"],
    )


def load_config(path) -> dict:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    return data


def parse_override(raw: dict, item: str) -> dict:
    """Apply ``dotted.key=value`` to ``raw`` (value parsed as JSON if possible)."""
    if "=" not in item:
        raise ConfigError(f"override {item!r} is not of the form key=value")
    key, text = item.split("=", 1)
    try:
        value = json.loads(text)
    except json.JSONDecodeError:
        value = text
    parts = key.strip().split(".")
    node = raw
    for p in parts[:-1]:
        node = node.setdefault(p, {})
        if not isinstance(node, dict):
            raise ConfigError(f"override {key!r} descends into a non-object")
    node[parts[-1]] = value
    return raw
