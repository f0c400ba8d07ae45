"""Reservoir computing with stochastic p-bit nodes."""

from .errors import ConfigError, ConvergenceError, DomainError, NumericError
from .metrics import nmse, ser
from .model_io import load_model, save_model
from .pbit import NodeKind, PBitParams, node_step, pbit_sample
from .power import DeviceParams, PowerBreakdown, power_report
from .readout import ReadoutWeights, RidgeConfig, predict, ridge_fit
from .reservoir import (
    ReservoirConfig,
    ReservoirState,
    WeightSet,
    build_weights,
    reservoir_step,
    run_free,
    run_teacher_forced,
    scale_spectral_radius,
    spectral_radius,
)
from .rng import RngStream
from .tasks import ChannelParams, MackeyGlassParams, channel_dataset, mackey_glass, normalize_signal, random_symbols

__version__ = "0.1.0"
