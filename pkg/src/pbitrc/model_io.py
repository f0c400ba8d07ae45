"""JSON serialization of a trained reservoir.

Format (``format`` = ``"pbitrc-model"``, ``version`` = 1)::

    {
      "format": "pbitrc-model", "version": 1,
      "reservoir": {...ReservoirConfig fields, node kind as a lowercase string...},
      "weights": {
        "W_in":  [[...], ...],            # N x n_inputs
        "W_fb":  [[...], ...],            # N x n_outputs
        "bias":  [...],                   # N
        "W_self": {"shape": [N, N], "indptr": [...], "indices": [...], "data": [...]}   # CSR
      },
      "readout": null | {"W_out": [[...], ...],   # n_outputs x feature width
                         "lam": float,
                         "layout": {"bias": bool, "n_state": int, "n_input": int}}
    }

Floats are written with ``repr`` precision, so a save/load round trip is exact.
"""

from __future__ import annotations

import dataclasses
import json

import numpy as np
import scipy.sparse as sp

from .errors import ConfigError
from .pbit import PBitParams
from .readout import ReadoutWeights
from .reservoir import FeatureLayout, ReservoirConfig, WeightSet

FORMAT, VERSION = "pbitrc-model", 1

__all__ = ["model_to_dict", "model_from_dict", "save_model", "load_model"]


def model_to_dict(config: ReservoirConfig, weights: WeightSet, readout: ReadoutWeights | None = None) -> dict:
    res = dataclasses.asdict(config)
    res["node"]["kind"] = config.node.kind.value
    W = sp.csr_matrix(weights.W_self)
    d = {
        "format": FORMAT,
        "version": VERSION,
        "reservoir": res,
        "weights": {
            "W_in": weights.W_in.tolist(),
            "W_fb": weights.W_fb.tolist(),
            "bias": weights.bias.tolist(),
            "W_self": {
                "shape": list(W.shape),
                "indptr": W.indptr.tolist(),
                "indices": W.indices.tolist(),
                "data": W.data.tolist(),
            },
        },
        "readout": None,
    }
    if readout is not None:
        d["readout"] = {
            "W_out": readout.W_out.tolist(),
            "lam": float(readout.lam),
            "layout": dataclasses.asdict(readout.feature_layout),
        }
    return d


def model_from_dict(d: dict):
    """Inverse of :func:`model_to_dict`; returns ``(config, weights, readout_or_None)``."""
    if d.get("format") != FORMAT or d.get("version") != VERSION:
        raise ConfigError("not a pbitrc-model version 1 document")
    try:
        res = dict(d["reservoir"])
        res["node"] = PBitParams(**res["node"])
        config = ReservoirConfig(**res)
        w = d["weights"]
        ws = w["W_self"]
        W_self = sp.csr_matrix(
            (np.asarray(ws["data"], float), np.asarray(ws["indices"], np.int32), np.asarray(ws["indptr"], np.int32)),
            shape=tuple(ws["shape"]),
        )
        n = config.N
        weights = WeightSet(
            W_in=np.asarray(w["W_in"], float).reshape(n, config.n_inputs),
            W_self=W_self,
            W_fb=np.asarray(w["W_fb"], float).reshape(n, config.n_outputs),
            bias=np.asarray(w["bias"], float).reshape(n),
        )
        readout = None
        if d.get("readout") is not None:
            r = d["readout"]
            layout = FeatureLayout(**r["layout"])
            W_out = np.asarray(r["W_out"], float).reshape(-1, layout.width)
            readout = ReadoutWeights(W_out=W_out, feature_layout=layout, lam=float(r["lam"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"malformed model document: {exc}") from None
    return config, weights, readout


def save_model(dest, config, weights, readout=None) -> None:
    text = json.dumps(model_to_dict(config, weights, readout))
    if hasattr(dest, "write"):
        dest.write(text)
    else:
        with open(dest, "w") as fh:
            fh.write(text)


def load_model(src):
    if hasattr(src, "read"):
        return model_from_dict(json.load(src))
    with open(src) as fh:
        return model_from_dict(json.load(fh))
