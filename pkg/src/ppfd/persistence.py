"""Versioned JSON documents for fitted forecasters."""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .forecasters import (AnnForecaster, AnnRegressor, ArimaForecaster,
                          FourierForecaster, NormalizedForecaster,
                          PPFDForecaster)
from .scaling import ScalingState
from .spectral import Sinusoid

FORMAT_VERSION = 1

__all__ = ["FORMAT_VERSION", "model_to_dict", "model_from_dict",
           "save_model", "load_model"]


def _ann_to_dict(m):
    W1, b1, W2, b2 = m.regressor_.weights
    return {"kind": "ann", "params": m.get_params(),
            "weights_input_hidden": W1.tolist(), "hidden_biases": b1.tolist(),
            "weights_hidden_output": W2.tolist(), "output_bias": b2}


def _ann_from_dict(d):
    m = AnnForecaster(**d["params"])
    W1 = np.asarray(d["weights_input_hidden"], dtype=float)
    reg = AnnRegressor(m.learning_rate, m.epochs, m.init_scale,
                       m.random_state, m.solver)
    reg.n_features_in_ = W1.shape[0]
    reg.coefs_ = np.concatenate([W1.ravel(), d["hidden_biases"],
                                 d["weights_hidden_output"],
                                 [d["output_bias"]]]).astype(float)
    m.regressor_ = reg
    return m


def _arima_to_dict(m):
    params = m.get_params()
    if params["order"] is not None:
        params["order"] = list(params["order"])
    return {"kind": "arima", "params": params, **m.to_params(),
            "aic": m.aic_}


def _arima_from_dict(d):
    params = dict(d["params"])
    if params.get("order") is not None:
        params["order"] = tuple(params["order"])
    m = ArimaForecaster(**params)
    m.p_, m.q_ = int(d["p"]), int(d["q"])
    m.ar_coefs_ = np.asarray(d["ar_coeffs"], dtype=float)
    m.ma_coefs_ = np.asarray(d["ma_coeffs"], dtype=float)
    m.intercept_ = float(d["intercept"])
    m.residuals_ = np.asarray(d["residual_history"], dtype=float)
    m.aic_ = float(d["aic"])
    return m


def model_to_dict(model) -> dict:
    if isinstance(model, PPFDForecaster) or isinstance(
            model, NormalizedForecaster):
        d = {"kind": "ppfd" if isinstance(model, PPFDForecaster)
             else "normalized",
             "sinusoids": [s.to_dict() for s in model.sinusoids_],
             "scaling": model.scaling_.to_dict(),
             "training_length": model.n_train_,
             "base": model_to_dict(model.estimator_)}
        if isinstance(model, PPFDForecaster):
            d["n_components"] = model.n_components
    elif isinstance(model, AnnForecaster):
        d = _ann_to_dict(model)
    elif isinstance(model, ArimaForecaster):
        d = _arima_to_dict(model)
    elif isinstance(model, FourierForecaster):
        d = {"kind": "fourier", "mean": model.mean_,
             "training_length": model.n_train_,
             "sinusoids": [s.to_dict() for s in model.sinusoids_]}
    else:
        raise TypeError(f"cannot serialize {type(model).__name__}")
    return d


def model_from_dict(d: dict):
    kind = d["kind"]
    if kind in ("ppfd", "normalized"):
        base = model_from_dict(d["base"])
        if kind == "ppfd":
            m = PPFDForecaster(int(d["n_components"]), base)
        else:
            m = NormalizedForecaster(base)
        m.estimator_ = base
        m.sinusoids_ = [Sinusoid.from_dict(s) for s in d["sinusoids"]]
        m.scaling_ = ScalingState.from_dict(d["scaling"])
        m.n_train_ = int(d["training_length"])
        return m
    if kind == "ann":
        return _ann_from_dict(d)
    if kind == "arima":
        return _arima_from_dict(d)
    if kind == "fourier":
        m = FourierForecaster()
        m.mean_ = float(d["mean"])
        m.n_train_ = int(d["training_length"])
        m.n_components_ = -(-m.n_train_ // 2)
        m.sinusoids_ = [Sinusoid.from_dict(s) for s in d["sinusoids"]]
        return m
    raise ValueError(f"unknown model kind {kind!r}")


def save_model(model, path) -> None:
    doc = {"format_version": FORMAT_VERSION, "model": model_to_dict(model)}
    Path(path).write_text(json.dumps(doc, indent=1, sort_keys=True),
                          encoding="utf-8")


def load_model(path):
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    if doc.get("format_version") != FORMAT_VERSION:
        raise ValueError(f"{path}: unsupported model format "
                         f"{doc.get('format_version')!r}")
    return model_from_dict(doc["model"])
