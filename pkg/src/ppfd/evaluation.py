"""Forward-chaining cross-validation and experiment orchestration."""
from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field

import numpy as np
from joblib import Parallel, delayed
from sklearn.base import clone

from .forecasters import (AnnForecaster, ArimaForecaster, FourierForecaster,
                          NormalizedForecaster, PPFDForecaster)
from .metrics import MetricReport, average_reports, report
from .peaks import find_peaks

__all__ = [
    "SCHEMA_VERSION",
    "MODEL_KINDS",
    "FoldPlan",
    "ExperimentConfig",
    "EvaluationReport",
    "ExperimentError",
    "forward_chain_splits",
    "build_model",
    "run_experiment",
]

SCHEMA_VERSION = 1
MODEL_KINDS = ("ann", "arima", "fourier", "ppfd-ann", "ppfd-arima")


class ExperimentError(RuntimeError):
    def __init__(self, fold, cause):
        super().__init__(f"fold {fold}: {cause}")
        self.fold = fold
        self.cause = cause


@dataclass(frozen=True)
class FoldPlan:
    """``folds[i] = ((0, train_stop), (train_stop, validate_stop))``."""

    folds: tuple
    k: int

    def __iter__(self):
        return iter(self.folds)

    def __len__(self):
        return len(self.folds)


def forward_chain_splits(n: int, k: int, min_block: int = 2) -> FoldPlan:
    """Split ``n`` samples into ``k + 1`` contiguous blocks; fold ``i`` trains
    on blocks ``0..i`` and validates on block ``i + 1``.

    Block sizes differ by at most one, larger blocks first.
    """
    if k < 1:
        raise ValueError(f"need at least one fold, got k={k}")
    need = (k + 1) * min_block
    if n < need:
        raise ValueError(
            f"series of length {n} too short: {k} folds need at least {need}")
    base, extra = divmod(n, k + 1)
    sizes = [base + (1 if i < extra else 0) for i in range(k + 1)]
    edges = np.concatenate([[0], np.cumsum(sizes)]).tolist()
    folds = tuple(((0, edges[i + 1]), (edges[i + 1], edges[i + 2]))
                  for i in range(k))
    return FoldPlan(folds, k)


@dataclass(frozen=True)
class ExperimentConfig:
    model: str = "ppfd-ann"
    c: int | None = 3
    window: int = 7
    alpha: float = 0.2
    folds: int = 5
    arima_order: tuple | None = None
    max_p: int = 5
    max_q: int = 5
    learning_rate: float = 0.05
    epochs: int = 2000
    solver: str = "gd"
    seed: int = 0

    def __post_init__(self):
        if self.model not in MODEL_KINDS:
            raise ValueError(f"model must be one of {MODEL_KINDS}")
        if self.model.startswith("ppfd") and (self.c is None or self.c < 1):
            raise ValueError("ppfd models need c >= 1")
        if self.folds < 1:
            raise ValueError("folds must be >= 1")
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError("alpha must lie in [0, 1]")
        if self.window < 1:
            raise ValueError("window must be >= 1")
        if self.arima_order is not None:
            object.__setattr__(self, "arima_order",
                               tuple(int(v) for v in self.arima_order))

    @property
    def base_kind(self):
        return self.model.rsplit("-", 1)[-1]

    def to_dict(self):
        d = asdict(self)
        if d["arima_order"] is not None:
            d["arima_order"] = list(d["arima_order"])
        if not self.model.startswith("ppfd"):
            d["c"] = None
        return d

    @classmethod
    def from_dict(cls, d):
        known = {f for f in cls.__dataclass_fields__}
        return cls(**{k: v for k, v in d.items() if k in known})


def build_model(config: ExperimentConfig):
    """Unfitted estimator for ``config``."""
    if config.model == "fourier":
        return FourierForecaster()
    if config.base_kind == "ann":
        base = AnnForecaster(window=config.window,
                             learning_rate=config.learning_rate,
                             epochs=config.epochs, random_state=config.seed,
                             solver=config.solver)
    else:
        base = ArimaForecaster(order=config.arima_order, max_p=config.max_p,
                               max_q=config.max_q)
    if config.model.startswith("ppfd"):
        return PPFDForecaster(n_components=config.c, estimator=base)
    return NormalizedForecaster(estimator=base)


@dataclass
class FoldResult:
    index: int
    train: tuple
    validate: tuple
    metrics: MetricReport
    actual: np.ndarray = field(repr=False)
    forecast: np.ndarray = field(repr=False)
    peaks: np.ndarray = field(repr=False)
    c: int | None = None
    model: object = field(default=None, repr=False)


@dataclass
class EvaluationReport:
    config: ExperimentConfig
    per_fold: list
    averaged: MetricReport
    fold_results: list = field(default_factory=list, repr=False)
    runtime_seconds: float = 0.0

    def to_dict(self, extra=None):
        cfg = self.config.to_dict()
        if self.config.model == "fourier":
            # all sinusoids of the largest training window
            cfg["c"] = max(r.c for r in self.fold_results) \
                if self.fold_results else None
        d = {
            "schema_version": SCHEMA_VERSION,
            "config": cfg,
            "folds": [
                dict(m.to_dict(), fold=r.index, train=list(r.train),
                     validate=list(r.validate),
                     **({"c": r.c} if r.c is not None else {}))
                for m, r in zip(self.per_fold, self.fold_results)
            ] if self.fold_results else [m.to_dict() for m in self.per_fold],
            "averaged": self.averaged.to_dict(),
            "runtime_seconds": self.runtime_seconds,
        }
        if extra:
            d.update(extra)
        return d


def _run_fold(i, x, train, validate, model, alpha):
    try:
        fitted = clone(model).fit(x[:train[1]])
        stop = validate[1]
        forecast = np.asarray(fitted.predict(x[:stop], validate[0]),
                              dtype=float)
        actual = x[validate[0]:stop]
        if forecast.shape != actual.shape:
            raise ValueError(f"model returned {forecast.size} forecasts for "
                             f"{actual.size} validation points")
        if not np.isfinite(forecast).all():
            raise FloatingPointError("non-finite forecast")
        peaks = find_peaks(actual)
        metrics = report(actual, forecast, peaks, alpha)
    except Exception as exc:
        raise ExperimentError(i, exc) from exc
    c = getattr(fitted, "n_components_", None)
    return FoldResult(i, train, validate, metrics, actual, forecast,
                      peaks.indices, c, fitted)


def run_experiment(series, config: ExperimentConfig, model=None,
                   n_jobs=None) -> EvaluationReport:
    """Fit on each expanding training range, forecast its validation block
    one step ahead, score, and average over folds.

    ``model`` overrides the estimator built from ``config``; it needs
    ``fit(x)`` and ``predict(x, start)``.
    """
    t0 = time.perf_counter()
    x = np.asarray(series, dtype=float).ravel()
    if not np.isfinite(x).all():
        raise ValueError("series must be gap-free and finite")
    if model is None:
        model = build_model(config)
    plan = forward_chain_splits(x.size, config.folds,
                                min_block=config.window + 2)
    jobs = (delayed(_run_fold)(i, x, tr, va, model, config.alpha)
            for i, (tr, va) in enumerate(plan))
    if n_jobs in (None, 1):
        results = [fn(*args, **kw) for fn, args, kw in jobs]
    else:
        results = Parallel(n_jobs=n_jobs)(jobs)
    per_fold = [r.metrics for r in results]
    return EvaluationReport(config, per_fold, average_reports(per_fold),
                            results, time.perf_counter() - t0)

