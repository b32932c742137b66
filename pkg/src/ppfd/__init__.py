"""Peak-oriented forecasting with Fourier seasonal decomposition."""
from .evaluation import (EvaluationReport, ExperimentConfig, FoldPlan,
                         build_model, forward_chain_splits, run_experiment)
from .forecasters import (AnnForecaster, AnnRegressor, ArimaForecaster,
                          FourierForecaster, NormalizedForecaster,
                          PPFDForecaster)
from .metrics import MetricReport, mse, report, wse
from .peaks import PeakSet, find_peaks
from .scaling import LocalNormScaler, ScalingState
from .series import GapReport, TimeSeries
from .spectral import Sinusoid, Spectrum
from .synth import SynthSpec, generate

__version__ = "0.1.0"

__all__ = [
    "AnnForecaster", "AnnRegressor", "ArimaForecaster", "EvaluationReport",
    "ExperimentConfig", "FoldPlan", "FourierForecaster", "GapReport",
    "LocalNormScaler", "MetricReport", "NormalizedForecaster", "PPFDForecaster",
    "PeakSet", "ScalingState", "Sinusoid", "Spectrum", "SynthSpec",
    "TimeSeries", "build_model", "find_peaks", "forward_chain_splits",
    "generate", "mse", "report", "run_experiment", "wse",
]
