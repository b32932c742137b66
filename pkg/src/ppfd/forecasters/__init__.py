from .ann import AnnForecaster, AnnRegressor, AnnTrainingError, ann_fit, ann_predict
from .arima import (ArimaError, ArimaForecaster, arima_fit, arima_predict,
                    arima_select)
from .decomposition import (NormalizedForecaster, PPFDForecaster, make_base,
                            ppfd_fit, ppfd_forecast_step)
from .fourier import FourierForecaster, fourier_sum_forecast
from .windows import WindowDataset, make_windows

__all__ = [
    "AnnForecaster", "AnnRegressor", "AnnTrainingError", "ann_fit",
    "ann_predict", "ArimaError", "ArimaForecaster", "arima_fit",
    "arima_predict", "arima_select", "NormalizedForecaster", "PPFDForecaster",
    "make_base", "ppfd_fit", "ppfd_forecast_step", "FourierForecaster",
    "fourier_sum_forecast", "WindowDataset", "make_windows",
]
