"""fincast: inflation and stock-price forecasting built on numpy.

Modules
-------
ingest      World Bank JSON and Yahoo CSV parsing
preprocess  scaling, differencing, windowing, splitting
arima       ARIMA(p, d, 0) by conditional least squares
lstm        two-layer LSTM with BPTT, dropout and Adam
metrics     MAE / MSE / RMSE / R^2
plot        static SVG line charts
agents      sequential support/QA crew over a chat backend
cli         the ``fincast`` command
"""

from . import arima, errors, ingest, lstm, metrics, plot, preprocess
from .errors import FincastError
from .ingest import DatedSeries, OhlcvSeries

__version__ = "0.1.0"

__all__ = ["arima", "errors", "ingest", "lstm", "metrics", "plot", "preprocess",
           "DatedSeries", "OhlcvSeries", "FincastError", "__version__"]
