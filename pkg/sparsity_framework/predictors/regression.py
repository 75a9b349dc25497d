"""
sparsity_framework/predictors/regression.py

Preditores por regressão simples sobre a janela final da série:
média móvel e reta de mínimos quadrados extrapolada um slot à frente.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from sparsity_framework.errors import InsufficientHistoryError
from sparsity_framework.predictors.base import OccupancyPredictor, clamp_prediction


def predict_ma(series, window: int) -> float:
    """Média aritmética dos últimos min(window, T) valores."""
    serie = np.asarray(series, dtype=float)
    if serie.size == 0:
        raise InsufficientHistoryError("série vazia")
    return float(serie[-min(window, serie.size):].mean())


def predict_linreg(series, window: int, clamp: Optional[tuple] = None) -> float:
    """
    Reta OLS sobre os últimos min(window, T) pontos (abscissa = índice do slot),
    avaliada no slot seguinte.
    """
    serie = np.asarray(series, dtype=float)
    efetiva = min(window, serie.size)
    if efetiva < 2:
        raise InsufficientHistoryError(f"regressão linear exige janela efetiva >= 2 (recebeu {efetiva})")
    t = np.arange(serie.size - efetiva, serie.size, dtype=float)
    v = serie[-efetiva:]
    t_med, v_med = t.mean(), v.mean()
    inclinacao = float(np.sum((t - t_med) * (v - v_med)) / np.sum((t - t_med) ** 2))
    return clamp_prediction(v_med + inclinacao * (serie.size - t_med), clamp)


class MovingAveragePredictor(OccupancyPredictor):
    def __init__(self, window: int = 5):
        self.window = window

    @property
    def min_history(self) -> int:
        return 1

    def predict_raw(self, series: np.ndarray) -> float:
        return predict_ma(series, self.window)


class LinearRegressionPredictor(OccupancyPredictor):
    def __init__(self, window: int = 5):
        self.window = window

    @property
    def min_history(self) -> int:
        return 2

    def predict_raw(self, series: np.ndarray) -> float:
        if min(self.window, series.size) < 2:
            raise InsufficientHistoryError(f"janela {self.window} insuficiente para regressão linear")
        return predict_linreg(series, self.window)
