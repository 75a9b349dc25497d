"""
sparsity_framework/predictors/autoregressive.py

Preditor AR(1) com estimador de Yule-Walker de ordem 1.

φ usa a autocovariância enviesada (divisão por T), o que garante |φ| <= 1 em
amostras finitas e mantém as predições estáveis.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from sparsity_framework.errors import InsufficientHistoryError
from sparsity_framework.predictors.base import OccupancyPredictor, clamp_prediction

# Abaixo desta variância a série é tratada como constante (φ = 0)
VARIANCE_FLOOR = 1e-12


def estimate_ar1(series) -> tuple[float, float]:
    """Retorna (μ, φ): média amostral e autocovariância lag-1 / variância."""
    serie = np.asarray(series, dtype=float)
    if serie.size < 3:
        raise InsufficientHistoryError(f"AR(1) exige T >= 3 (recebeu {serie.size})")
    mu = float(serie.mean())
    centrada = serie - mu
    variancia = float(centrada @ centrada) / serie.size
    if variancia < VARIANCE_FLOOR:
        return mu, 0.0
    autocov = float(centrada[1:] @ centrada[:-1]) / serie.size
    return mu, autocov / variancia


def predict_ar1(series, clamp: Optional[tuple] = None) -> float:
    """μ + φ·(último − μ)."""
    mu, phi = estimate_ar1(series)
    ultimo = float(np.asarray(series, dtype=float)[-1])
    return clamp_prediction(mu + phi * (ultimo - mu), clamp)


class AR1Predictor(OccupancyPredictor):
    @property
    def min_history(self) -> int:
        return 3

    def predict_raw(self, series: np.ndarray) -> float:
        return predict_ar1(series)
