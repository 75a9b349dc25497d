"""sparsity_framework/predictors/__init__.py"""
from __future__ import annotations

import logging

import numpy as np

from .autoregressive import AR1Predictor, estimate_ar1, predict_ar1
from .base import DIAGNOSTIC_WINDOW, OccupancyPredictor, PredictionResult, PredictorSpec
from .regression import LinearRegressionPredictor, MovingAveragePredictor, predict_linreg, predict_ma

log = logging.getLogger(__name__)

__all__ = [
    "OccupancyPredictor", "PredictorSpec", "PredictionResult",
    "MovingAveragePredictor", "LinearRegressionPredictor", "AR1Predictor",
    "predict_ma", "predict_linreg", "predict_ar1", "estimate_ar1",
    "build_predictor", "predict_blocks",
]


def build_predictor(spec: PredictorSpec) -> OccupancyPredictor:
    """Instancia o preditor descrito por spec."""
    if spec.kind == "moving_average":
        return MovingAveragePredictor(spec.window)
    if spec.kind == "linear_regression":
        return LinearRegressionPredictor(spec.window)
    return AR1Predictor()


def predict_blocks(spec: PredictorSpec, history, diagnostic_window: int = DIAGNOSTIC_WINDOW) -> PredictionResult:
    """
    Prediz k̂ᵢ do próximo slot para cada bloco do histórico.

    Saídas clampadas em [0, band_countᵢ]; fit_diagnostics = variância residual one-step.
    """
    preditor = build_predictor(spec)
    k_hat, diagnosticos = [], []
    for i, bloco in enumerate(history.model.blocks):
        serie = history.block_series(i)
        k_hat.append(preditor.predict(serie, bloco.band_count))
        diagnosticos.append(preditor.residual_variance(serie, bloco.band_count, diagnostic_window))
    log.debug(f"[predictor] {spec.label}: k̂ = {np.round(k_hat, 3).tolist()}")
    return PredictionResult(np.array(k_hat), np.array(diagnosticos))
