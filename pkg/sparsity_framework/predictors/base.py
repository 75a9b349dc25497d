"""
sparsity_framework/predictors/base.py

Contrato base (ABC) para todos os preditores de ocupação por bloco.
Qualquer novo preditor deve implementar esta interface para ser plugável no pipeline.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Optional

import numpy as np

from sparsity_framework.errors import InsufficientHistoryError, InvalidConfigError

PREDICTOR_KINDS = ("moving_average", "linear_regression", "ar1")
# Slots finais usados para o diagnóstico de resíduo one-step
DIAGNOSTIC_WINDOW = 50


def clamp_prediction(value: float, clamp: Optional[tuple]) -> float:
    """Restringe a predição a [baixo, alto] quando um intervalo é informado."""
    if clamp is None:
        return float(value)
    baixo, alto = clamp
    return float(min(max(value, baixo), alto))


class OccupancyPredictor(ABC):
    """
    Interface abstrata para preditores de kᵢ(t+1) a partir da série kᵢ(0..t).

    O Adapter Pattern deixa o pipeline agnóstico à técnica de regressão usada.
    Para adicionar um preditor: crie uma subclasse e registre em predictors/__init__.py.
    """

    @property
    @abstractmethod
    def min_history(self) -> int:
        """Comprimento mínimo da série aceito por predict_raw."""

    @abstractmethod
    def predict_raw(self, series: np.ndarray) -> float:
        """Predição do próximo slot, sem clamp."""

    def predict(self, series, band_count: Optional[float] = None) -> float:
        """Predição clampada em [0, band_count] (ou só >= 0 sem band_count)."""
        serie = np.asarray(series, dtype=float)
        if serie.size < self.min_history:
            raise InsufficientHistoryError(
                f"{type(self).__name__} exige >= {self.min_history} slots (recebeu {serie.size})"
            )
        alto = float("inf") if band_count is None else float(band_count)
        return clamp_prediction(self.predict_raw(serie), (0.0, alto))

    def residual_variance(self, series, band_count: Optional[float] = None, window: int = DIAGNOSTIC_WINDOW) -> float:
        """Variância dos erros one-step dentro da amostra, nos últimos `window` slots."""
        serie = np.asarray(series, dtype=float)
        inicio = max(self.min_history, serie.size - window)
        erros = [serie[t] - self.predict(serie[:t], band_count) for t in range(inicio, serie.size)]
        return float(np.var(erros)) if erros else 0.0


@dataclass(frozen=True)
class PredictorSpec:
    """Seleção de preditor por nome: moving_average(window) | linear_regression(window) | ar1."""

    kind: str = "ar1"
    window: int = 5

    def __post_init__(self):
        if self.kind not in PREDICTOR_KINDS:
            raise InvalidConfigError(f"preditor desconhecido: {self.kind} (disponíveis: {PREDICTOR_KINDS})")
        if self.window < 1:
            raise InvalidConfigError("window deve ser >= 1")

    @property
    def label(self) -> str:
        return self.kind if self.kind == "ar1" else f"{self.kind}_w{self.window}"


@dataclass(frozen=True, eq=False)
class PredictionResult:
    """k̂ᵢ por bloco (já clampado) e a variância residual de cada ajuste."""

    k_hat: np.ndarray
    fit_diagnostics: np.ndarray
