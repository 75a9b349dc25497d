"""
Pipeline de um trial: ocupação → sinal → medições comprimidas → recuperação → detecção.

Cada estágio sorteia com sua própria semente, derivada de (master_seed, trial, estágio).
A estratégia não entra na semente: todas as estratégias veem o mesmo snapshot,
a mesma Φ e o mesmo ruído (números aleatórios comuns).
"""

from __future__ import annotations

import dataclasses
import logging
import math
import time
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np

from sparsity_framework.cs_core import (
    RecoveryConfig,
    SparseSignal,
    WeightVector,
    build_dft_dictionary,
    build_sensing_matrix,
    default_support_threshold,
    ista_weighted_l1,
    measure,
    omp,
    sensing_operator,
    support_detect,
)
from sparsity_framework.errors import InvalidConfigError
from sparsity_framework.metrics import Metrics, compute_metrics
from sparsity_framework.predictors import PredictorSpec, build_predictor, predict_blocks
from sparsity_framework.seeding import derive_seed
from sparsity_framework.spectrum_model import (
    WidebandModel,
    block_weights,
    evolve_history,
    sample_occupancy,
    synthesize_signal,
)

from .config import (
    DEFAULT_WEIGHT_NORMALIZATION,
    DICTIONARIES,
    STAGE_HISTORY,
    STAGE_NOISE,
    STAGE_OCCUPANCY,
    STAGE_PHI,
    STAGE_SIGNAL,
    STRATEGY_KINDS,
    WEIGHT_NORMALIZATIONS,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SensingStrategy:
    """Estratégia de recuperação; predictor só se aplica a weighted_l1_predicted."""

    kind: str
    predictor: Optional[PredictorSpec] = None

    def __post_init__(self):
        if self.kind not in STRATEGY_KINDS:
            raise InvalidConfigError(f"estratégia desconhecida: {self.kind} (disponíveis: {STRATEGY_KINDS})")
        if self.kind == "weighted_l1_predicted" and self.predictor is None:
            object.__setattr__(self, "predictor", PredictorSpec())

    @property
    def label(self) -> str:
        if self.kind == "weighted_l1_predicted":
            return f"{self.kind}_{self.predictor.label}"
        return self.kind

    @property
    def min_history(self) -> int:
        if self.kind == "weighted_l1_history":
            return 1
        if self.kind == "weighted_l1_predicted":
            return build_predictor(self.predictor).min_history
        return 0


@dataclass(frozen=True)
class ExperimentConfig:
    """Configuração completa de uma varredura Monte-Carlo."""

    model: WidebandModel
    m_over_n: tuple
    strategies: tuple
    noise_std: float = 0.0
    trials: int = 100
    master_seed: int = 0
    recovery: RecoveryConfig = field(default_factory=RecoveryConfig)
    history_length: int = 0
    ensemble: str = "gaussian"
    dictionary: str = "identity"
    weight_normalization: str = DEFAULT_WEIGHT_NORMALIZATION
    record_timing: bool = False

    def __post_init__(self):
        object.__setattr__(self, "m_over_n", tuple(float(r) for r in self.m_over_n))
        object.__setattr__(self, "strategies", tuple(self.strategies))
        if self.trials < 1:
            raise InvalidConfigError("trials deve ser >= 1")
        if not self.m_over_n or any(not 0.0 < r <= 1.0 for r in self.m_over_n):
            raise InvalidConfigError(f"m_over_n deve conter valores em (0, 1]: {self.m_over_n}")
        if not self.strategies:
            raise InvalidConfigError("ao menos uma estratégia é necessária")
        if self.noise_std < 0:
            raise InvalidConfigError("noise_std deve ser >= 0")
        if self.history_length < 0:
            raise InvalidConfigError("history_length deve ser >= 0")
        if self.dictionary not in DICTIONARIES:
            raise InvalidConfigError(f"dicionário desconhecido: {self.dictionary}")
        if self.weight_normalization not in WEIGHT_NORMALIZATIONS:
            raise InvalidConfigError(f"normalização de pesos desconhecida: {self.weight_normalization}")
        for estrategia in self.strategies:
            if self.history_length < estrategia.min_history:
                raise InvalidConfigError(
                    f"{estrategia.label} exige history_length >= {estrategia.min_history} "
                    f"(recebeu {self.history_length})"
                )

    def with_seed(self, master_seed: int) -> "ExperimentConfig":
        return dataclasses.replace(self, master_seed=master_seed)

    def measurements_for(self, ratio: float) -> int:
        return min(max(int(round(ratio * self.model.n)), 1), self.model.n)

    def omp_budget(self, m: int) -> int:
        return min(m, int(math.ceil(self.model.expected_occupancy())))


@dataclass(frozen=True)
class TrialResult:
    strategy: str
    m_over_n: float
    trial: int
    m: int
    metrics: Metrics

    def as_row(self) -> dict:
        return {
            "strategy": self.strategy,
            "m_over_n": self.m_over_n,
            "trial": self.trial,
            "miss_detection": self.metrics.miss_detection_rate,
            "false_alarm": self.metrics.false_alarm_rate,
            "nmse": self.metrics.nmse,
            "wall_time_s": self.metrics.wall_time,
        }


@lru_cache(maxsize=8)
def _dictionary(n: int) -> np.ndarray:
    psi = build_dft_dictionary(n)
    psi.setflags(write=False)
    return psi


def strategy_weights(config: ExperimentConfig, strategy: SensingStrategy, history) -> WeightVector:
    """Pesos do ISTA para a estratégia (uniformes no ℓ1 convencional)."""
    model = config.model
    if strategy.kind == "conventional_l1":
        return WeightVector.uniform(model.n)
    if strategy.kind == "weighted_l1_expected":
        pesos = block_weights(model, "expected")
    elif strategy.kind == "weighted_l1_history":
        pesos = block_weights(model, "history_average", history=history)
    else:
        pesos = block_weights(model, "predicted", predicted=predict_blocks(strategy.predictor, history))
    return pesos.normalized() if config.weight_normalization == "mean" else pesos


def recover(config: ExperimentConfig, strategy: SensingStrategy, A: np.ndarray, y: np.ndarray, history) -> SparseSignal:
    if strategy.kind == "omp":
        return omp(A, y, config.omp_budget(A.shape[0]), config.recovery.residual_tolerance)
    return ista_weighted_l1(A, y, strategy_weights(config, strategy, history), config.recovery)


def run_trial(config: ExperimentConfig, strategy: SensingStrategy, m_over_n: float, trial_index: int) -> TrialResult:
    """
    Executa um trial determinístico para (estratégia, m/n, índice).

    Com history_length = T > 0 o snapshot atual é o slot T+1 da cadeia de Markov
    (o histórico são os T anteriores); com T = 0 vem de sample_occupancy.
    """
    model = config.model
    semente = config.master_seed
    m = config.measurements_for(m_over_n)
    T = config.history_length

    if T > 0:
        completo = evolve_history(model, T + 1, derive_seed(semente, trial_index, STAGE_HISTORY))
        history = completo.head(T)
        snapshot = completo.snapshot(T)
    else:
        history = None
        snapshot = sample_occupancy(model, derive_seed(semente, trial_index, STAGE_OCCUPANCY))

    x = synthesize_signal(snapshot, model, derive_seed(semente, trial_index, STAGE_SIGNAL))
    phi = build_sensing_matrix(m, model.n, config.ensemble, derive_seed(semente, trial_index, STAGE_PHI))
    psi = _dictionary(model.n) if config.dictionary == "dft" else None
    y = measure(phi, psi, x, config.noise_std, derive_seed(semente, trial_index, STAGE_NOISE))
    A = sensing_operator(phi, psi)

    inicio = time.perf_counter()
    x_hat = recover(config, strategy, A, y, history)
    duracao = time.perf_counter() - inicio

    tau = config.recovery.support_threshold
    if tau is None:
        tau = default_support_threshold(config.noise_std, m)
    detectado = support_detect(x_hat, tau)
    metricas = compute_metrics(snapshot, detectado, x, x_hat, duracao if config.record_timing else 0.0)

    log.debug(
        f"[pipeline] {strategy.label} m={m} trial={trial_index}: "
        f"miss={metricas.miss_detection_rate:.3f} fa={metricas.false_alarm_rate:.3f} it={x_hat.iterations}"
    )
    return TrialResult(strategy.label, m_over_n, trial_index, m, metricas)
