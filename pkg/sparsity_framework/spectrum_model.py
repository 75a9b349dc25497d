"""
sparsity_framework/spectrum_model.py

Modelo gerador de ocupação heterogênea do espectro de banda larga.

Design:
- O espectro de n bandas é particionado em blocos contíguos (uma aplicação por bloco)
- Cada bloco tem taxa de ocupação p e persistência temporal (correlação lag-1)
- Evolução temporal: cadeia de Markov de dois estados por banda, estacionária em p
- Pesos do ℓ1 ponderado: wᵢ = fator / max(k̄ᵢ, ε), com ε = 10⁻³

IMPORTANTE: as taxas padrão são sintéticas, não medições reais de ocupação.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from sparsity_framework.cs_core import SparseSignal, WeightVector
from sparsity_framework.errors import (
    InvalidConfigError,
    InvalidDimensionError,
    InvalidInputError,
    MissingPredictionError,
)

log = logging.getLogger(__name__)

# Piso de k̄ᵢ: wᵢ = 1/k̄ᵢ não é definido com ocupação zero
OCCUPANCY_FLOOR = 1e-3
WEIGHT_SOURCES = ("expected", "history_average", "predicted")


@dataclass(frozen=True)
class BlockSpec:
    """
    Bloco contíguo de bandas com estatística própria.

    weight_factor multiplica o peso do bloco (< 1 favorece blocos críticos).
    """

    first_band: int
    band_count: int
    occupancy_prob: float
    persistence: float = 0.0
    weight_factor: float = 1.0

    def __post_init__(self):
        if self.band_count < 1:
            raise InvalidConfigError(f"band_count deve ser >= 1 (recebeu {self.band_count})")
        if self.first_band < 0:
            raise InvalidConfigError("first_band deve ser >= 0")
        if not 0.0 <= self.occupancy_prob <= 1.0:
            raise InvalidConfigError(f"occupancy_prob fora de [0, 1]: {self.occupancy_prob}")
        if not 0.0 <= self.persistence < 1.0:
            raise InvalidConfigError(f"persistence fora de [0, 1): {self.persistence}")
        if not self.weight_factor > 0:
            raise InvalidConfigError("weight_factor deve ser > 0")

    @property
    def stop(self) -> int:
        return self.first_band + self.band_count

    @property
    def expected_count(self) -> float:
        return self.occupancy_prob * self.band_count


@dataclass(frozen=True)
class WidebandModel:
    """n bandas particionadas em blocos + faixa de amplitude das bandas ocupadas."""

    n: int
    blocks: tuple
    occupied_amplitude_range: tuple = (1.0, 2.0)

    def __post_init__(self):
        blocos = tuple(self.blocks)
        object.__setattr__(self, "blocks", blocos)
        if not blocos:
            raise InvalidConfigError("o modelo precisa de ao menos um bloco")
        proximo = 0
        for b in blocos:
            if b.first_band != proximo:
                raise InvalidConfigError(
                    f"blocos não particionam 0..{self.n - 1}: esperado início {proximo}, recebeu {b.first_band}"
                )
            proximo = b.stop
        if proximo != self.n:
            raise InvalidConfigError(f"blocos cobrem {proximo} bandas, mas n={self.n}")

        baixo, alto = (float(v) for v in self.occupied_amplitude_range)
        if not 0 < baixo <= alto:
            raise InvalidConfigError(f"faixa de amplitude inválida: [{baixo}, {alto}]")
        object.__setattr__(self, "occupied_amplitude_range", (baixo, alto))

        esperado = self.expected_occupancy()
        if esperado >= self.n:
            log.warning(f"[spectrum] Ocupação esperada {esperado:.1f} >= n={self.n}: fora do regime esparso")

    @classmethod
    def from_blocks(cls, specs: Sequence, amplitude_range=(1.0, 2.0)) -> "WidebandModel":
        """
        Monta o modelo a partir de (band_count, p[, persistence[, weight_factor]]) ou BlockSpec,
        calculando first_band cumulativamente.
        """
        blocos = []
        inicio = 0
        for spec in specs:
            if isinstance(spec, BlockSpec):
                bloco = BlockSpec(inicio, spec.band_count, spec.occupancy_prob, spec.persistence, spec.weight_factor)
            else:
                bloco = BlockSpec(inicio, *spec)
            blocos.append(bloco)
            inicio = bloco.stop
        return cls(inicio, tuple(blocos), amplitude_range)

    @property
    def block_starts(self) -> np.ndarray:
        return np.array([b.first_band for b in self.blocks])

    def band_values(self, attr: str) -> np.ndarray:
        """Expande um atributo por bloco para um vetor por banda."""
        return np.repeat([float(getattr(b, attr)) for b in self.blocks], [b.band_count for b in self.blocks])

    def expected_counts(self) -> np.ndarray:
        return np.array([b.expected_count for b in self.blocks])

    def expected_occupancy(self) -> float:
        return float(self.expected_counts().sum())

    def mean_occupied_power(self) -> float:
        """E[a²] para a ~ U[lo, hi]."""
        baixo, alto = self.occupied_amplitude_range
        return (baixo * baixo + baixo * alto + alto * alto) / 3.0


@dataclass(frozen=True, eq=False)
class OccupancySnapshot:
    """Ocupação instantânea: bits por banda + kᵢ por bloco."""

    bits: np.ndarray
    per_block_counts: tuple

    @classmethod
    def from_bits(cls, bits, model: WidebandModel) -> "OccupancySnapshot":
        bits = np.asarray(bits, dtype=bool)
        if bits.shape != (model.n,):
            raise InvalidDimensionError(f"snapshot com {bits.size} bandas para modelo de n={model.n}")
        contagens = np.add.reduceat(bits.astype(int), model.block_starts)
        return cls(bits, tuple(int(c) for c in contagens))

    @property
    def occupied_count(self) -> int:
        return int(self.bits.sum())


@dataclass(frozen=True, eq=False)
class OccupancyHistory:
    """
    T slots de ocupação.

    bits tem shape (T, n); per_block_series tem shape (T, n_blocos) com kᵢ(t).
    """

    bits: np.ndarray
    per_block_series: np.ndarray
    model: WidebandModel = field(repr=False)

    @property
    def T(self) -> int:
        return int(self.bits.shape[0])

    @property
    def snapshots(self) -> tuple:
        return tuple(
            OccupancySnapshot(self.bits[t], tuple(int(c) for c in self.per_block_series[t])) for t in range(self.T)
        )

    def snapshot(self, t: int) -> OccupancySnapshot:
        return OccupancySnapshot(self.bits[t], tuple(int(c) for c in self.per_block_series[t]))

    def block_series(self, block_index: int) -> np.ndarray:
        return self.per_block_series[:, block_index]

    def head(self, T: int) -> "OccupancyHistory":
        """Primeiros T slots (o restante fica como futuro desconhecido)."""
        return OccupancyHistory(self.bits[:T], self.per_block_series[:T], self.model)


# ── Operações ─────────────────────────────────────────────────────


def sample_occupancy(model: WidebandModel, seed: int) -> OccupancySnapshot:
    """Cada banda ocupada independentemente com o p do seu bloco."""
    rng = np.random.default_rng(seed)
    bits = rng.random(model.n) < model.band_values("occupancy_prob")
    return OccupancySnapshot.from_bits(bits, model)


def transition_probabilities(p: np.ndarray, persistence: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(P(ocup→ocup), P(vago→ocup)) da cadeia estacionária em p com correlação lag-1 = persistence."""
    return p + persistence * (1.0 - p), p * (1.0 - persistence)


def evolve_history(model: WidebandModel, T: int, seed: int) -> OccupancyHistory:
    """
    Evolui T slots de uma cadeia de Markov de dois estados por banda.

    Estado inicial sorteado da distribuição estacionária (Bernoulli(p)).
    """
    if T < 1:
        raise InvalidInputError(f"T deve ser >= 1 (recebeu {T})")
    rng = np.random.default_rng(seed)
    p = model.band_values("occupancy_prob")
    p_11, p_01 = transition_probabilities(p, model.band_values("persistence"))

    bits = np.empty((T, model.n), dtype=bool)
    estado = rng.random(model.n) < p
    bits[0] = estado
    for t in range(1, T):
        estado = rng.random(model.n) < np.where(estado, p_11, p_01)
        bits[t] = estado

    series = np.add.reduceat(bits.astype(int), model.block_starts, axis=1)
    log.debug(f"[spectrum] Histórico de {T} slots gerado ({model.n} bandas, {len(model.blocks)} blocos)")
    return OccupancyHistory(bits, series, model)


def synthesize_signal(snapshot: OccupancySnapshot, model: WidebandModel, seed: int) -> SparseSignal:
    """Bandas ocupadas recebem magnitude U[lo, hi] com sinal aleatório; vagas ficam exatamente em 0."""
    if snapshot.bits.shape != (model.n,):
        raise InvalidDimensionError(f"snapshot com {snapshot.bits.size} bandas para modelo de n={model.n}")
    rng = np.random.default_rng(seed)
    baixo, alto = model.occupied_amplitude_range
    magnitudes = rng.uniform(baixo, alto, size=model.n)
    sinais = np.where(rng.random(model.n) < 0.5, -1.0, 1.0)
    valores = np.where(snapshot.bits, magnitudes * sinais, 0.0)
    return SparseSignal(valores, frozenset(int(i) for i in np.flatnonzero(snapshot.bits)))


def block_weights(
    model: WidebandModel,
    source: str = "expected",
    history: Optional[OccupancyHistory] = None,
    predicted: Optional[Sequence[float]] = None,
) -> WeightVector:
    """
    Pesos por banda: wᵢ = weight_factorᵢ / max(k̄ᵢ, ε) para toda banda do bloco i.

    source:
        expected        → k̄ᵢ = pᵢ·band_countᵢ
        history_average → média temporal de kᵢ(t) no histórico
        predicted       → k̂ᵢ do preditor de ocupação (lista ou PredictionResult)
    """
    if source == "expected":
        k_bar = model.expected_counts()
    elif source == "history_average":
        if history is None or history.T == 0:
            raise InvalidInputError("pesos por histórico exigem um OccupancyHistory não vazio")
        k_bar = history.per_block_series.mean(axis=0)
    elif source == "predicted":
        if predicted is None:
            raise MissingPredictionError("pesos preditos solicitados sem predição de ocupação")
        k_bar = np.asarray(getattr(predicted, "k_hat", predicted), dtype=float)
        if k_bar.shape != (len(model.blocks),) or not np.all(np.isfinite(k_bar)):
            raise MissingPredictionError(f"predição incompleta: esperado {len(model.blocks)} blocos")
    else:
        raise InvalidConfigError(f"fonte de pesos desconhecida: {source} (disponíveis: {WEIGHT_SOURCES})")

    fatores = np.array([b.weight_factor for b in model.blocks])
    por_bloco = fatores / np.maximum(k_bar, OCCUPANCY_FLOOR)
    return WeightVector(np.repeat(por_bloco, [b.band_count for b in model.blocks]))


def noise_std_for_snr(model: WidebandModel, snr_db: float) -> float:
    """σ tal que (potência média de banda ocupada)/σ² = 10^(snr_db/10)."""
    return float(np.sqrt(model.mean_occupied_power() / 10.0 ** (snr_db / 10.0)))
