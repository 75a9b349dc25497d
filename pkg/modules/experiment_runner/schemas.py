"""
Schemas (pydantic) dos arquivos de configuração JSON, um por comando.

Design:
- extra="forbid" em todos os modelos: chave desconhecida → erro com o caminho da chave
- Faixas numéricas validadas no schema; invariantes entre campos (partição de blocos,
  histórico mínimo do preditor) validadas pelas dataclasses do framework
- parse_config devolve sempre o objeto de domínio, nunca o schema
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Annotated, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from sparsity_framework.cs_core import RecoveryConfig, StepSizePolicy
from sparsity_framework.errors import ConfigParseError, ConfigSemanticError, InvalidConfigError, InvalidModelError
from sparsity_framework.predictors import PredictorSpec
from sparsity_framework.spectrum_model import BlockSpec, WidebandModel, noise_std_for_snr

from modules.d2d_gather.protocol import GatherScenario
from modules.sensing_pipeline.adaptive import AdaptiveDemoStudy
from modules.sensing_pipeline.phase_transition import PhaseTransitionStudy
from modules.sensing_pipeline.pipeline import ExperimentConfig, SensingStrategy

Seed = Annotated[int, Field(ge=0, lt=2**64)]
Ratio = Annotated[float, Field(gt=0.0, le=1.0)]


class StrictSchema(BaseModel):
    model_config = ConfigDict(extra="forbid")


class StepSizeSchema(StrictSchema):
    kind: Literal["inverse-spectral-norm", "fixed"] = "inverse-spectral-norm"
    value: Optional[float] = Field(None, gt=0.0)


class RecoverySchema(StrictSchema):
    max_iterations: int = Field(2000, ge=1)
    residual_tolerance: float = Field(1e-9, ge=0.0)
    step_size: StepSizeSchema = StepSizeSchema()
    regularization: float = Field(0.05, ge=0.0)
    support_threshold: Optional[float] = Field(None, ge=0.0)

    def to_domain(self) -> RecoveryConfig:
        return RecoveryConfig(
            max_iterations=self.max_iterations,
            residual_tolerance=self.residual_tolerance,
            step_size=StepSizePolicy(self.step_size.kind, self.step_size.value),
            regularization=self.regularization,
            support_threshold=self.support_threshold,
        )


class BlockSchema(StrictSchema):
    band_count: int = Field(..., ge=1)
    occupancy_prob: float = Field(..., ge=0.0, le=1.0)
    persistence: float = Field(0.0, ge=0.0, lt=1.0)
    weight_factor: float = Field(1.0, gt=0.0)


class ModelSchema(StrictSchema):
    blocks: list[BlockSchema] = Field(..., min_length=1)
    amplitude_range: tuple[float, float] = (1.0, 2.0)

    def to_domain(self) -> WidebandModel:
        specs = [BlockSpec(0, b.band_count, b.occupancy_prob, b.persistence, b.weight_factor) for b in self.blocks]
        return WidebandModel.from_blocks(specs, self.amplitude_range)


class PredictorSchema(StrictSchema):
    kind: Literal["moving_average", "linear_regression", "ar1"] = "ar1"
    window: int = Field(5, ge=1)


class StrategySchema(StrictSchema):
    kind: Literal["conventional_l1", "omp", "weighted_l1_expected", "weighted_l1_history", "weighted_l1_predicted"]
    predictor: Optional[PredictorSchema] = None

    def to_domain(self) -> SensingStrategy:
        spec = PredictorSpec(self.predictor.kind, self.predictor.window) if self.predictor else None
        return SensingStrategy(self.kind, spec)


class SenseSweepSchema(StrictSchema):
    model: ModelSchema
    m_over_n: list[Ratio] = Field(..., min_length=1)
    strategies: list[StrategySchema] = Field(..., min_length=1)
    noise_std: Optional[float] = Field(None, ge=0.0)
    snr_db: Optional[float] = None
    trials: int = Field(100, ge=1)
    master_seed: Seed = 0
    recovery: RecoverySchema = RecoverySchema()
    history_length: int = Field(0, ge=0)
    ensemble: Literal["gaussian", "rademacher"] = "gaussian"
    dictionary: Literal["identity", "dft"] = "identity"
    weight_normalization: Literal["none", "mean"] = "mean"
    record_timing: bool = False

    @field_validator("m_over_n", mode="before")
    @classmethod
    def _scalar_to_list(cls, value):
        return [value] if isinstance(value, (int, float)) else value

    def to_domain(self) -> ExperimentConfig:
        if self.noise_std is not None and self.snr_db is not None:
            raise ConfigSemanticError("snr_db", "informe noise_std ou snr_db, não ambos")
        model = _domain("model", self.model.to_domain)
        recovery = _domain("recovery", self.recovery.to_domain)
        noise_std = self.noise_std or 0.0
        if self.snr_db is not None:
            noise_std = noise_std_for_snr(model, self.snr_db)
        return _domain(
            "strategies",
            lambda: ExperimentConfig(
                model=model,
                m_over_n=tuple(self.m_over_n),
                strategies=tuple(s.to_domain() for s in self.strategies),
                noise_std=noise_std,
                trials=self.trials,
                master_seed=self.master_seed,
                recovery=recovery,
                history_length=self.history_length,
                ensemble=self.ensemble,
                dictionary=self.dictionary,
                weight_normalization=self.weight_normalization,
                record_timing=self.record_timing,
            ),
        )


class PhaseTransitionSchema(StrictSchema):
    n: int = Field(..., ge=2)
    k_grid: list[Annotated[int, Field(ge=0)]] = Field(..., min_length=1)
    success_threshold: float = Field(0.9, gt=0.0, le=1.0)
    trials: int = Field(50, ge=1)
    master_seed: Seed = 0

    def to_domain(self) -> PhaseTransitionStudy:
        for i, k in enumerate(self.k_grid):
            if k > self.n / 2:
                raise ConfigSemanticError(f"k_grid.{i}", f"k={k} excede n/2 = {self.n / 2:g}")
        return PhaseTransitionStudy(self.n, tuple(self.k_grid), self.success_threshold, self.trials, self.master_seed)


class GatherScenarioSchema(StrictSchema):
    N: int = Field(..., ge=1)
    m: int = Field(..., ge=1)
    rounds: int = Field(1, ge=1)
    updates_per_round: Optional[int] = Field(None, ge=0)
    update_prob: float = Field(0.0, ge=0.0, le=1.0)
    n_agg: Optional[int] = Field(None, ge=1)
    alpha: Optional[float] = Field(None, gt=-1.0, lt=1.0)
    solver: Literal["omp", "weighted_l1"] = "omp"
    expected_sparsity: Optional[int] = Field(None, ge=0)
    replica_length: int = Field(1, ge=1)
    master_seed: Seed = 0
    recovery: RecoverySchema = RecoverySchema()

    def to_domain(self) -> GatherScenario:
        if self.m > self.N:
            raise ConfigSemanticError("m", f"m={self.m} excede N={self.N}")
        if self.updates_per_round is not None and self.updates_per_round > self.N:
            raise ConfigSemanticError("updates_per_round", f"{self.updates_per_round} excede N={self.N}")
        return GatherScenario(
            N=self.N,
            m=self.m,
            rounds=self.rounds,
            updates_per_round=self.updates_per_round,
            update_prob=self.update_prob,
            n_agg=self.n_agg,
            alpha=self.alpha,
            solver=self.solver,
            expected_sparsity=self.expected_sparsity,
            replica_length=self.replica_length,
            master_seed=self.master_seed,
            recovery=self.recovery.to_domain(),
        )


class AdaptiveDemoSchema(StrictSchema):
    n: int = Field(..., ge=2)
    k: int = Field(..., ge=0)
    m0: int = Field(..., ge=1)
    safety_factor: float = Field(2.0, gt=0.0)
    trials: int = Field(100, ge=1)
    noise_std: float = Field(0.0, ge=0.0)
    master_seed: Seed = 0

    def to_domain(self) -> AdaptiveDemoStudy:
        if self.k > self.n:
            raise ConfigSemanticError("k", f"k={self.k} excede n={self.n}")
        if self.m0 > self.n:
            raise ConfigSemanticError("m0", f"m0={self.m0} excede n={self.n}")
        return AdaptiveDemoStudy(
            self.n, self.k, self.m0, self.safety_factor, self.trials, self.noise_std, self.master_seed
        )


SCHEMAS = {
    "sense-sweep": SenseSweepSchema,
    "phase-transition": PhaseTransitionSchema,
    "gather-sim": GatherScenarioSchema,
    "ar-gather": GatherScenarioSchema,
    "adaptive-demo": AdaptiveDemoSchema,
}

DomainConfig = Union[ExperimentConfig, PhaseTransitionStudy, GatherScenario, AdaptiveDemoStudy]


def _domain(key_path: str, build):
    """Converte erros de invariantes das dataclasses em erro semântico com caminho de chave."""
    try:
        return build()
    except (InvalidConfigError, InvalidModelError) as e:
        raise ConfigSemanticError(key_path, str(e)) from e


def _key_path(loc: tuple) -> str:
    return ".".join(str(parte) for parte in loc) or "<raiz>"


def parse_config(path, command: str) -> DomainConfig:
    """
    Lê e valida o arquivo JSON do comando.

    Raises:
        ConfigParseError: JSON malformado ou texto fora de UTF-8 (linha/coluna).
        ConfigSemanticError: chave desconhecida, tipo ou faixa inválidos (caminho da chave).
        OSError: arquivo ilegível.
    """
    if command not in SCHEMAS:
        raise InvalidConfigError(f"comando desconhecido: {command} (disponíveis: {tuple(SCHEMAS)})")
    conteudo = Path(path).read_bytes()
    try:
        texto = conteudo.decode("utf-8")
    except UnicodeDecodeError as e:
        anterior = conteudo[: e.start]
        linha = anterior.count(b"\n") + 1
        coluna = e.start - (anterior.rfind(b"\n") + 1) + 1
        raise ConfigParseError(path, linha, coluna, f"byte inválido em UTF-8 (0x{conteudo[e.start]:02x})") from e
    try:
        bruto = json.loads(texto)
    except json.JSONDecodeError as e:
        raise ConfigParseError(path, e.lineno, e.colno, e.msg) from e

    try:
        schema = SCHEMAS[command].model_validate(bruto)
    except ValidationError as e:
        primeiro = e.errors()[0]
        raise ConfigSemanticError(_key_path(primeiro["loc"]), primeiro["msg"]) from e

    if command == "ar-gather" and schema.alpha is None:
        raise ConfigSemanticError("alpha", "ar-gather exige alpha")
    if isinstance(schema, SenseSweepSchema):
        return schema.to_domain()
    return _domain("<raiz>", schema.to_domain)
