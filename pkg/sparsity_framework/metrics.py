"""
sparsity_framework/metrics.py

Métricas de detecção e recuperação por trial Monte-Carlo, e sua agregação.

Metodologia documentada:
- Miss-detection: ocupadas declaradas vagas / max(#ocupadas, 1)
- Falso alarme: vagas declaradas ocupadas / max(#vagas, 1)
- NMSE: ‖x̂ − x‖² / ‖x‖² (0 se x = x̂ = 0; 1 se x = 0 e x̂ ≠ 0)
- Agregação: média + erro padrão por (estratégia, m/n); comparação pareada por
  números aleatórios comuns (mesmas sementes entre estratégias)
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
import pandas as pd
from scipy import stats

from sparsity_framework.errors import InvalidInputError

log = logging.getLogger(__name__)

# Quantil normal do intervalo de confiança de 95%
Z_95 = float(stats.norm.ppf(0.975))


@dataclass(frozen=True)
class Metrics:
    """Contagens de confusão + taxas derivadas de um trial."""

    miss_detection_rate: float
    false_alarm_rate: float
    support_error_count: int
    nmse: float
    occupied_count: int = 0
    correct_detections: int = 0
    wall_time: float = 0.0


def _bits(valor) -> np.ndarray:
    return np.asarray(getattr(valor, "bits", valor), dtype=bool)


def _valores(valor) -> np.ndarray:
    return np.asarray(getattr(valor, "values", valor), dtype=float)


def nmse(x, x_hat) -> float:
    """Erro quadrático normalizado com as convenções para x = 0."""
    x, x_hat = _valores(x), _valores(x_hat)
    energia = float(x @ x)
    erro = float((x_hat - x) @ (x_hat - x))
    if energia == 0.0:
        return 0.0 if erro == 0.0 else 1.0
    return erro / energia


def compute_metrics(truth, detected, x, x_hat, wall_time: float = 0.0) -> Metrics:
    """
    Compara a ocupação verdadeira com a detectada e o sinal com sua estimativa.

    truth aceita OccupancySnapshot ou vetor de bits; x/x_hat aceitam SparseSignal ou vetor.
    """
    verdade, detectado = _bits(truth), _bits(detected)
    x_v, x_hat_v = _valores(x), _valores(x_hat)
    if not (verdade.shape == detectado.shape == x_v.shape == x_hat_v.shape):
        raise InvalidInputError(
            f"comprimentos divergentes: truth={verdade.size}, detected={detectado.size}, "
            f"x={x_v.size}, x_hat={x_hat_v.size}"
        )

    ocupadas = int(verdade.sum())
    vagas = int(verdade.size - ocupadas)
    perdidas = int(np.sum(verdade & ~detectado))
    falsos = int(np.sum(~verdade & detectado))

    return Metrics(
        miss_detection_rate=perdidas / max(ocupadas, 1),
        false_alarm_rate=falsos / max(vagas, 1),
        support_error_count=int(np.sum(verdade != detectado)),
        nmse=nmse(x_v, x_hat_v),
        occupied_count=ocupadas,
        correct_detections=ocupadas - perdidas,
        wall_time=wall_time,
    )


def standard_error(valores: pd.Series) -> float:
    """Desvio padrão amostral / √N (0 com um único trial)."""
    n = len(valores)
    if n < 2:
        return 0.0
    return float(valores.std(ddof=1) / math.sqrt(n))


def aggregate_trials(df_detail: pd.DataFrame) -> pd.DataFrame:
    """
    Agrega linhas de detalhe em (strategy, m_over_n) → média e erro padrão.

    Ordem de saída: a mesma ordem de primeira aparição no detalhe (determinística).
    """
    colunas = ["strategy", "m_over_n", "mean_miss", "se_miss", "mean_fa", "se_fa"]
    if df_detail.empty:
        return pd.DataFrame(columns=colunas)

    linhas = []
    for (estrategia, razao), grupo in df_detail.groupby(["strategy", "m_over_n"], sort=False):
        linhas.append({
            "strategy": estrategia,
            "m_over_n": razao,
            "mean_miss": float(grupo["miss_detection"].mean()),
            "se_miss": standard_error(grupo["miss_detection"]),
            "mean_fa": float(grupo["false_alarm"].mean()),
            "se_fa": standard_error(grupo["false_alarm"]),
        })
    return pd.DataFrame(linhas, columns=colunas)


def paired_difference(
    df_detail: pd.DataFrame,
    strategy_a: str,
    strategy_b: str,
    column: str = "miss_detection",
) -> pd.DataFrame:
    """
    Diferença pareada (a − b) por trial, usando números aleatórios comuns.

    Retorna por m_over_n: média, erro padrão e IC de 95% (normal) da diferença.
    """
    a = df_detail[df_detail["strategy"] == strategy_a].set_index(["m_over_n", "trial"])[column]
    b = df_detail[df_detail["strategy"] == strategy_b].set_index(["m_over_n", "trial"])[column]
    diferenca = (a - b).dropna()
    if diferenca.empty:
        log.warning(f"[metrics] Sem trials pareados entre '{strategy_a}' e '{strategy_b}'")
        return pd.DataFrame(columns=["m_over_n", "mean_diff", "se_diff", "ci_low", "ci_high", "trials"])

    linhas = []
    for razao, grupo in diferenca.groupby(level="m_over_n"):
        media = float(grupo.mean())
        se = standard_error(grupo)
        linhas.append({
            "m_over_n": razao,
            "mean_diff": media,
            "se_diff": se,
            "ci_low": media - Z_95 * se,
            "ci_high": media + Z_95 * se,
            "trials": int(grupo.size),
        })
    return pd.DataFrame(linhas)
