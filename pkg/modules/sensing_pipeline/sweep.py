"""
Varredura Monte-Carlo: estratégia × m/n × trial, com agregação por média e erro padrão.

A ordem das linhas é sempre (estratégia, m/n, trial), independente de quantas
threads executaram os trials.
"""

from __future__ import annotations

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import pandas as pd

from sparsity_framework.metrics import aggregate_trials

from .pipeline import ExperimentConfig, run_trial

log = logging.getLogger(__name__)

DETAIL_COLUMNS = ["strategy", "m_over_n", "trial", "miss_detection", "false_alarm", "nmse", "wall_time_s"]


@dataclass(frozen=True, eq=False)
class SweepResult:
    detail: pd.DataFrame
    aggregate: pd.DataFrame


def resolve_threads(threads: int) -> int:
    """0 → número de CPUs disponíveis."""
    if threads and threads > 0:
        return threads
    return os.cpu_count() or 1


def sweep(config: ExperimentConfig, threads: int = 1) -> SweepResult:
    """
    Executa todos os trials da configuração e agrega os resultados.

    Args:
        config: Configuração do experimento.
        threads: Paralelismo (0 = automático). Afeta só a velocidade.

    Returns:
        SweepResult com as linhas de detalhe e as linhas agregadas.
    """
    tarefas = [
        (estrategia, razao, trial)
        for estrategia in config.strategies
        for razao in config.m_over_n
        for trial in range(config.trials)
    ]
    workers = resolve_threads(threads)
    log.info(
        f"[sweep] {len(config.strategies)} estratégia(s) × {len(config.m_over_n)} razão(ões) × "
        f"{config.trials} trial(s) = {len(tarefas)} execuções ({workers} thread(s))"
    )

    if workers == 1:
        resultados = [run_trial(config, *t) for t in tarefas]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            # map preserva a ordem de submissão
            resultados = list(pool.map(lambda t: run_trial(config, *t), tarefas))

    df_detail = pd.DataFrame([r.as_row() for r in resultados], columns=DETAIL_COLUMNS)
    df_aggregate = aggregate_trials(df_detail)

    for _, linha in df_aggregate.iterrows():
        log.info(
            f"[sweep] {linha['strategy']:<32} m/n={linha['m_over_n']:.3f} "
            f"miss={linha['mean_miss']:.4f}±{linha['se_miss']:.4f} fa={linha['mean_fa']:.4f}"
        )
    return SweepResult(df_detail, df_aggregate)
