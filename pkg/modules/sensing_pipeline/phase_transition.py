"""
Estudo empírico de transição de fase: menor m que recupera o suporte exato (OMP,
sem ruído) em uma fração >= success_threshold dos trials, para cada k.

O ajuste m* ≈ c·k·ln(n/k) é feito por mínimos quadrados pela origem; R² usa a
soma de quadrados total centrada na média de m*.
"""

from __future__ import annotations

import dataclasses
import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import pandas as pd

from sparsity_framework.cs_core import SparseSignal, build_sensing_matrix, omp, support_detect
from sparsity_framework.errors import InvalidConfigError
from sparsity_framework.seeding import derive_seed

from .config import NOISELESS_SUPPORT_FLOOR, PHASE_TRANSITION_AMPLITUDE, PHASE_TRANSITION_TRIALS

log = logging.getLogger(__name__)

PHASE_TRANSITION_COLUMNS = ["k", "m_star", "fit_c", "fit_r2"]


@dataclass(frozen=True, eq=False)
class PhaseTransitionResult:
    table: pd.DataFrame
    fit_c: float
    fit_r2: float


def random_sparse_signal(n: int, k: int, seed: int, amplitude=PHASE_TRANSITION_AMPLITUDE) -> SparseSignal:
    """k posições distintas com magnitude U[lo, hi] e sinal aleatório."""
    rng = np.random.default_rng(seed)
    valores = np.zeros(n)
    suporte = rng.choice(n, size=k, replace=False)
    valores[suporte] = rng.uniform(*amplitude, size=k) * np.where(rng.random(k) < 0.5, -1.0, 1.0)
    return SparseSignal(valores, frozenset(int(i) for i in suporte))


def exact_support_rate(n: int, k: int, m: int, seed: int, trials: int = PHASE_TRANSITION_TRIALS) -> float:
    """
    Fração de trials em que OMP (orçamento k) acerta o suporte exato com m medições.

    Φ de cada trial não depende de m além das linhas extras (mesma semente),
    o que torna a taxa praticamente monótona em m.
    """
    acertos = 0
    for t in range(trials):
        x = random_sparse_signal(n, k, derive_seed(seed, t, f"pt-signal:{k}"))
        phi = build_sensing_matrix(m, n, "gaussian", derive_seed(seed, t, f"pt-phi:{k}"))
        x_hat = omp(phi, phi @ x.values, k, residual_tolerance=0.0)
        acertos += bool(np.array_equal(support_detect(x_hat, NOISELESS_SUPPORT_FLOOR), x.values != 0))
    return acertos / trials


def minimal_measurements(n: int, k: int, seed: int, success_threshold: float, trials: int) -> int:
    """Busca binária do menor m em [k, n] com taxa de sucesso >= limiar (n se nenhum atingir)."""
    if k == 0:
        return 0
    baixo, alto = max(k, 1), n
    while baixo < alto:
        meio = (baixo + alto) // 2
        if exact_support_rate(n, k, meio, seed, trials) >= success_threshold:
            alto = meio
        else:
            baixo = meio + 1
    return baixo


def fit_scaling_law(ks: Sequence[int], m_stars: Sequence[int], n: int) -> tuple[float, float]:
    """(c, R²) de m* ≈ c·k·ln(n/k), ignorando k = 0."""
    pares = [(k * math.log(n / k), m) for k, m in zip(ks, m_stars) if k > 0]
    if not pares:
        return 0.0, 1.0
    z = np.array([p[0] for p in pares])
    alvo = np.array([p[1] for p in pares], dtype=float)
    c = float(z @ alvo / (z @ z))
    ss_res = float(np.sum((alvo - c * z) ** 2))
    ss_tot = float(np.sum((alvo - alvo.mean()) ** 2))
    if ss_tot == 0.0:
        return c, 1.0 if ss_res == 0.0 else 0.0
    return c, 1.0 - ss_res / ss_tot


def phase_transition(
    n: int,
    k_grid: Sequence[int],
    seed: int,
    success_threshold: float = 0.9,
    trials: int = PHASE_TRANSITION_TRIALS,
) -> PhaseTransitionResult:
    """Calcula m* para cada k e o ajuste da lei de escala m = O(k log(n/k))."""
    ks = [int(k) for k in k_grid]
    if any(k < 0 or k > n / 2 for k in ks):
        raise InvalidConfigError(f"valores de k devem estar em [0, n/2] (n={n}): {ks}")
    if not 0.0 < success_threshold <= 1.0:
        raise InvalidConfigError("success_threshold deve estar em (0, 1]")

    m_stars = []
    for k in ks:
        m_star = minimal_measurements(n, k, seed, success_threshold, trials)
        log.info(f"[phase] n={n} k={k}: m* = {m_star}")
        m_stars.append(m_star)

    c, r2 = fit_scaling_law(ks, m_stars, n)
    log.info(f"[phase] ajuste m* ≈ {c:.3f}·k·ln(n/k) (R² = {r2:.4f})")
    tabela = pd.DataFrame(
        {"k": ks, "m_star": m_stars, "fit_c": [c] * len(ks), "fit_r2": [r2] * len(ks)},
        columns=PHASE_TRANSITION_COLUMNS,
    )
    return PhaseTransitionResult(tabela, c, r2)


@dataclass(frozen=True)
class PhaseTransitionStudy:
    """Parâmetros de um estudo de transição de fase (comando phase-transition)."""

    n: int
    k_grid: tuple
    success_threshold: float = 0.9
    trials: int = PHASE_TRANSITION_TRIALS
    master_seed: int = 0

    def with_seed(self, master_seed: int) -> "PhaseTransitionStudy":
        return dataclasses.replace(self, master_seed=master_seed)

    def run(self) -> PhaseTransitionResult:
        return phase_transition(self.n, self.k_grid, self.master_seed, self.success_threshold, self.trials)
