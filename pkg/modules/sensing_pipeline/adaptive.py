"""
Esquema adaptativo em dois passos para o número de medições.

Passo 1 recupera com m0 medições e estima k̂ pelo suporte detectado; passo 2 estende
a mesma Φ até m_final = ceil(c·k̂·ln(n/max(k̂,1))) (limitado a [m0, n]) e recupera de novo.

Design:
- Φ estendida = primeiras m linhas de um único sorteio n×n, reescaladas por √(n/m)
  (variância das entradas sempre 1/m; as linhas do passo 1 são reaproveitadas)
- O ruído também é sorteado uma vez para as n linhas possíveis
- Recuperação por OMP com parada pelo resíduo (k desconhecido no passo 1)
"""

from __future__ import annotations

import dataclasses
import logging
import math
from dataclasses import dataclass

import numpy as np
import pandas as pd

from sparsity_framework.cs_core import SparseSignal, build_sensing_matrix, omp, support_detect
from sparsity_framework.errors import InvalidConfigError
from sparsity_framework.seeding import derive_seed

from .config import ADAPTIVE_RESIDUAL_TOLERANCE, NOISELESS_SUPPORT_FLOOR, STAGE_NOISE, STAGE_PHI
from .phase_transition import random_sparse_signal

log = logging.getLogger(__name__)

ADAPTIVE_COLUMNS = ["trial", "true_k", "k_hat", "m0", "m_final", "exact_fixed", "exact_adaptive"]


@dataclass(frozen=True, eq=False)
class AdaptiveInstance:
    """Sinal verdadeiro + sorteio completo (n linhas) de Φ e do ruído."""

    signal: SparseSignal
    phi_full: np.ndarray
    noise_full: np.ndarray
    noise_std: float = 0.0

    @property
    def n(self) -> int:
        return self.signal.length

    def matrix(self, m: int) -> np.ndarray:
        """Primeiras m linhas, com variância 1/m."""
        return self.phi_full[:m] * math.sqrt(self.n / m)

    def measurements(self, m: int) -> np.ndarray:
        return self.matrix(m) @ self.signal.values + self.noise_full[:m]


@dataclass(frozen=True, eq=False)
class AdaptiveOutcome:
    k_hat: int
    m_final: int
    estimate: SparseSignal


def make_adaptive_instance(n: int, k: int, seed: int, trial_index: int = 0, noise_std: float = 0.0) -> AdaptiveInstance:
    if not 0 <= k <= n:
        raise InvalidConfigError(f"k fora de [0, n]: k={k}, n={n}")
    x = random_sparse_signal(n, k, derive_seed(seed, trial_index, "adaptive-signal"))
    phi = build_sensing_matrix(n, n, "gaussian", derive_seed(seed, trial_index, STAGE_PHI))
    rng = np.random.default_rng(derive_seed(seed, trial_index, STAGE_NOISE))
    ruido = rng.normal(0.0, noise_std, size=n) if noise_std > 0 else np.zeros(n)
    return AdaptiveInstance(x, phi, ruido, noise_std)


def _recover(instance: AdaptiveInstance, m: int) -> SparseSignal:
    tolerancia = ADAPTIVE_RESIDUAL_TOLERANCE
    if instance.noise_std > 0:
        # ‖e‖₂ ≈ σ√m; parar antes disso só ajusta ruído
        tolerancia = max(tolerancia, 1.5 * instance.noise_std * math.sqrt(m))
    return omp(instance.matrix(m), instance.measurements(m), m, tolerancia)


def _threshold(instance: AdaptiveInstance, m: int) -> float:
    if instance.noise_std > 0:
        return 3.0 * instance.noise_std / math.sqrt(m)
    return NOISELESS_SUPPORT_FLOOR


def final_measurement_count(k_hat: int, n: int, m0: int, safety_factor: float) -> int:
    alvo = math.ceil(safety_factor * k_hat * math.log(n / max(k_hat, 1)))
    return int(min(max(alvo, m0), n))


def adaptive_measurements(instance: AdaptiveInstance, m0: int, safety_factor: float = 2.0) -> AdaptiveOutcome:
    """Executa os dois passos e devolve (k̂, m_final, x̂ final)."""
    n = instance.n
    if not 1 <= m0 <= n:
        raise InvalidConfigError(f"m0 deve estar em [1, n]: m0={m0}, n={n}")
    if safety_factor <= 0:
        raise InvalidConfigError("safety_factor (c) deve ser > 0")

    primeiro = _recover(instance, m0)
    k_hat = int(support_detect(primeiro, _threshold(instance, m0)).sum())
    m_final = final_measurement_count(k_hat, n, m0, safety_factor)
    if m_final == m0:
        return AdaptiveOutcome(k_hat, m0, primeiro)

    log.debug(f"[adaptive] k̂={k_hat}: estendendo de m0={m0} para m={m_final}")
    return AdaptiveOutcome(k_hat, m_final, _recover(instance, m_final))


def exact_support(instance: AdaptiveInstance, estimate: SparseSignal, m: int) -> bool:
    return bool(np.array_equal(support_detect(estimate, _threshold(instance, m)), instance.signal.values != 0))


def run_adaptive_demo(
    n: int,
    k: int,
    m0: int,
    safety_factor: float,
    trials: int,
    seed: int,
    noise_std: float = 0.0,
) -> pd.DataFrame:
    """Compara, trial a trial, a recuperação com m0 fixo e a adaptativa (mesma instância)."""
    if trials < 1:
        raise InvalidConfigError("trials deve ser >= 1")
    linhas = []
    for t in range(trials):
        instancia = make_adaptive_instance(n, k, seed, t, noise_std)
        fixo = _recover(instancia, m0)
        resultado = adaptive_measurements(instancia, m0, safety_factor)
        linhas.append({
            "trial": t,
            "true_k": k,
            "k_hat": resultado.k_hat,
            "m0": m0,
            "m_final": resultado.m_final,
            "exact_fixed": exact_support(instancia, fixo, m0),
            "exact_adaptive": exact_support(instancia, resultado.estimate, resultado.m_final),
        })
    df = pd.DataFrame(linhas, columns=ADAPTIVE_COLUMNS)
    log.info(
        f"[adaptive] n={n} k={k} m0={m0}: exato fixo={df['exact_fixed'].mean():.2%}, "
        f"adaptativo={df['exact_adaptive'].mean():.2%}, m_final médio={df['m_final'].mean():.1f}"
    )
    return df


@dataclass(frozen=True)
class AdaptiveDemoStudy:
    """Parâmetros do comando adaptive-demo."""

    n: int
    k: int
    m0: int
    safety_factor: float = 2.0
    trials: int = 100
    noise_std: float = 0.0
    master_seed: int = 0

    def with_seed(self, master_seed: int) -> "AdaptiveDemoStudy":
        return dataclasses.replace(self, master_seed=master_seed)

    def run(self) -> pd.DataFrame:
        return run_adaptive_demo(
            self.n, self.k, self.m0, self.safety_factor, self.trials, self.master_seed, self.noise_std
        )
