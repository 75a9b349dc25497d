"""
Máquina de estados de uma rodada de coleta compressiva D2D.

Fluxo (topologia clique):
    run_exchange → (todos em sleep) → bs_pull_and_recover → reset_round

Design:
- Slots de multicast em ordem crescente de id; só quem tem atualização transmite,
  pois no clique todos ouvem todas as atualizações diretamente
- Cada receptor j pondera a atualização uᵢ com o próprio coeficiente Φ[j, i]
- Réplicas vetoriais (replica_length > 1) são recuperadas coluna a coluna
- A estação base nunca lê a verdade; true_updates só serve ao critério de exatidão
"""

from __future__ import annotations

import dataclasses
import logging
import math
from dataclasses import dataclass, field
from typing import Mapping, Optional

import numpy as np
import pandas as pd

from sparsity_framework.cs_core import (
    RecoveryConfig,
    WeightVector,
    ista_weighted_l1,
    least_squares,
    omp,
)
from sparsity_framework.errors import (
    InvalidConfigError,
    InvalidDimensionError,
    InvalidModelError,
    InvalidTopologyError,
    InvalidUpdateError,
    ProtocolOrderError,
)
from sparsity_framework.metrics import nmse
from sparsity_framework.seeding import derive_seed

from .config import (
    BASE_STATION_LABEL,
    EXACT_TOLERANCE,
    OMP_RESIDUAL_TOLERANCE,
    SOLVERS,
    STAGE_COEFFICIENTS,
    STAGE_INNOVATIONS,
    STAGE_UPDATES,
    UPDATE_AMPLITUDE,
)
from .network import GatherNetwork, init_network, required_pull_count

log = logging.getLogger(__name__)

GATHER_COLUMNS = [
    "round", "mode", "N", "m", "p", "exact_recovery",
    "bs_connections", "d2d_multicasts", "network_node_transmissions", "sink_transmissions",
]
AR_GATHER_COLUMNS = ["round", "N", "m", "innovations", "nmse", "exact_recovery", "sink_transmissions"]

# Limiar relativo do suporte antes do reajuste por mínimos quadrados (solver weighted_l1)
DEBIAS_RELATIVE_THRESHOLD = 1e-3


@dataclass(frozen=True, eq=False)
class ExchangeReport:
    accumulators: np.ndarray
    d2d_multicasts: int


@dataclass(frozen=True, eq=False)
class RecoveryReport:
    """Estimativa (N × replica_length), medições montadas na BS e flag de exatidão."""

    estimate: np.ndarray
    measurements: np.ndarray
    exact: bool


@dataclass(frozen=True, eq=False)
class ARRoundReport:
    estimate: np.ndarray
    truth: np.ndarray
    innovation_estimate: np.ndarray
    exact: bool
    nmse: float


# ── Utilidades ────────────────────────────────────────────────────


def _update_matrix(net: GatherNetwork, updates: Mapping[int, object]) -> np.ndarray:
    """Valida o mapa nó → valor e devolve a matriz densa N × replica_length."""
    u = np.zeros((net.N, net.replica_length))
    for chave, valor in updates.items():
        if isinstance(chave, bool) or not isinstance(chave, (int, np.integer)) or not 0 <= chave < net.N:
            raise InvalidUpdateError(f"índice de atualização fora de [0, {net.N}): {chave}")
        v = np.atleast_1d(np.asarray(valor, dtype=float))
        if v.shape != (net.replica_length,) or not np.all(np.isfinite(v)):
            raise InvalidUpdateError(
                f"atualização do nó {chave} deve ter {net.replica_length} valor(es) finito(s), recebeu {v.shape}"
            )
        u[int(chave)] = v
    return u


def _as_columns(x: np.ndarray, N: int) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    if x.shape[0] != N:
        raise InvalidDimensionError(f"vetor de estado com {x.shape[0]} nós para rede de N={N}")
    return x


def _is_exact(estimate: np.ndarray, truth: np.ndarray) -> bool:
    mesmo_suporte = np.array_equal(np.abs(estimate) > EXACT_TOLERANCE, np.abs(truth) > EXACT_TOLERANCE)
    return bool(mesmo_suporte and np.max(np.abs(estimate - truth), initial=0.0) <= EXACT_TOLERANCE)


def _solve_column(
    A: np.ndarray,
    y: np.ndarray,
    solver: str,
    budget: int,
    recovery: RecoveryConfig,
) -> np.ndarray:
    m, N = A.shape
    if m == N:
        # sistema determinado: solução direta, independente de p
        return least_squares(A, y, range(N))
    if solver == "omp":
        return omp(A, y, budget, OMP_RESIDUAL_TOLERANCE).values
    x = ista_weighted_l1(A, y, WeightVector.uniform(N), recovery).values
    pico = float(np.max(np.abs(x), initial=0.0))
    if pico == 0.0:
        return x
    ordem = np.argsort(-np.abs(x), kind="stable")
    suporte = sorted(int(i) for i in ordem[:m] if abs(x[i]) > DEBIAS_RELATIVE_THRESHOLD * pico)
    refinado = np.zeros(N)
    refinado[suporte] = least_squares(A[:, suporte], y, suporte)
    return refinado


def recover_updates(
    A: np.ndarray,
    Y: np.ndarray,
    solver: str = "omp",
    expected_sparsity: Optional[int] = None,
    recovery: Optional[RecoveryConfig] = None,
) -> np.ndarray:
    """Recupera cada coluna de Y (m × d) a partir de A (m × N)."""
    if solver not in SOLVERS:
        raise InvalidConfigError(f"solver desconhecido: {solver} (disponíveis: {SOLVERS})")
    m = A.shape[0]
    budget = m if expected_sparsity is None else min(max(int(expected_sparsity), 0), m)
    recovery = recovery or RecoveryConfig()
    return np.column_stack([_solve_column(A, Y[:, c], solver, budget, recovery) for c in range(Y.shape[1])])


# ── Operações do protocolo ────────────────────────────────────────


def run_exchange(net: GatherNetwork, updates: Mapping[int, object]) -> ExchangeReport:
    """
    Troca multicast-acumula em slots; ao final todos os nós entram em sleep.

    Acumulador de j = Σ_{i atualizadores} Φ[j, i]·uᵢ.
    """
    if net.topology != "clique":
        raise InvalidTopologyError(f"troca multicast exige topologia clique (rede é {net.topology})")
    if net.exchanged:
        raise ProtocolOrderError("troca já realizada nesta rodada; chame reset_round() antes")

    u = _update_matrix(net, updates)
    atualizadores = sorted(int(i) for i in updates if np.any(u[int(i)] != 0.0))

    for i in atualizadores:
        net.nodes[i].update_value = u[i].copy()
        for j in [i, *net.graph.neighbors(i)]:
            no = net.nodes[j]
            no.accumulate(no.coefficient_row[i] * u[i])
        net.ledger.record("d2d_multicasts")

    for no in net.nodes:
        no.sleep()
    net.exchanged = True
    net.true_updates = u
    log.debug(f"[d2d] Troca concluída: {len(atualizadores)} multicast(s), N={net.N}")
    return ExchangeReport(net.accumulators(), len(atualizadores))


def bs_pull_and_recover(
    net: GatherNetwork,
    pull_count: Optional[int] = None,
    solver: str = "omp",
    expected_sparsity: Optional[int] = None,
    recovery: Optional[RecoveryConfig] = None,
) -> RecoveryReport:
    """A BS lê os acumuladores dos m primeiros nós e recupera o vetor esparso de atualizações."""
    if not net.exchanged:
        raise ProtocolOrderError("pull antes da troca: execute run_exchange() primeiro")
    m = net.m if pull_count is None else pull_count
    if not 1 <= m <= net.N:
        raise InvalidConfigError(f"pull count m deve estar em [1, N]: m={m}, N={net.N}")

    Y = np.vstack([no.accumulator for no in net.nodes[:m]])
    estimativa = recover_updates(net.pull_matrix(m), Y, solver, expected_sparsity, recovery)
    net.ledger.record("bs_connections", m)
    return RecoveryReport(estimativa, Y, _is_exact(estimativa, net.true_updates))


def run_aggregation_reporting(
    net: GatherNetwork,
    active_iots: int,
    seed: int,
    updates: Optional[Mapping[int, object]] = None,
    solver: str = "omp",
    expected_sparsity: Optional[int] = None,
    recovery: Optional[RecoveryConfig] = None,
) -> RecoveryReport:
    """
    Relato via nós agregadores: cada IoT ativo envia Φ_pull[:, i]·uᵢ ao seu agregador,
    cada agregador soma o que recebeu e reporta uma vez à BS.

    Com updates=None sorteia active_iots nós distintos com valores U[lo, hi].
    """
    if net.topology != "aggregation_tree":
        raise InvalidTopologyError(f"relato por agregadores exige aggregation_tree (rede é {net.topology})")
    if updates is None:
        updates = random_updates(net.N, active_iots, seed, replica_length=net.replica_length)
    u = _update_matrix(net, updates)
    ativos = sorted(int(i) for i in updates if np.any(u[int(i)] != 0.0))

    A = net.pull_matrix()
    recebido = {no: np.zeros((net.m, net.replica_length)) for no in net.graph.neighbors(BASE_STATION_LABEL)}
    for i in ativos:
        recebido[net.aggregator_of(i)] += np.outer(A[:, i], u[i])
        net.ledger.record("network_node_transmissions")

    Y = np.zeros((net.m, net.replica_length))
    for relato in recebido.values():
        Y += relato
        net.ledger.record("network_node_transmissions")

    net.true_updates = u
    estimativa = recover_updates(A, Y, solver, expected_sparsity, recovery)
    return RecoveryReport(estimativa, Y, _is_exact(estimativa, u))


def ar_gather_round(
    net: GatherNetwork,
    x_prev: np.ndarray,
    alpha: float,
    innovations: Mapping[int, object],
    solver: str = "omp",
    expected_sparsity: Optional[int] = None,
    true_previous: Optional[np.ndarray] = None,
    recovery: Optional[RecoveryConfig] = None,
) -> ARRoundReport:
    """
    Rodada de coleta com modelo AR(1): x_t = α·x_{t-1} + u.

    A BS recupera u a partir do resíduo y − α·Φ_pull·x_prev e devolve α·x_prev + û.
    true_previous (padrão: x_prev) é o estado verdadeiro anterior, usado só na simulação.
    """
    if not abs(alpha) < 1.0:
        raise InvalidModelError(f"|α| deve ser < 1 (recebeu {alpha})")
    anterior = _as_columns(x_prev, net.N)
    verdade_anterior = anterior if true_previous is None else _as_columns(true_previous, net.N)
    u = _update_matrix(net, innovations)

    verdade = alpha * verdade_anterior + u
    A = net.pull_matrix()
    Y = A @ verdade
    net.ledger.record("sink_transmissions", net.m)

    u_hat = recover_updates(A, Y - alpha * (A @ anterior), solver, expected_sparsity, recovery)
    estimativa = alpha * anterior + u_hat
    return ARRoundReport(
        estimate=estimativa,
        truth=verdade,
        innovation_estimate=u_hat,
        exact=_is_exact(u_hat, u),
        nmse=nmse(verdade.ravel(), estimativa.ravel()),
    )


# ── Cenários multi-rodada ─────────────────────────────────────────


def random_updates(
    N: int,
    count: Optional[int],
    seed: int,
    update_prob: float = 0.0,
    replica_length: int = 1,
) -> dict:
    """count nós distintos (ou cada nó com prob. update_prob quando count=None) com valores U[lo, hi]."""
    rng = np.random.default_rng(seed)
    if count is None:
        ids = np.flatnonzero(rng.random(N) < update_prob)
    else:
        if not 0 <= count <= N:
            raise InvalidConfigError(f"número de atualizações fora de [0, N]: {count}")
        ids = np.sort(rng.choice(N, size=count, replace=False))
    valores = rng.uniform(*UPDATE_AMPLITUDE, size=(len(ids), replica_length))
    return {int(i): (v[0] if replica_length == 1 else v) for i, v in zip(ids, valores)}


@dataclass(frozen=True)
class GatherScenario:
    """Parâmetros de um cenário de coleta (gather-sim e ar-gather)."""

    N: int
    m: int
    rounds: int = 1
    updates_per_round: Optional[int] = None
    update_prob: float = 0.0
    n_agg: Optional[int] = None
    alpha: Optional[float] = None
    solver: str = "omp"
    expected_sparsity: Optional[int] = None
    replica_length: int = 1
    master_seed: int = 0
    recovery: RecoveryConfig = field(default_factory=RecoveryConfig)

    def __post_init__(self):
        if self.rounds < 1:
            raise InvalidConfigError("rounds deve ser >= 1")
        if not 1 <= self.m <= self.N:
            raise InvalidConfigError(f"m deve estar em [1, N]: m={self.m}, N={self.N}")
        if self.updates_per_round is not None and not 0 <= self.updates_per_round <= self.N:
            raise InvalidConfigError("updates_per_round deve estar em [0, N]")
        if not 0.0 <= self.update_prob <= 1.0:
            raise InvalidConfigError("update_prob deve estar em [0, 1]")
        if self.n_agg is not None and self.n_agg < 1:
            raise InvalidConfigError("n_agg deve ser >= 1")
        if self.alpha is not None and not abs(self.alpha) < 1.0:
            raise InvalidModelError(f"|α| deve ser < 1 (recebeu {self.alpha})")
        if self.solver not in SOLVERS:
            raise InvalidConfigError(f"solver desconhecido: {self.solver}")

    def with_seed(self, master_seed: int) -> "GatherScenario":
        return dataclasses.replace(self, master_seed=master_seed)

    def round_updates(self, round_index: int, stage: str = STAGE_UPDATES) -> dict:
        return random_updates(
            self.N,
            self.updates_per_round,
            derive_seed(self.master_seed, round_index, stage),
            self.update_prob,
            self.replica_length,
        )


def _network(scenario: GatherScenario, topology: str) -> GatherNetwork:
    return init_network(
        scenario.N,
        scenario.m,
        topology,
        derive_seed(scenario.master_seed, 0, STAGE_COEFFICIENTS),
        n_agg=scenario.n_agg or 0,
        update_prob=scenario.update_prob,
        replica_length=scenario.replica_length,
    )


def simulate_gather(scenario: GatherScenario) -> pd.DataFrame:
    """
    Rodadas independentes de coleta: modo clique sempre e, com n_agg, também o modo
    de agregação sobre as mesmas atualizações e os mesmos coeficientes.
    """
    clique = _network(scenario, "clique")
    arvore = _network(scenario, "aggregation_tree") if scenario.n_agg else None
    linhas = []

    for r in range(scenario.rounds):
        updates = scenario.round_updates(r)
        p = len(updates)

        clique.reset_round()
        run_exchange(clique, updates)
        resultado = bs_pull_and_recover(
            clique, solver=scenario.solver, expected_sparsity=scenario.expected_sparsity, recovery=scenario.recovery
        )
        linhas.append({"round": r, "mode": "clique", "N": scenario.N, "m": scenario.m, "p": p,
                       "exact_recovery": resultado.exact, **_ledger_columns(clique)})

        if arvore is not None:
            arvore.reset_round()
            resultado = run_aggregation_reporting(
                arvore, p, 0, updates=updates, solver=scenario.solver,
                expected_sparsity=scenario.expected_sparsity, recovery=scenario.recovery,
            )
            linhas.append({"round": r, "mode": "aggregation_tree", "N": scenario.N, "m": scenario.m, "p": p,
                           "exact_recovery": resultado.exact, **_ledger_columns(arvore)})

    df = pd.DataFrame(linhas, columns=GATHER_COLUMNS)
    taxa = df.groupby("mode", sort=False)["exact_recovery"].mean()
    for modo, valor in taxa.items():
        log.info(f"[d2d] {modo}: recuperação exata em {valor:.1%} de {scenario.rounds} rodada(s)")
    return df


def _ledger_columns(net: GatherNetwork) -> dict:
    ledger = net.ledger
    return {
        "bs_connections": ledger.bs_connections,
        "d2d_multicasts": ledger.d2d_multicasts,
        "network_node_transmissions": ledger.network_node_transmissions,
        "sink_transmissions": ledger.sink_transmissions,
    }


def simulate_ar_gather(scenario: GatherScenario) -> pd.DataFrame:
    """Rodadas sucessivas de coleta AR partindo de x = 0; verdade e estimativa evoluem separadas."""
    if scenario.alpha is None:
        raise InvalidConfigError("ar-gather exige alpha")
    net = _network(scenario, "clique")
    estimativa = np.zeros((scenario.N, scenario.replica_length))
    verdade = np.zeros_like(estimativa)
    linhas = []

    for r in range(scenario.rounds):
        inovacoes = scenario.round_updates(r, STAGE_INNOVATIONS)
        net.reset_round()
        rodada = ar_gather_round(
            net, estimativa, scenario.alpha, inovacoes, scenario.solver,
            scenario.expected_sparsity, true_previous=verdade, recovery=scenario.recovery,
        )
        estimativa, verdade = rodada.estimate, rodada.truth
        linhas.append({
            "round": r,
            "N": scenario.N,
            "m": scenario.m,
            "innovations": len(inovacoes),
            "nmse": rodada.nmse,
            "exact_recovery": rodada.exact,
            "sink_transmissions": net.ledger.sink_transmissions,
        })

    df = pd.DataFrame(linhas, columns=AR_GATHER_COLUMNS)
    log.info(
        f"[d2d] AR α={scenario.alpha}: NMSE máximo {df['nmse'].max():.3e}, "
        f"inovações exatas em {df['exact_recovery'].mean():.1%} das rodadas"
    )
    return df


def pull_guideline(scenario: GatherScenario, constant: float) -> int:
    """m sugerido para o p esperado do cenário (ceil(q·N) quando p não é fixo)."""
    p = scenario.updates_per_round
    if p is None:
        p = min(scenario.N, math.ceil(scenario.update_prob * scenario.N))
    return required_pull_count(scenario.N, p, constant)
