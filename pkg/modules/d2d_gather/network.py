"""
População de nós IoT, topologias (NetworkX) e atribuição de coeficientes.

Cada nó i guarda a linha i de uma matriz gaussiana N×N: qualquer subconjunto de
nós pode ser escolhido depois como conjunto de pull.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import networkx as nx
import numpy as np

from sparsity_framework.cs_core import build_sensing_matrix
from sparsity_framework.errors import InvalidConfigError, InvalidTopologyError, ProtocolOrderError

from .config import AGGREGATOR_PREFIX, BASE_STATION_LABEL, TOPOLOGIES
from .ledger import SignalingLedger

log = logging.getLogger(__name__)


@dataclass(eq=False)
class IoTNode:
    """Nó IoT com sua linha de coeficientes e o acumulador da rodada."""

    id: int
    coefficient_row: np.ndarray
    replica_length: int = 1
    accumulator: np.ndarray = field(init=False)
    update_value: np.ndarray = field(init=False)
    awake: bool = True

    def __post_init__(self):
        self.accumulator = np.zeros(self.replica_length)
        self.update_value = np.zeros(self.replica_length)

    def accumulate(self, contribution: np.ndarray) -> None:
        if not self.awake:
            raise ProtocolOrderError(f"nó {self.id} em modo sleep não pode alterar o acumulador")
        self.accumulator = self.accumulator + contribution

    def sleep(self) -> None:
        self.awake = False

    def reset_round(self) -> None:
        self.accumulator = np.zeros(self.replica_length)
        self.update_value = np.zeros(self.replica_length)
        self.awake = True


def aggregator_label(j: int) -> str:
    return f"{AGGREGATOR_PREFIX}:{j}"


def build_topology(N: int, topology: str = "clique", n_agg: int = 0) -> nx.Graph:
    """
    Grafo da rede.

    clique           → grafo completo sobre os IoTs 0..N-1
    aggregation_tree → raiz "bs", nós "agg:j" e IoT i pendurado em agg:(i mod n_agg)
    """
    if topology == "clique":
        return nx.complete_graph(N)
    if topology == "aggregation_tree":
        if n_agg < 1:
            raise InvalidTopologyError("árvore de agregação exige n_agg >= 1")
        G = nx.Graph()
        G.add_node(BASE_STATION_LABEL, tipo="bs")
        for j in range(n_agg):
            G.add_node(aggregator_label(j), tipo="agregador")
            G.add_edge(BASE_STATION_LABEL, aggregator_label(j))
        for i in range(N):
            G.add_node(i, tipo="iot")
            G.add_edge(i, aggregator_label(i % n_agg))
        return G
    raise InvalidTopologyError(f"topologia desconhecida: {topology} (disponíveis: {TOPOLOGIES})")


@dataclass(eq=False)
class GatherNetwork:
    nodes: list
    m: int
    topology: str = "clique"
    n_agg: int = 0
    update_prob: float = 0.0
    replica_length: int = 1
    graph: Optional[nx.Graph] = None
    ledger: SignalingLedger = field(default_factory=SignalingLedger)
    exchanged: bool = False
    true_updates: Optional[np.ndarray] = None

    @property
    def N(self) -> int:
        return len(self.nodes)

    @property
    def coefficient_matrix(self) -> np.ndarray:
        return np.vstack([no.coefficient_row for no in self.nodes])

    def pull_matrix(self, m: Optional[int] = None) -> np.ndarray:
        """Linhas dos m primeiros nós (conjunto de pull determinístico)."""
        m = self.m if m is None else m
        return np.vstack([no.coefficient_row for no in self.nodes[:m]])

    def accumulators(self) -> np.ndarray:
        return np.vstack([no.accumulator for no in self.nodes])

    def aggregator_of(self, node_id: int) -> str:
        if self.topology != "aggregation_tree":
            raise InvalidTopologyError("nós agregadores só existem na topologia aggregation_tree")
        return next(v for v in self.graph.neighbors(node_id) if str(v).startswith(AGGREGATOR_PREFIX))

    def reset_round(self) -> None:
        """Acorda todos os nós, zera acumuladores e o ledger da rodada."""
        for no in self.nodes:
            no.reset_round()
        self.exchanged = False
        self.true_updates = None
        self.ledger.reset()


def init_network(
    N: int,
    m: int,
    topology: str = "clique",
    seed: int = 0,
    n_agg: int = 0,
    update_prob: float = 0.0,
    replica_length: int = 1,
) -> GatherNetwork:
    """Cria N nós com linhas de uma matriz gaussiana N×N; todos acordados e zerados."""
    if N < 1:
        raise InvalidConfigError(f"N deve ser >= 1 (recebeu {N})")
    if not 1 <= m <= N:
        raise InvalidConfigError(f"pull count m deve estar em [1, N]: m={m}, N={N}")
    if not 0.0 <= update_prob <= 1.0:
        raise InvalidConfigError(f"update_prob fora de [0, 1]: {update_prob}")
    if replica_length < 1:
        raise InvalidConfigError("replica_length deve ser >= 1")

    grafo = build_topology(N, topology, n_agg)
    coeficientes = build_sensing_matrix(N, N, "gaussian", seed)
    nos = [IoTNode(i, coeficientes[i], replica_length) for i in range(N)]
    log.info(
        f"[d2d] Rede {topology}: N={N}, m={m}, {grafo.number_of_nodes()} nós no grafo, "
        f"{grafo.number_of_edges()} arestas"
    )
    return GatherNetwork(nos, m, topology, n_agg, update_prob, replica_length, grafo)


def required_pull_count(N: int, p: int, c: float) -> int:
    """m = ceil(c·p·ln(N/p)) limitado a [1, N]; p = 0 → 1."""
    if N < 1 or p < 0 or p > N:
        raise InvalidConfigError(f"parâmetros inválidos: N={N}, p={p}")
    if c <= 0:
        raise InvalidConfigError("constante c deve ser > 0")
    if p == 0:
        return 1
    return int(min(max(math.ceil(c * p * math.log(N / p)), 1), N))
