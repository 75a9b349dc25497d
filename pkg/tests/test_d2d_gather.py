import numpy as np
import pandas as pd
import pytest

from sparsity_framework.errors import (
    InvalidConfigError,
    InvalidInputError,
    InvalidModelError,
    InvalidTopologyError,
    InvalidUpdateError,
    ProtocolOrderError,
)

from modules.d2d_gather.ledger import (
    SignalingLedger,
    cooperative_overhead,
    non_cooperative_overhead,
    overhead_summary,
)
from modules.d2d_gather.network import build_topology, init_network, required_pull_count
from modules.d2d_gather.protocol import (
    AR_GATHER_COLUMNS,
    GATHER_COLUMNS,
    GatherScenario,
    ar_gather_round,
    bs_pull_and_recover,
    pull_guideline,
    random_updates,
    run_aggregation_reporting,
    run_exchange,
    simulate_ar_gather,
    simulate_gather,
)


def _vetor(N, updates):
    u = np.zeros(N)
    for i, v in updates.items():
        u[i] = v
    return u


# ── Rede ──────────────────────────────────────────────────────────


def test_single_node_network():
    net = init_network(1, 1)
    assert net.N == 1
    assert net.coefficient_matrix.shape == (1, 1)
    assert all(no.awake for no in net.nodes)


def test_network_is_deterministic_and_full_rank():
    a = init_network(32, 8, seed=4)
    b = init_network(32, 8, seed=4)
    np.testing.assert_array_equal(a.coefficient_matrix, b.coefficient_matrix)
    assert np.linalg.matrix_rank(a.coefficient_matrix) == 32


def test_pull_count_outside_population():
    with pytest.raises(InvalidConfigError):
        init_network(8, 9)
    with pytest.raises(InvalidConfigError):
        init_network(8, 0)


def test_aggregation_tree_layout():
    grafo = build_topology(10, "aggregation_tree", n_agg=4)
    assert grafo.degree("bs") == 4
    net = init_network(10, 5, "aggregation_tree", n_agg=4)
    assert net.aggregator_of(5) == "agg:1"
    assert net.aggregator_of(8) == "agg:0"


def test_invalid_topologies():
    with pytest.raises(InvalidTopologyError):
        build_topology(10, "ring")
    with pytest.raises(InvalidTopologyError):
        build_topology(10, "aggregation_tree", n_agg=0)
    with pytest.raises(InvalidTopologyError):
        init_network(4, 2).aggregator_of(0)


def test_required_pull_count():
    assert required_pull_count(256, 8, 2.0) == 56
    assert required_pull_count(256, 0, 2.0) == 1
    assert required_pull_count(16, 8, 10.0) == 16
    assert pull_guideline(GatherScenario(N=256, m=64, updates_per_round=8), 2.0) == 56
    with pytest.raises(InvalidConfigError):
        required_pull_count(16, 4, 0.0)


# ── Troca multicast ───────────────────────────────────────────────


def test_exchange_without_updates():
    net = init_network(8, 4, seed=1)
    relatorio = run_exchange(net, {})
    assert relatorio.d2d_multicasts == 0
    assert not relatorio.accumulators.any()


def test_single_updater_scales_its_column():
    net = init_network(8, 4, seed=2)
    relatorio = run_exchange(net, {3: 5.0})
    np.testing.assert_allclose(relatorio.accumulators[:, 0], 5.0 * net.coefficient_matrix[:, 3])
    assert net.ledger.d2d_multicasts == 1


def test_accumulators_match_matrix_product():
    net = init_network(16, 8, seed=3)
    updates = random_updates(16, 3, seed=9)
    relatorio = run_exchange(net, updates)
    np.testing.assert_allclose(relatorio.accumulators[:, 0], net.coefficient_matrix @ _vetor(16, updates), atol=1e-12)
    assert relatorio.d2d_multicasts == 3


def test_nodes_sleep_after_exchange():
    net = init_network(8, 4, seed=5)
    run_exchange(net, {0: 1.0})
    assert not any(no.awake for no in net.nodes)
    with pytest.raises(ProtocolOrderError):
        net.nodes[2].accumulate(np.ones(1))
    with pytest.raises(ProtocolOrderError):
        run_exchange(net, {1: 1.0})
    net.reset_round()
    assert all(no.awake for no in net.nodes)
    assert net.ledger.d2d_multicasts == 0


@pytest.mark.parametrize("updates", [{8: 1.0}, {-1: 1.0}, {0: np.nan}, {0: [1.0, 2.0]}])
def test_invalid_updates(updates):
    with pytest.raises(InvalidUpdateError):
        run_exchange(init_network(8, 4), updates)


def test_exchange_needs_clique():
    net = init_network(8, 4, "aggregation_tree", n_agg=2)
    with pytest.raises(InvalidTopologyError):
        run_exchange(net, {0: 1.0})


# ── Pull e recuperação ────────────────────────────────────────────


def test_pull_before_exchange():
    with pytest.raises(ProtocolOrderError):
        bs_pull_and_recover(init_network(8, 4))


def test_pull_without_updates_is_exact():
    net = init_network(16, 6, seed=8)
    run_exchange(net, {})
    relatorio = bs_pull_and_recover(net)
    assert relatorio.exact
    assert not relatorio.estimate.any()
    assert net.ledger.bs_connections == 6


def test_sparse_updates_recovered_from_few_pulls():
    exatos = 0
    for seed in range(100):
        net = init_network(256, 64, seed=seed)
        run_exchange(net, random_updates(256, 8, seed=1000 + seed))
        relatorio = bs_pull_and_recover(net)
        exatos += relatorio.exact
        assert net.ledger.bs_connections == 64
    assert exatos >= 99


def test_full_pull_solves_directly():
    net = init_network(8, 8, seed=11)
    updates = random_updates(8, 5, seed=12)
    run_exchange(net, updates)
    relatorio = bs_pull_and_recover(net)
    assert relatorio.exact
    np.testing.assert_allclose(relatorio.estimate[:, 0], _vetor(8, updates), atol=1e-6)


def test_replica_vectors_recovered_column_wise():
    net = init_network(64, 32, seed=13, replica_length=3)
    updates = random_updates(64, 2, seed=14, replica_length=3)
    run_exchange(net, updates)
    relatorio = bs_pull_and_recover(net)
    assert relatorio.estimate.shape == (64, 3)
    assert relatorio.exact


def test_weighted_l1_solver_with_refit_is_exact():
    net = init_network(64, 32, seed=15)
    run_exchange(net, random_updates(64, 3, seed=16))
    assert bs_pull_and_recover(net, solver="weighted_l1").exact


# ── Árvore de agregação ───────────────────────────────────────────


def test_aggregation_counts_without_active_iots():
    net = init_network(16, 8, "aggregation_tree", n_agg=4)
    run_aggregation_reporting(net, 0, seed=1)
    assert net.ledger.network_node_transmissions == 4


def test_aggregation_counts_active_plus_network_nodes():
    net = init_network(64, 32, "aggregation_tree", seed=2, n_agg=4)
    relatorio = run_aggregation_reporting(net, 10, seed=3)
    assert net.ledger.network_node_transmissions == 14
    assert relatorio.measurements.shape == (32, 1)


def test_aggregation_draws_replica_updates():
    net = init_network(16, 8, "aggregation_tree", seed=4, n_agg=4, replica_length=3)
    relatorio = run_aggregation_reporting(net, 2, seed=5)
    assert relatorio.estimate.shape == (16, 3)
    assert relatorio.measurements.shape == (8, 3)
    assert np.count_nonzero(np.any(net.true_updates != 0.0, axis=1)) == 2
    np.testing.assert_allclose(relatorio.measurements, net.pull_matrix() @ net.true_updates, atol=1e-12)
    assert net.ledger.network_node_transmissions == 6


def test_aggregation_needs_tree():
    with pytest.raises(InvalidTopologyError):
        run_aggregation_reporting(init_network(8, 4), 2, seed=0)


def test_measurements_agree_across_modes():
    for seed in range(20):
        clique = init_network(48, 20, "clique", seed=seed)
        arvore = init_network(48, 20, "aggregation_tree", seed=seed, n_agg=5)
        updates = random_updates(48, 4, seed=100 + seed)
        run_exchange(clique, updates)
        y_clique = bs_pull_and_recover(clique).measurements
        y_arvore = run_aggregation_reporting(arvore, 4, seed=0, updates=updates).measurements
        y_direto = clique.pull_matrix() @ _vetor(48, updates)
        np.testing.assert_allclose(y_clique[:, 0], y_direto, atol=1e-12)
        np.testing.assert_allclose(y_arvore[:, 0], y_direto, atol=1e-12)


# ── Coleta AR ─────────────────────────────────────────────────────


def test_ar_round_without_innovation_propagates():
    net = init_network(32, 10, seed=21)
    x_prev = np.random.default_rng(0).normal(size=32)
    rodada = ar_gather_round(net, x_prev, 0.7, {})
    np.testing.assert_array_equal(rodada.estimate[:, 0], 0.7 * x_prev)
    assert net.ledger.sink_transmissions == 10


def test_ar_round_with_zero_alpha_recovers_updates():
    net = init_network(64, 24, seed=22)
    updates = random_updates(64, 2, seed=23)
    rodada = ar_gather_round(net, np.ones(64), 0.0, updates)
    assert rodada.exact
    np.testing.assert_allclose(rodada.estimate[:, 0], _vetor(64, updates), atol=1e-6)


def test_ar_round_rejects_explosive_alpha():
    with pytest.raises(InvalidModelError):
        ar_gather_round(init_network(8, 4), np.zeros(8), 1.0, {})


def test_ar_gather_tracks_truth_over_rounds():
    scenario = GatherScenario(N=128, m=40, rounds=20, updates_per_round=1, alpha=0.9, master_seed=31)
    df = simulate_ar_gather(scenario)
    assert list(df.columns) == AR_GATHER_COLUMNS
    assert len(df) == 20
    assert (df["nmse"] <= 1e-6).all()
    assert (df["sink_transmissions"] == 40).all()


def test_ar_gather_requires_alpha():
    with pytest.raises(InvalidConfigError):
        simulate_ar_gather(GatherScenario(N=16, m=8))


# ── Cenários ──────────────────────────────────────────────────────


def test_gather_simulation_rows_and_ledger():
    scenario = GatherScenario(N=64, m=32, rounds=3, updates_per_round=4, n_agg=8, master_seed=5)
    df = simulate_gather(scenario)
    assert list(df.columns) == GATHER_COLUMNS
    assert list(df["mode"]) == ["clique", "aggregation_tree"] * 3
    assert list(df["round"]) == [0, 0, 1, 1, 2, 2]
    clique = df[df["mode"] == "clique"]
    arvore = df[df["mode"] == "aggregation_tree"]
    assert (clique["bs_connections"] == 32).all()
    assert (clique["d2d_multicasts"] == 4).all()
    assert (arvore["network_node_transmissions"] == 12).all()
    assert list(clique["exact_recovery"]) == list(arvore["exact_recovery"])


def test_gather_simulation_is_deterministic():
    scenario = GatherScenario(N=32, m=16, rounds=4, update_prob=0.1, master_seed=8)
    pd.testing.assert_frame_equal(simulate_gather(scenario), simulate_gather(scenario))
    assert scenario.with_seed(9).master_seed == 9


@pytest.mark.parametrize(
    "kwargs",
    [{"N": 8, "m": 9}, {"N": 8, "m": 4, "rounds": 0}, {"N": 8, "m": 4, "solver": "lasso"}],
)
def test_invalid_scenarios(kwargs):
    with pytest.raises(InvalidConfigError):
        GatherScenario(**kwargs)


# ── Overhead de sinalização ───────────────────────────────────────


def test_ledger_counters():
    ledger = SignalingLedger()
    ledger.record("bs_connections", 3)
    ledger.record("bs_connections")
    assert ledger.as_dict()["bs_connections"] == 4
    with pytest.raises(InvalidInputError):
        ledger.record("uplink")
    with pytest.raises(InvalidInputError):
        ledger.record("bs_connections", -1)
    ledger.reset()
    assert not any(ledger.as_dict().values())


def test_cooperative_overhead():
    assert cooperative_overhead(SignalingLedger(), 0).su_reports == 0
    assert cooperative_overhead(SignalingLedger(), 5).su_reports == 5
    ledger = SignalingLedger()
    cooperative_overhead(ledger, 3)
    cooperative_overhead(ledger, 3)
    assert ledger.su_reports == 6
    assert non_cooperative_overhead(SignalingLedger()).su_reports == 0
    with pytest.raises(InvalidInputError):
        cooperative_overhead(SignalingLedger(), -1)


def test_overhead_summary():
    tabela = overhead_summary(m=64, p=10, n_agg=4, num_sus=5).set_index("technique")["overhead_count"]
    assert tabela["conventional_cs"] == 0
    assert tabela["conventional_cs_cooperative"] == 5
    assert tabela["d2d_replica_upload"] == 64
    assert tabela["ar_data_gathering"] == 64
    assert tabela["aggregation_reporting"] == 14
    assert tabela["two_step_adaptive_cs"] == 0


def test_aggregation_ledger_with_sixteen_network_nodes():
    net = init_network(256, 64, "aggregation_tree", seed=40, n_agg=16)
    run_aggregation_reporting(net, 8, seed=41)
    assert net.ledger.network_node_transmissions == 24
