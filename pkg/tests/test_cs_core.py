import math

import numpy as np
import pytest

from sparsity_framework.cs_core import (
    RecoveryConfig,
    SparseSignal,
    StepSizePolicy,
    WeightVector,
    build_dft_dictionary,
    build_sensing_matrix,
    ista_iterates,
    ista_weighted_l1,
    l0_oracle,
    least_squares,
    measure,
    omp,
    support_detect,
)
from sparsity_framework.errors import (
    DegenerateSupportError,
    InstanceTooLargeError,
    InvalidBudgetError,
    InvalidConfigError,
    InvalidDimensionError,
    InvalidInputError,
)


def _sparse_instance(seed, n=12, m=8, k=2):
    rng = np.random.default_rng(seed)
    x = np.zeros(n)
    suporte = rng.choice(n, size=k, replace=False)
    x[suporte] = rng.uniform(1.0, 2.0, size=k) * rng.choice([-1.0, 1.0], size=k)
    A = build_sensing_matrix(m, n, "gaussian", seed)
    return A, A @ x, x


# ── build_sensing_matrix ──────────────────────────────────────────


def test_rademacher_entries_have_fixed_magnitude():
    phi = build_sensing_matrix(2, 4, "rademacher", 7)
    assert phi.shape == (2, 4)
    np.testing.assert_allclose(np.abs(phi), 1 / math.sqrt(2))


def test_square_gaussian_matrix_has_full_rank():
    assert np.linalg.matrix_rank(build_sensing_matrix(4, 4, "gaussian", 1)) == 4


def test_sensing_matrix_is_deterministic():
    assert np.array_equal(build_sensing_matrix(3, 8, "gaussian", 42), build_sensing_matrix(3, 8, "gaussian", 42))


@pytest.mark.parametrize("m, n", [(0, 4), (4, 0), (5, 4)])
def test_sensing_matrix_rejects_bad_dimensions(m, n):
    with pytest.raises(InvalidDimensionError):
        build_sensing_matrix(m, n)


def test_unknown_ensemble_is_a_config_error():
    with pytest.raises(InvalidConfigError):
        build_sensing_matrix(2, 4, "bernoulli")


# ── build_dft_dictionary ──────────────────────────────────────────


def test_dft_dictionary_of_one_band():
    assert np.array_equal(build_dft_dictionary(1), np.array([[1.0]]))


@pytest.mark.parametrize("n", range(1, 65))
def test_dft_dictionary_is_orthonormal(n):
    psi = build_dft_dictionary(n)
    assert psi.shape == (n, n)
    assert np.max(np.abs(psi.T @ psi - np.eye(n))) <= 1e-12


def test_dft_dictionary_first_column_is_constant():
    np.testing.assert_allclose(build_dft_dictionary(8)[:, 0], np.full(8, 1 / math.sqrt(8)), atol=1e-15)


def test_dft_dictionary_rejects_zero():
    with pytest.raises(InvalidDimensionError):
        build_dft_dictionary(0)


# ── measure ───────────────────────────────────────────────────────


def test_measure_zero_signal_is_zero():
    phi = build_sensing_matrix(3, 5, seed=3)
    assert np.array_equal(measure(phi, None, SparseSignal.zeros(5)), np.zeros(3))


def test_measure_with_identity_returns_signal():
    x = SparseSignal(np.array([0.0, 1.5, 0.0, -2.0]))
    np.testing.assert_array_equal(measure(np.eye(4), None, x), x.values)


def test_measure_matches_naive_product():
    phi = build_sensing_matrix(6, 10, seed=11)
    x = SparseSignal(np.random.default_rng(11).normal(size=10))
    esperado = [sum(phi[i, j] * x.values[j] for j in range(10)) for i in range(6)]
    np.testing.assert_allclose(measure(phi, None, x), esperado, atol=1e-12, rtol=0)


def test_measure_noise_is_seeded():
    phi = build_sensing_matrix(6, 10, seed=2)
    x = SparseSignal.zeros(10)
    assert np.array_equal(measure(phi, None, x, 0.5, seed=9), measure(phi, None, x, 0.5, seed=9))
    assert not np.array_equal(measure(phi, None, x, 0.5, seed=9), measure(phi, None, x, 0.5, seed=10))


def test_measure_dimension_mismatch():
    with pytest.raises(InvalidDimensionError):
        measure(build_sensing_matrix(3, 5), None, SparseSignal.zeros(6))


def test_sparse_signal_rejects_values_outside_declared_support():
    with pytest.raises(InvalidInputError):
        SparseSignal(np.array([1.0, 2.0]), frozenset({0}))


@pytest.mark.parametrize("suporte", [{2}, {-1}, {0, 5}])
def test_sparse_signal_rejects_support_out_of_range(suporte):
    with pytest.raises(InvalidInputError):
        SparseSignal(np.array([1.0, 0.0]), frozenset(suporte))


# ── least_squares ─────────────────────────────────────────────────


def test_least_squares_rank_deficient_support_reports_support():
    coluna = np.array([1.0, 2.0, 3.0])
    A_s = np.column_stack([coluna, coluna])
    with pytest.raises(DegenerateSupportError) as info:
        least_squares(A_s, np.array([1.0, 0.0, 1.0]), support=(3, 7))
    assert tuple(info.value.support) == (3, 7)


def test_least_squares_solves_well_posed_system():
    A = build_sensing_matrix(8, 8, seed=5)[:, :3]
    c = np.array([1.0, -2.0, 0.5])
    np.testing.assert_allclose(least_squares(A, A @ c), c, atol=1e-10)


# ── omp ───────────────────────────────────────────────────────────


def test_omp_identity_dictionary():
    x_hat = omp(np.eye(4), np.array([0.0, 5.0, 0.0, 0.0]), 1)
    np.testing.assert_allclose(x_hat.values, [0.0, 5.0, 0.0, 0.0])
    assert x_hat.support() == {1}


def test_omp_zero_measurements_stop_immediately():
    x_hat = omp(build_sensing_matrix(5, 9, seed=1), np.zeros(5), 3)
    assert np.array_equal(x_hat.values, np.zeros(9))
    assert x_hat.iterations == 0


def test_omp_budget_larger_than_m():
    with pytest.raises(InvalidBudgetError):
        omp(build_sensing_matrix(3, 6), np.ones(3), 4)


def test_omp_rejects_non_finite_input():
    with pytest.raises(InvalidInputError):
        omp(build_sensing_matrix(3, 6), np.array([1.0, np.nan, 0.0]), 1)


def test_omp_matches_l0_oracle_support():
    A, y, _ = _sparse_instance(seed=3)
    assert omp(A, y, 2).support() == l0_oracle(A, y, 2).support()


def test_exact_recovery_regime_omp_and_oracle():
    oracle_exato, omp_igual = 0, 0
    for seed in range(100):
        A, y, x = _sparse_instance(seed)
        verdade = frozenset(np.flatnonzero(x))
        oraculo = l0_oracle(A, y, 2)
        oracle_exato += oraculo.support() == verdade
        omp_igual += omp(A, y, 2).support() == oraculo.support()
    assert oracle_exato == 100
    # OMP guloso acerta 87 destes 100 suportes com m=8, k=2
    assert omp_igual >= 85


# ── ista_weighted_l1 ──────────────────────────────────────────────


def test_ista_full_shrinkage_gives_zero():
    A, y, _ = _sparse_instance(seed=4)
    lam = float(np.max(np.abs(A.T @ y)))
    x_hat = ista_weighted_l1(A, y, WeightVector.uniform(12), RecoveryConfig(regularization=lam))
    assert np.array_equal(x_hat.values, np.zeros(12))


def test_ista_identity_matches_soft_threshold():
    y = np.array([3.0, -0.02, 0.5, -1.2, 0.0])
    lam = 0.3
    x_hat = ista_weighted_l1(np.eye(5), y, WeightVector.uniform(5), RecoveryConfig(regularization=lam))
    np.testing.assert_allclose(x_hat.values, np.sign(y) * np.maximum(np.abs(y) - lam, 0.0), atol=1e-8)


def test_ista_objective_never_increases():
    config = RecoveryConfig(max_iterations=300, residual_tolerance=0.0, regularization=0.05)
    for seed in range(50):
        rng = np.random.default_rng(seed)
        A = build_sensing_matrix(32, 64, seed=seed)
        y = rng.normal(size=32)
        w = WeightVector(rng.uniform(0.1, 3.0, size=64))
        objetivos = [obj for _, _, obj in ista_iterates(A, y, w, config)]
        assert np.all(np.diff(objetivos) <= 1e-12)


def test_constant_weights_equal_rescaled_lambda():
    A, y, _ = _sparse_instance(seed=8)
    config = RecoveryConfig(max_iterations=200, residual_tolerance=0.0, regularization=0.05)
    escalado = RecoveryConfig(max_iterations=200, residual_tolerance=0.0, regularization=0.1)
    ponderado = list(ista_iterates(A, y, WeightVector(np.full(12, 2.0)), config))
    uniforme = list(ista_iterates(A, y, WeightVector.uniform(12), escalado))
    assert len(ponderado) == len(uniforme)
    for (_, x_a, _), (_, x_b, _) in zip(ponderado, uniforme):
        assert np.array_equal(x_a, x_b)


def test_tiny_weights_on_true_support_match_least_squares():
    A = build_sensing_matrix(8, 16, seed=21)
    suporte = [3, 11]
    x = np.zeros(16)
    x[suporte] = [1.4, -1.8]
    y = A @ x
    w = np.full(16, 1e3)
    w[suporte] = 1e-3
    config = RecoveryConfig(max_iterations=50000, residual_tolerance=0.0, regularization=1e-3)
    x_hat = ista_weighted_l1(A, y, WeightVector(w), config)
    referencia = least_squares(A[:, suporte], y)
    np.testing.assert_allclose(x_hat.values[suporte], referencia, atol=1e-4)


def test_ista_rejects_non_finite_input():
    with pytest.raises(InvalidInputError):
        ista_weighted_l1(np.eye(2), np.array([np.inf, 0.0]), WeightVector.uniform(2), RecoveryConfig())


@pytest.mark.parametrize("value", [0.0, -1.0])
def test_fixed_step_must_be_positive(value):
    with pytest.raises(InvalidConfigError):
        StepSizePolicy.fixed(value)


def test_weight_vector_rejects_non_positive():
    with pytest.raises(InvalidInputError):
        WeightVector(np.array([1.0, 0.0]))


# ── l0_oracle ─────────────────────────────────────────────────────


def test_l0_oracle_zero_measurements():
    x_hat = l0_oracle(build_sensing_matrix(4, 6, seed=1), np.zeros(4), 2)
    assert np.array_equal(x_hat.values, np.zeros(6))


def test_l0_oracle_identity():
    x_hat = l0_oracle(np.eye(3), np.array([3.0, 0.0, 0.0]), 1)
    np.testing.assert_allclose(x_hat.values, [3.0, 0.0, 0.0])


def test_l0_oracle_residual_dominates_every_small_support():
    rng = np.random.default_rng(6)
    A = build_sensing_matrix(4, 6, seed=6)
    y = rng.normal(size=4)
    melhor = np.linalg.norm(y - A @ l0_oracle(A, y, 2).values)
    for i in range(6):
        for j in range(i, 6):
            colunas = sorted({i, j})
            coef, *_ = np.linalg.lstsq(A[:, colunas], y, rcond=None)
            assert melhor <= np.linalg.norm(y - A[:, colunas] @ coef) + 1e-9


def test_l0_oracle_dominates_omp_and_ista():
    config = RecoveryConfig(regularization=0.01)
    for seed in range(10):
        rng = np.random.default_rng(100 + seed)
        A = build_sensing_matrix(8, 12, seed=100 + seed)
        y = rng.normal(size=8)
        residuo_oraculo = np.linalg.norm(y - A @ l0_oracle(A, y, 2).values)
        residuo_omp = np.linalg.norm(y - A @ omp(A, y, 2).values)
        x_ista = ista_weighted_l1(A, y, WeightVector.uniform(12), config).values
        x_ista[np.argsort(-np.abs(x_ista))[2:]] = 0.0
        assert residuo_oraculo <= residuo_omp + 1e-9
        assert residuo_oraculo <= np.linalg.norm(y - A @ x_ista) + 1e-9


def test_l0_oracle_refuses_large_instances():
    with pytest.raises(InstanceTooLargeError):
        l0_oracle(build_sensing_matrix(4, 21), np.ones(4), 1)


# ── support_detect ────────────────────────────────────────────────


def test_support_detect_zero_estimate():
    assert not support_detect(SparseSignal.zeros(4), 0.0).any()


def test_support_detect_direct_comparison():
    bits = support_detect(SparseSignal(np.array([0.5, 0.0, 2.0])), 1.0)
    assert bits.tolist() == [False, False, True]


def test_support_detect_boundary_is_vacant():
    assert support_detect(np.array([1.0, -1.0]), 1.0).tolist() == [False, False]
