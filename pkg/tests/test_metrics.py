import numpy as np
import pandas as pd
import pytest

from sparsity_framework.errors import InvalidInputError
from sparsity_framework.metrics import (
    Z_95,
    aggregate_trials,
    compute_metrics,
    nmse,
    paired_difference,
    standard_error,
)


def _detalhe(linhas):
    return pd.DataFrame(linhas, columns=["strategy", "m_over_n", "trial", "miss_detection", "false_alarm"])


def test_perfect_detection():
    verdade = np.array([1, 0, 1, 0, 0], dtype=bool)
    x = np.array([1.5, 0, -2.0, 0, 0])
    metricas = compute_metrics(verdade, verdade.copy(), x, x)
    assert metricas.miss_detection_rate == 0.0
    assert metricas.false_alarm_rate == 0.0
    assert metricas.support_error_count == 0
    assert metricas.nmse == 0.0


def test_all_missed():
    verdade = np.array([1, 1, 1, 1, 0, 0], dtype=bool)
    x = np.where(verdade, 1.0, 0.0)
    metricas = compute_metrics(verdade, np.zeros(6, dtype=bool), x, np.zeros(6))
    assert metricas.miss_detection_rate == 1.0
    assert metricas.nmse == 1.0


def test_mixed_confusion_counts():
    verdade = np.array([True, False, True, False])
    detectado = np.array([True, True, False, False])
    x = np.array([1.0, 0.0, 1.0, 0.0])
    metricas = compute_metrics(verdade, detectado, x, x)
    assert metricas.miss_detection_rate == 0.5
    assert metricas.false_alarm_rate == 0.5
    assert metricas.support_error_count == 2
    assert metricas.miss_detection_rate * metricas.occupied_count + metricas.correct_detections == metricas.occupied_count


def test_vacant_truth_counts_no_miss():
    metricas = compute_metrics(np.zeros(4, dtype=bool), np.array([1, 0, 0, 0], dtype=bool), np.zeros(4), np.zeros(4))
    assert metricas.miss_detection_rate == 0.0
    assert metricas.false_alarm_rate == 0.25


def test_length_mismatch():
    with pytest.raises(InvalidInputError):
        compute_metrics(np.zeros(4, dtype=bool), np.zeros(5, dtype=bool), np.zeros(4), np.zeros(4))


def test_nmse_conventions():
    assert nmse(np.zeros(3), np.zeros(3)) == 0.0
    assert nmse(np.zeros(3), np.array([0.0, 1e-3, 0.0])) == 1.0
    assert nmse(np.array([2.0, 0.0]), np.array([1.0, 0.0])) == pytest.approx(0.25)


def test_standard_error():
    assert standard_error(pd.Series([0.3])) == 0.0
    assert standard_error(pd.Series([1.0, 3.0])) == pytest.approx(np.std([1.0, 3.0], ddof=1) / np.sqrt(2))


def test_aggregate_keeps_first_appearance_order():
    detalhe = _detalhe([
        ("omp", 0.3, 0, 0.0, 0.1),
        ("omp", 0.3, 1, 0.0, 0.3),
        ("conventional_l1", 0.3, 0, 0.5, 0.0),
        ("conventional_l1", 0.3, 1, 0.25, 0.0),
    ])
    agregado = aggregate_trials(detalhe)
    assert list(agregado["strategy"]) == ["omp", "conventional_l1"]
    assert agregado.loc[0, "mean_miss"] == 0.0
    assert agregado.loc[0, "se_miss"] == 0.0
    assert agregado.loc[0, "mean_fa"] == pytest.approx(0.2)
    assert agregado.loc[1, "mean_miss"] == pytest.approx(0.375)


def test_aggregate_of_empty_detail():
    agregado = aggregate_trials(_detalhe([]))
    assert agregado.empty
    assert list(agregado.columns) == ["strategy", "m_over_n", "mean_miss", "se_miss", "mean_fa", "se_fa"]


def test_paired_difference():
    detalhe = _detalhe([
        ("a", 0.3, 0, 0.1, 0.0),
        ("a", 0.3, 1, 0.2, 0.0),
        ("a", 0.3, 2, 0.0, 0.0),
        ("b", 0.3, 0, 0.3, 0.0),
        ("b", 0.3, 1, 0.3, 0.0),
        ("b", 0.3, 2, 0.3, 0.0),
    ])
    diferenca = paired_difference(detalhe, "a", "b")
    linha = diferenca.iloc[0]
    se = np.std([-0.2, -0.1, -0.3], ddof=1) / np.sqrt(3)
    assert linha["mean_diff"] == pytest.approx(-0.2)
    assert linha["se_diff"] == pytest.approx(se)
    assert linha["ci_high"] == pytest.approx(-0.2 + Z_95 * se)
    assert linha["trials"] == 3


def test_confidence_quantile():
    assert Z_95 == pytest.approx(1.959964, abs=1e-6)


def test_paired_difference_without_pairs():
    detalhe = _detalhe([("a", 0.3, 0, 0.1, 0.0)])
    assert paired_difference(detalhe, "a", "b").empty
