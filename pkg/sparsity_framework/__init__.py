"""
sparsity_framework/__init__.py

Framework de Sensoriamento Esparso — sparse-edge-analytics

Uso rápido:
    from sparsity_framework.cs_core import build_sensing_matrix, measure, omp
    from sparsity_framework.spectrum_model import WidebandModel, BlockSpec, block_weights
    from sparsity_framework.predictors import PredictorSpec, predict_blocks

    model = WidebandModel.from_blocks([BlockSpec(0, 32, 0.1), BlockSpec(32, 32, 0.5)])
    phi = build_sensing_matrix(20, model.n, "gaussian", seed=7)
"""

__version__ = "1.0.0"
__author__ = "sparse-edge-analytics"
