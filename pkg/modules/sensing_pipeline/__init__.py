"""
Módulo sensing_pipeline
Experimentos ponta a ponta de sensoriamento compressivo de banda larga.
"""
