"""
Módulo experiment_runner
Front-end de linha de comando: arquivo de configuração JSON → experimento → CSV.
"""
