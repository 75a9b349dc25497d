"""
Configurações centrais do módulo sensing_pipeline.
"""

# Estratégias de recuperação reconhecidas pelo pipeline
STRATEGY_KINDS = (
    "conventional_l1",
    "omp",
    "weighted_l1_expected",
    "weighted_l1_history",
    "weighted_l1_predicted",
)

# Normalização dos pesos antes do ISTA: "mean" divide pela média, "none" usa 1/k̄ bruto
WEIGHT_NORMALIZATIONS = ("none", "mean")
DEFAULT_WEIGHT_NORMALIZATION = "mean"

# Dicionários: "identity" (ocupação nativa em frequência) ou "dft" (base DFT inversa real)
DICTIONARIES = ("identity", "dft")

# Limiar de detecção em comparações exatas de suporte sem ruído
NOISELESS_SUPPORT_FLOOR = 1e-9

# Estudo de transição de fase
PHASE_TRANSITION_TRIALS = 50
PHASE_TRANSITION_AMPLITUDE = (1.0, 2.0)

# Esquema adaptativo em dois passos
ADAPTIVE_RESIDUAL_TOLERANCE = 1e-6

# Tags de estágio usadas na divisão de sementes (não alterar: muda todos os resultados)
STAGE_HISTORY = "history"
STAGE_OCCUPANCY = "occupancy"
STAGE_SIGNAL = "signal"
STAGE_PHI = "phi"
STAGE_NOISE = "noise"

# Cenário de demonstração: n=256 em 8 blocos de 32 bandas, ocupação heterogênea
DEMO_BLOCK_PROBS = (0.02, 0.05, 0.05, 0.1, 0.1, 0.2, 0.3, 0.5)
DEMO_BLOCK_SIZE = 32
DEMO_M_OVER_N = (0.2, 0.3, 0.4)
DEMO_SNR_DB = 10.0
