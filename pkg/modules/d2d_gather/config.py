"""
Configurações centrais do módulo d2d_gather.
"""

# Topologias suportadas: clique (um único domínio de broadcast) ou árvore de agregação
TOPOLOGIES = ("clique", "aggregation_tree")

# Solvers usados pela estação base
SOLVERS = ("omp", "weighted_l1")

# Magnitude das atualizações sorteadas em cenários aleatórios
UPDATE_AMPLITUDE = (1.0, 2.0)

# Tolerância do critério de recuperação exata (suporte e valores)
EXACT_TOLERANCE = 1e-6

# Parada do OMP pelo resíduo (medições sem ruído)
OMP_RESIDUAL_TOLERANCE = 1e-9

# Constante c padrão da regra m >= c·p·ln(N/p)
DEFAULT_PULL_CONSTANT = 2.0

# Rótulos dos nós não-IoT no grafo
BASE_STATION_LABEL = "bs"
AGGREGATOR_PREFIX = "agg"

# Tags de estágio usadas na divisão de sementes
STAGE_COEFFICIENTS = "d2d-coefficients"
STAGE_UPDATES = "d2d-updates"
STAGE_INNOVATIONS = "d2d-innovations"
