"""
Ponto de entrada do módulo sensing_pipeline (cenário de demonstração embutido).
Uso: python -m modules.sensing_pipeline.main [--trials N] [--seed S] [--threads T] [--snr-db DB]

Para experimentos configuráveis use o experiment_runner (arquivo JSON + CSV).
"""

import argparse
import logging

from sparsity_framework.cs_core import RecoveryConfig
from sparsity_framework.metrics import paired_difference
from sparsity_framework.predictors import PredictorSpec
from sparsity_framework.spectrum_model import WidebandModel, noise_std_for_snr

from .config import DEMO_BLOCK_PROBS, DEMO_BLOCK_SIZE, DEMO_M_OVER_N, DEMO_SNR_DB
from .pipeline import ExperimentConfig, SensingStrategy
from .sweep import sweep


def demo_model(persistence: float = 0.8) -> WidebandModel:
    return WidebandModel.from_blocks([(DEMO_BLOCK_SIZE, p, persistence) for p in DEMO_BLOCK_PROBS])


def parse_args() -> argparse.Namespace:
    parser = argparse.ArgumentParser(
        description="Compara ℓ1 convencional, OMP e ℓ1 ponderado por blocos no cenário de 256 bandas.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Exemplos:
  python -m modules.sensing_pipeline.main
  python -m modules.sensing_pipeline.main --trials 500 --threads 0
        """,
    )
    parser.add_argument("--trials", type=int, default=50, help="Trials Monte-Carlo por (estratégia, m/n)")
    parser.add_argument("--seed", type=int, default=0, help="Semente mestre")
    parser.add_argument("--threads", type=int, default=1, help="Threads (0 = automático)")
    parser.add_argument("--snr-db", type=float, default=DEMO_SNR_DB, help="SNR por banda ocupada (dB)")
    parser.add_argument("--history", type=int, default=200, help="Slots de histórico para o preditor AR(1)")
    return parser.parse_args()


def main() -> None:
    args = parse_args()
    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(levelname)s %(message)s")

    print("\n📡 Sensing Pipeline — ℓ1 ponderado por blocos")
    print("─" * 45)

    model = demo_model()
    config = ExperimentConfig(
        model=model,
        m_over_n=DEMO_M_OVER_N,
        strategies=(
            SensingStrategy("conventional_l1"),
            SensingStrategy("omp"),
            SensingStrategy("weighted_l1_expected"),
            SensingStrategy("weighted_l1_predicted", PredictorSpec("ar1")),
        ),
        noise_std=noise_std_for_snr(model, args.snr_db),
        trials=args.trials,
        master_seed=args.seed,
        recovery=RecoveryConfig(),
        history_length=args.history,
    )
    resultado = sweep(config, threads=args.threads)

    print("\n📊 Miss-detection médio (± erro padrão):")
    for _, linha in resultado.aggregate.iterrows():
        print(f"  • {linha['strategy']:<30} m/n={linha['m_over_n']:.2f}  {linha['mean_miss']:.4f} ± {linha['se_miss']:.4f}")

    diferenca = paired_difference(resultado.detail, "weighted_l1_expected", "conventional_l1")
    print("\n⚖️  Diferença pareada (ponderado − convencional):")
    for _, linha in diferenca.iterrows():
        print(f"  • m/n={linha['m_over_n']:.2f}: {linha['mean_diff']:+.4f}  IC95% [{linha['ci_low']:+.4f}, {linha['ci_high']:+.4f}]")

    print("\n✅ Demonstração concluída!")


if __name__ == "__main__":
    main()
