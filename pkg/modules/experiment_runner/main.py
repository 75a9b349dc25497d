"""
Ponto de entrada do módulo experiment_runner.
Uso: python -m modules.experiment_runner.main <comando> --config ARQ.json --out SAIDA.csv
     [--seed U64] [--threads N] [--format csv|parquet|both] [--log-level NIVEL]

Códigos de saída: 0 sucesso, 1 erro de domínio/configuração, 2 uso incorreto, 3 falha de E/S.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional

from sparsity_framework.errors import SparsityError

from modules.d2d_gather.protocol import simulate_ar_gather, simulate_gather
from modules.sensing_pipeline.sweep import sweep

from .config import (
    COMMANDS,
    DEFAULT_THREADS,
    EXIT_DOMAIN_ERROR,
    EXIT_IO_ERROR,
    EXIT_OK,
    LOG_LEVEL,
    OUTPUT_DIR,
    OUTPUT_FORMATS,
)
from .reporter import aggregate_path, export_table
from .schemas import parse_config

log = logging.getLogger(__name__)


def parse_args(argv: Optional[list] = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(
        prog="sparse-edge",
        description="Executa experimentos de sensoriamento compressivo e coleta D2D a partir de um JSON.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Exemplos:
  python -m modules.experiment_runner.main sense-sweep --config sweep.json --out outputs/sweep.csv
  python -m modules.experiment_runner.main gather-sim --config gather.json --out outputs/gather.csv --seed 7
  python -m modules.experiment_runner.main phase-transition --config pt.json --out outputs/pt.csv --threads 0
        """,
    )
    parser.add_argument("command", choices=COMMANDS, help="Experimento a executar")
    parser.add_argument("--config", required=True, type=Path, help="Arquivo de configuração JSON")
    parser.add_argument("--out", type=Path, default=None, help=f"CSV de saída (padrão: {OUTPUT_DIR}/<comando>.csv)")
    parser.add_argument("--seed", type=int, default=None, help="Sobrescreve master_seed do arquivo")
    parser.add_argument("--threads", type=int, default=DEFAULT_THREADS, help="Threads (0 = automático)")
    parser.add_argument("--format", choices=OUTPUT_FORMATS, default="csv", help="Formato de saída (padrão: csv)")
    parser.add_argument("--log-level", default=LOG_LEVEL, help="Nível de log (DEBUG, INFO, WARNING...)")
    args = parser.parse_args(argv)
    if args.seed is not None and not 0 <= args.seed < 2**64:
        parser.error("--seed deve estar em [0, 2^64)")
    if args.threads < 0:
        parser.error("--threads deve ser >= 0")
    if args.out is None:
        args.out = Path(OUTPUT_DIR) / f"{args.command}.csv"
    return args


def run_command(command: str, config, threads: int) -> dict:
    """Executa o experimento e devolve {"detail" | "aggregate": tabela}."""
    if command == "sense-sweep":
        resultado = sweep(config, threads=threads)
        return {"detail": resultado.detail, "aggregate": resultado.aggregate}
    if command == "phase-transition":
        return {"detail": config.run().table}
    if command == "gather-sim":
        return {"detail": simulate_gather(config)}
    if command == "ar-gather":
        return {"detail": simulate_ar_gather(config)}
    return {"detail": config.run()}


def write_outputs(tabelas: dict, out: Path, fmt: str) -> list:
    gerados = []
    for nome, df in tabelas.items():
        destino = out if nome == "detail" else aggregate_path(out)
        gerados.extend(export_table(df, destino, fmt))
    return gerados


def main(argv: Optional[list] = None) -> int:
    args = parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, str(args.log_level).upper(), logging.INFO),
        format="%(asctime)s %(levelname)s %(message)s",
    )

    print(f"\n🧪 Sparse Edge — {args.command}")
    print("─" * 45)

    try:
        config = parse_config(args.config, args.command)
        if args.seed is not None:
            config = config.with_seed(args.seed)
        tabelas = run_command(args.command, config, args.threads)
        gerados = write_outputs(tabelas, args.out, args.format)
    except SparsityError as e:
        print(f"erro: {e}", file=sys.stderr)
        return EXIT_DOMAIN_ERROR
    except OSError as e:
        print(f"erro de E/S: {getattr(e, 'filename', None) or args.out}: {e.strerror or e}", file=sys.stderr)
        return EXIT_IO_ERROR

    for caminho in gerados:
        print(f"💾 {caminho}")
    print("\n✅ Experimento concluído!")
    return EXIT_OK


def run() -> None:
    """Entry point do script sparse-edge."""
    sys.exit(main())


if __name__ == "__main__":
    run()
