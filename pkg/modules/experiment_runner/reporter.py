"""
Exportador de tabelas de resultado para CSV (contrato) e Parquet (opcional).
"""

import logging
from pathlib import Path

import pandas as pd

from .config import CSV_FLOAT_FORMAT, CSV_LINE_TERMINATOR

log = logging.getLogger(__name__)


def _ensure_dir(path: Path) -> None:
    """Garante que o diretório de destino existe."""
    path.parent.mkdir(parents=True, exist_ok=True)


def emit_csv(df: pd.DataFrame, path) -> Path:
    """
    Grava a tabela em CSV determinístico.

    UTF-8 sem BOM, vírgula, cabeçalho primeiro, floats com 9 dígitos significativos,
    fim de linha LF e sem índice: entradas iguais → arquivos byte a byte iguais.

    Args:
        df: Tabela com as colunas já na ordem do comando.
        path: Caminho do arquivo.

    Returns:
        Caminho do arquivo gerado.
    """
    destino = Path(path)
    _ensure_dir(destino)
    df.to_csv(
        destino,
        index=False,
        encoding="utf-8",
        float_format=CSV_FLOAT_FORMAT,
        lineterminator=CSV_LINE_TERMINATOR,
    )
    log.info(f"[reporter] CSV exportado → {destino} ({len(df)} linha(s))")
    return destino


def export_parquet(df: pd.DataFrame, path) -> Path:
    """Grava a mesma tabela em Parquet (engine pyarrow), trocando a extensão para .parquet."""
    destino = Path(path).with_suffix(".parquet")
    _ensure_dir(destino)
    df.to_parquet(destino, index=False, engine="pyarrow")
    log.info(f"[reporter] Parquet exportado → {destino}")
    return destino


def export_table(df: pd.DataFrame, path, fmt: str = "csv") -> list[Path]:
    """Exporta conforme --format (csv | parquet | both)."""
    gerados = []
    if fmt in ("csv", "both"):
        gerados.append(emit_csv(df, path))
    if fmt in ("parquet", "both"):
        gerados.append(export_parquet(df, path))
    return gerados


def aggregate_path(path) -> Path:
    """<out-stem>_aggregate.csv ao lado do arquivo de detalhe."""
    destino = Path(path)
    return destino.with_name(f"{destino.stem}_aggregate{destino.suffix or '.csv'}")
