"""
Configurações do módulo experiment_runner.
Carrega variáveis de ambiente do arquivo .env.
"""

import os
from pathlib import Path

from dotenv import load_dotenv

# .env do diretório do módulo e, depois, do diretório de trabalho
load_dotenv(dotenv_path=Path(__file__).parent / ".env")
load_dotenv()

COMMANDS = ("sense-sweep", "phase-transition", "gather-sim", "ar-gather", "adaptive-demo")

OUTPUT_DIR = os.getenv("SPARSE_EDGE_OUTPUT_DIR", "outputs")
DEFAULT_THREADS = int(os.getenv("SPARSE_EDGE_THREADS", "0"))  # 0 = automático
LOG_LEVEL = os.getenv("SPARSE_EDGE_LOG_LEVEL", "INFO").upper()

OUTPUT_FORMATS = ("csv", "parquet", "both")

# Formato da CSV: 9 dígitos significativos, LF, sem índice
CSV_FLOAT_FORMAT = "%.9g"
CSV_LINE_TERMINATOR = "\n"

# Códigos de saída
EXIT_OK = 0
EXIT_DOMAIN_ERROR = 1
EXIT_USAGE_ERROR = 2
EXIT_IO_ERROR = 3
