"""
sparsity_framework/errors.py

Hierarquia de exceções do framework.

Toda falha de domínio deriva de SparsityError. As de "valor inválido" também
derivam de ValueError, para quem já captura ValueError continuar funcionando.
A biblioteca apenas levanta; quem converte em mensagem/código de saída é a CLI.
"""

from __future__ import annotations


class SparsityError(Exception):
    """Raiz de todos os erros do framework."""


class InvalidDimensionError(SparsityError, ValueError):
    """Dimensões nulas, incompatíveis ou m > n."""


class InvalidBudgetError(SparsityError, ValueError):
    """Orçamento de esparsidade maior que o número de medições."""


class DegenerateSupportError(SparsityError):
    """Mínimos quadrados sem posto completo no suporte escolhido."""

    def __init__(self, support, message: str | None = None):
        self.support = tuple(int(i) for i in support)
        super().__init__(message or f"suporte degenerado: {list(self.support)}")


class InvalidInputError(SparsityError, ValueError):
    """Entradas não finitas ou comprimentos divergentes."""


class InvalidConfigError(SparsityError, ValueError):
    """Parâmetros de configuração fora do domínio válido."""


class InstanceTooLargeError(SparsityError, ValueError):
    """Instância grande demais para enumeração exaustiva."""


class MissingPredictionError(SparsityError):
    """Pesos preditos solicitados sem a predição correspondente."""


class InsufficientHistoryError(SparsityError, ValueError):
    """Série histórica curta demais para o preditor."""


class InvalidUpdateError(SparsityError, ValueError):
    """Atualização endereçada a um nó inexistente."""


class ProtocolOrderError(SparsityError):
    """Passo do protocolo executado fora de ordem (ex.: pull antes da troca)."""


class InvalidTopologyError(SparsityError, ValueError):
    """Operação incompatível com a topologia da rede."""


class InvalidModelError(SparsityError, ValueError):
    """Modelo temporal instável (|alpha| >= 1) ou inconsistente."""


class ConfigParseError(SparsityError):
    """Arquivo de configuração ilegível (JSON malformado)."""

    def __init__(self, path, line: int, column: int, message: str):
        self.path = str(path)
        self.line = line
        self.column = column
        super().__init__(f"{self.path}:{line}:{column}: {message}")


class ConfigSemanticError(SparsityError, ValueError):
    """Configuração bem formada mas que viola o schema."""

    def __init__(self, key_path: str, message: str):
        self.key_path = key_path
        super().__init__(f"{key_path}: {message}")
