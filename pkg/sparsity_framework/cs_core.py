"""
sparsity_framework/cs_core.py

Motor determinístico de álgebra linear densa e recuperação esparsa.

Conteúdo:
- Matriz de sensoriamento Φ (gaussiana ou Rademacher) e dicionário Ψ (DFT inversa real)
- Síntese de medições y = ΦΨx + e
- OMP (busca gulosa + reajuste por mínimos quadrados)
- ℓ1 ponderado via ISTA (gradiente + soft-thresholding por coordenada)
- Oráculo ℓ0 exaustivo (apenas para testes, n <= 20)
- Regra de detecção por limiar estrito |x̂ᵢ| > τ

Todas as funções são puras: mesmos argumentos → mesmo resultado.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

import numpy as np
from scipy import linalg

from sparsity_framework.errors import (
    DegenerateSupportError,
    InstanceTooLargeError,
    InvalidBudgetError,
    InvalidConfigError,
    InvalidDimensionError,
    InvalidInputError,
)

log = logging.getLogger(__name__)

# Matrizes e medições são ndarrays numpy (row-major, float64)
DenseMatrix = np.ndarray
MeasurementVector = np.ndarray

ENSEMBLES = ("gaussian", "rademacher")
L0_MAX_BANDS = 20
# Pivô mínimo (relativo) aceito na fatoração de Cholesky das equações normais
CHOLESKY_PIVOT_FLOOR = 1e-10


# ── Tipos de domínio ──────────────────────────────────────────────


@dataclass(frozen=True, eq=False)
class SparseSignal:
    """
    Vetor de ocupação espectral x (ou sua estimativa x̂).

    declared_support, quando presente, garante zeros fora dele.
    iterations registra quantas iterações o solver usou (0 para sinais sintéticos).
    """

    values: np.ndarray
    declared_support: Optional[frozenset] = None
    iterations: int = field(default=0, compare=False)

    def __post_init__(self):
        valores = np.asarray(self.values, dtype=float)
        if valores.ndim != 1:
            raise InvalidDimensionError(f"SparseSignal exige vetor 1-D, recebeu shape {valores.shape}")
        object.__setattr__(self, "values", valores)
        if self.declared_support is not None:
            suporte = frozenset(int(i) for i in self.declared_support)
            if any(not 0 <= i < valores.size for i in suporte):
                raise InvalidInputError(f"suporte declarado fora de [0, {valores.size}): {sorted(suporte)}")
            fora = np.ones(valores.size, dtype=bool)
            fora[list(suporte)] = False
            if np.any(valores[fora] != 0.0):
                raise InvalidInputError("valores não nulos fora do suporte declarado")
            object.__setattr__(self, "declared_support", suporte)

    @property
    def length(self) -> int:
        return int(self.values.size)

    def support(self) -> frozenset:
        """Índices efetivamente não nulos."""
        return frozenset(int(i) for i in np.flatnonzero(self.values))

    @classmethod
    def zeros(cls, n: int) -> "SparseSignal":
        return cls(np.zeros(n), frozenset())


@dataclass(frozen=True, eq=False)
class WeightVector:
    """Pesos positivos por banda (w = 1 em todas → ℓ1 convencional)."""

    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 1 or w.size == 0:
            raise InvalidDimensionError("WeightVector exige vetor 1-D não vazio")
        if not np.all(np.isfinite(w)) or np.any(w <= 0):
            raise InvalidInputError("todos os pesos devem ser positivos e finitos")
        object.__setattr__(self, "weights", w)

    def __len__(self) -> int:
        return int(self.weights.size)

    @classmethod
    def uniform(cls, n: int) -> "WeightVector":
        return cls(np.ones(n))

    def normalized(self) -> "WeightVector":
        """Pesos divididos pela média (mesmo orçamento total de penalidade do ℓ1 uniforme)."""
        return WeightVector(self.weights / self.weights.mean())


@dataclass(frozen=True)
class StepSizePolicy:
    """Política de passo do ISTA: fixo ou 1/‖AᵀA‖₂."""

    kind: str = "inverse-spectral-norm"
    value: Optional[float] = None

    def __post_init__(self):
        if self.kind == "fixed":
            if self.value is None or not math.isfinite(self.value) or self.value <= 0:
                raise InvalidConfigError(f"passo fixo deve ser > 0, recebeu {self.value}")
        elif self.kind != "inverse-spectral-norm":
            raise InvalidConfigError(f"política de passo desconhecida: {self.kind}")

    @classmethod
    def fixed(cls, value: float) -> "StepSizePolicy":
        return cls("fixed", value)

    def resolve(self, A: np.ndarray) -> float:
        if self.kind == "fixed":
            return float(self.value)
        lipschitz = float(np.linalg.norm(A, 2)) ** 2
        return 1.0 / lipschitz if lipschitz > 0 else 1.0


@dataclass(frozen=True)
class RecoveryConfig:
    """
    Controles dos solvers.

    support_threshold=None → regra padrão τ = 3·σ/√m (ver default_support_threshold).
    """

    max_iterations: int = 2000
    residual_tolerance: float = 1e-9
    step_size: StepSizePolicy = field(default_factory=StepSizePolicy)
    regularization: float = 0.05
    support_threshold: Optional[float] = None

    def __post_init__(self):
        if self.max_iterations < 1:
            raise InvalidConfigError("max_iterations deve ser >= 1")
        if self.residual_tolerance < 0:
            raise InvalidConfigError("residual_tolerance deve ser >= 0")
        if self.regularization < 0:
            raise InvalidConfigError("regularization (λ) deve ser >= 0")
        if self.support_threshold is not None and self.support_threshold < 0:
            raise InvalidConfigError("support_threshold (τ) deve ser >= 0")


# ── Construção de operadores ──────────────────────────────────────


def build_sensing_matrix(m: int, n: int, ensemble: str = "gaussian", seed: int = 0) -> DenseMatrix:
    """
    Gera Φ (m×n) a partir de um ensemble aleatório.

    gaussian   → entradas i.i.d. N(0, 1/m)
    rademacher → entradas ±1/√m equiprováveis
    """
    if m < 1 or n < 1 or m > n:
        raise InvalidDimensionError(f"dimensões inválidas para Φ: m={m}, n={n} (exige 1 <= m <= n)")
    rng = np.random.default_rng(seed)
    if ensemble == "gaussian":
        return rng.standard_normal((m, n)) / math.sqrt(m)
    if ensemble == "rademacher":
        sinais = rng.integers(0, 2, size=(m, n)) * 2 - 1
        return sinais.astype(float) / math.sqrt(m)
    raise InvalidConfigError(f"ensemble desconhecido: {ensemble} (disponíveis: {ENSEMBLES})")


def build_dft_dictionary(n: int) -> DenseMatrix:
    """
    Base ortonormal real equivalente à DFT inversa (n×n).

    Colunas: constante normalizada, pares cos/sen √(2/n)·cos(2πfi/n), √(2/n)·sin(2πfi/n)
    para f = 1..⌈n/2⌉-1 e, se n for par, o vetor alternado normalizado.
    """
    if n < 1:
        raise InvalidDimensionError("dicionário exige n >= 1")
    i = np.arange(n)
    colunas = [np.full(n, 1.0 / math.sqrt(n))]
    for f in range(1, (n + 1) // 2):
        angulo = 2.0 * math.pi * f * i / n
        colunas.append(math.sqrt(2.0 / n) * np.cos(angulo))
        colunas.append(math.sqrt(2.0 / n) * np.sin(angulo))
    if n % 2 == 0:
        colunas.append(np.where(i % 2 == 0, 1.0, -1.0) / math.sqrt(n))
    return np.column_stack(colunas)


def sensing_operator(phi: DenseMatrix, psi: Optional[DenseMatrix] = None) -> DenseMatrix:
    """A = ΦΨ (ou Φ quando Ψ é a identidade)."""
    if psi is None:
        return np.asarray(phi, dtype=float)
    if phi.shape[1] != psi.shape[0] or psi.shape[0] != psi.shape[1]:
        raise InvalidDimensionError(f"Φ {phi.shape} incompatível com Ψ {psi.shape}")
    return phi @ psi


def measure(
    phi: DenseMatrix,
    psi: Optional[DenseMatrix],
    x: SparseSignal,
    noise_std: float = 0.0,
    seed: int = 0,
) -> MeasurementVector:
    """y = ΦΨx + e, com e ~ N(0, noise_std²) i.i.d. (noise_std = 0 → produto exato)."""
    if noise_std < 0:
        raise InvalidInputError("noise_std deve ser >= 0")
    A = sensing_operator(phi, psi)
    if A.shape[1] != x.length:
        raise InvalidDimensionError(f"operador {A.shape} incompatível com x de comprimento {x.length}")
    y = A @ x.values
    if noise_std > 0:
        rng = np.random.default_rng(seed)
        y = y + rng.normal(0.0, noise_std, size=y.shape)
    return y


def default_support_threshold(noise_std: float, m: int) -> float:
    """τ padrão = 3·σ/√m (regra de energia simples)."""
    return 3.0 * noise_std / math.sqrt(m)


# ── Mínimos quadrados ─────────────────────────────────────────────


def least_squares(A_s: np.ndarray, y: np.ndarray, support: Sequence[int] = ()) -> np.ndarray:
    """
    Resolve min ‖y − A_s c‖₂ pelas equações normais com Cholesky.

    Se algum pivô ficar abaixo de CHOLESKY_PIVOT_FLOOR (relativo), cai para QR com
    pivotamento de colunas; posto deficiente → DegenerateSupportError.
    """
    if A_s.shape[1] == 0:
        return np.zeros(0)
    gram = A_s.T @ A_s
    rhs = A_s.T @ y
    escala = float(np.max(np.diag(gram))) or 1.0
    try:
        fator = linalg.cho_factor(gram, lower=False, check_finite=False)
        pivos = np.diag(fator[0]) ** 2
        if np.min(pivos) >= CHOLESKY_PIVOT_FLOOR * escala:
            return linalg.cho_solve(fator, rhs, check_finite=False)
    except linalg.LinAlgError:
        pass

    log.warning(f"[cs_core] Cholesky mal condicionado no suporte {list(support)}; usando QR pivotado")
    Q, R, perm = linalg.qr(A_s, mode="economic", pivoting=True)
    diag = np.abs(np.diag(R))
    if diag.size == 0 or diag[-1] <= math.sqrt(CHOLESKY_PIVOT_FLOOR) * diag[0]:
        raise DegenerateSupportError(support)
    z = linalg.solve_triangular(R, Q.T @ y, check_finite=False)
    coef = np.empty_like(z)
    coef[perm] = z
    return coef


def _check_system(A: np.ndarray, y: np.ndarray) -> None:
    if A.ndim != 2 or y.ndim != 1 or A.shape[0] != y.size:
        raise InvalidDimensionError(f"A {A.shape} incompatível com y de comprimento {y.size}")
    if not (np.all(np.isfinite(A)) and np.all(np.isfinite(y))):
        raise InvalidInputError("entradas não finitas em A ou y")


# ── Solvers ───────────────────────────────────────────────────────


def omp(
    A: DenseMatrix,
    y: MeasurementVector,
    sparsity_budget: int,
    residual_tolerance: float = 1e-9,
) -> SparseSignal:
    """
    Orthogonal Matching Pursuit.

    A cada passo escolhe a coluna de maior correlação normalizada |aⱼᵀr|/‖aⱼ‖ com o
    resíduo e reajusta por mínimos quadrados no suporte acumulado. Para quando o
    suporte atinge o orçamento ou ‖r‖₂ <= residual_tolerance.
    """
    A = np.asarray(A, dtype=float)
    y = np.asarray(y, dtype=float)
    _check_system(A, y)
    m, n = A.shape
    if sparsity_budget < 0 or sparsity_budget > m:
        raise InvalidBudgetError(f"orçamento de esparsidade {sparsity_budget} fora de [0, {m}]")

    normas = np.linalg.norm(A, axis=0)
    ativas = normas > 0
    suporte: list[int] = []
    coef = np.zeros(0)
    residuo = y.copy()

    while len(suporte) < sparsity_budget and np.linalg.norm(residuo) > residual_tolerance:
        correlacao = np.full(n, -1.0)
        correlacao[ativas] = np.abs(A[:, ativas].T @ residuo) / normas[ativas]
        correlacao[suporte] = -1.0
        j = int(np.argmax(correlacao))
        if correlacao[j] <= 0.0:
            break
        suporte.append(j)
        A_s = A[:, suporte]
        coef = least_squares(A_s, y, suporte)
        residuo = y - A_s @ coef

    valores = np.zeros(n)
    valores[suporte] = coef
    # coeficientes exatamente nulos não entram no suporte declarado
    declarado = frozenset(i for i in suporte if valores[i] != 0.0)
    return SparseSignal(valores, declarado, iterations=len(suporte))


def weighted_objective(A: np.ndarray, y: np.ndarray, x: np.ndarray, penalty: np.ndarray) -> float:
    """½‖y − Ax‖² + Σ penaltyᵢ|xᵢ|, com penaltyᵢ = λ·wᵢ."""
    r = y - A @ x
    return 0.5 * float(r @ r) + float(np.sum(penalty * np.abs(x)))


def soft_threshold(z: np.ndarray, thresh: np.ndarray) -> np.ndarray:
    """Operador proximal do ℓ1 ponderado (limiar por coordenada)."""
    return np.sign(z) * np.maximum(np.abs(z) - thresh, 0.0)


def ista_iterates(
    A: DenseMatrix,
    y: MeasurementVector,
    w: WeightVector,
    config: RecoveryConfig,
) -> Iterator[tuple[int, np.ndarray, float]]:
    """
    Gera (iteração, x, objetivo) do ISTA ponderado, começando em x = 0.

    Passo de gradiente seguido de soft-thresholding com limiar step·(λ·wᵢ).
    Para quando a queda do objetivo < residual_tolerance, quando x não muda
    ou ao atingir max_iterations.
    """
    A = np.asarray(A, dtype=float)
    y = np.asarray(y, dtype=float)
    _check_system(A, y)
    if len(w) != A.shape[1]:
        raise InvalidDimensionError(f"{len(w)} pesos para {A.shape[1]} colunas")
    passo = config.step_size.resolve(A)
    penalidade = config.regularization * w.weights
    limiar = passo * penalidade

    x = np.zeros(A.shape[1])
    objetivo = weighted_objective(A, y, x, penalidade)
    yield 0, x, objetivo

    for it in range(1, config.max_iterations + 1):
        gradiente = A.T @ (A @ x - y)
        x_novo = soft_threshold(x - passo * gradiente, limiar)
        objetivo_novo = weighted_objective(A, y, x_novo, penalidade)
        parado = np.array_equal(x_novo, x)
        queda = objetivo - objetivo_novo
        x, objetivo = x_novo, objetivo_novo
        yield it, x, objetivo
        if parado or queda < config.residual_tolerance:
            break


def ista_weighted_l1(
    A: DenseMatrix,
    y: MeasurementVector,
    w: WeightVector,
    config: RecoveryConfig,
) -> SparseSignal:
    """Minimiza ½‖y − Ax‖² + λ·Σ wᵢ|xᵢ| por ISTA e devolve a última iterada."""
    ultimo = (0, np.zeros(np.asarray(A).shape[1]), 0.0)
    for ultimo in ista_iterates(A, y, w, config):
        pass
    iteracoes, x, _ = ultimo
    return SparseSignal(x, frozenset(int(i) for i in np.flatnonzero(x)), iterations=iteracoes)


def l0_oracle(A: DenseMatrix, y: MeasurementVector, k: int) -> SparseSignal:
    """
    Minimização ℓ0 exata por enumeração de todos os suportes de tamanho <= k.

    Empates (dentro de tolerância numérica) ficam com o suporte lexicograficamente
    menor; o suporte vazio vence qualquer empate.
    """
    A = np.asarray(A, dtype=float)
    y = np.asarray(y, dtype=float)
    _check_system(A, y)
    m, n = A.shape
    if n > L0_MAX_BANDS:
        raise InstanceTooLargeError(f"n={n} excede o limite de enumeração ({L0_MAX_BANDS})")
    if k < 0 or k > m:
        raise InvalidBudgetError(f"k={k} fora de [0, {m}]")

    empate = 1e-12 * (1.0 + float(np.linalg.norm(y)))
    melhor_suporte: tuple = ()
    melhor_coef = np.zeros(0)
    melhor_residuo = float(np.linalg.norm(y))

    for tamanho in range(1, k + 1):
        for suporte in itertools.combinations(range(n), tamanho):
            A_s = A[:, suporte]
            try:
                coef = least_squares(A_s, y, suporte)
            except DegenerateSupportError:
                continue
            residuo = float(np.linalg.norm(y - A_s @ coef))
            if residuo < melhor_residuo - empate or (
                abs(residuo - melhor_residuo) <= empate and suporte < melhor_suporte
            ):
                melhor_suporte, melhor_coef, melhor_residuo = suporte, coef, residuo

    valores = np.zeros(n)
    valores[list(melhor_suporte)] = melhor_coef
    return SparseSignal(valores, frozenset(i for i in melhor_suporte if valores[i] != 0.0))


def support_detect(x_hat, tau: float) -> np.ndarray:
    """Banda i ocupada sse |x̂ᵢ| > τ (desigualdade estrita)."""
    if tau < 0:
        raise InvalidInputError("τ deve ser >= 0")
    valores = x_hat.values if isinstance(x_hat, SparseSignal) else np.asarray(x_hat, dtype=float)
    return np.abs(valores) > tau
