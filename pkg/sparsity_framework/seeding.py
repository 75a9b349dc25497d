"""
sparsity_framework/seeding.py

Divisão determinística de sementes para experimentos Monte-Carlo.

Regra documentada (reprodutível entre processos e máquinas, ao contrário de hash()):
    seed = int.from_bytes(blake2b(f"{master}:{trial}:{tag}", digest_size=8), "little")
"""

import hashlib

import numpy as np

SEED_MASK = (1 << 64) - 1


def derive_seed(master_seed: int, trial_index: int, stage_tag: str) -> int:
    """Deriva a semente de 64 bits de um estágio de um trial."""
    chave = f"{int(master_seed) & SEED_MASK}:{int(trial_index)}:{stage_tag}"
    digest = hashlib.blake2b(chave.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "little")


def rng_for(master_seed: int, trial_index: int, stage_tag: str) -> np.random.Generator:
    """Atalho: gerador numpy já semeado para (master, trial, estágio)."""
    return np.random.default_rng(derive_seed(master_seed, trial_index, stage_tag))
