"""
Graines reproductibles pour les simulations Monte Carlo.

Chaque essai reçoit un générateur dérivé de ``SeedSequence([graine_de_base, indice])`` :
le résultat d'un essai ne dépend que de son indice, jamais de l'ordre
d'exécution ni du nombre de threads.
"""

from typing import Optional, Union

import numpy as np

SeedLike = Union[None, int, np.random.Generator, np.random.SeedSequence]


def make_rng(seed: SeedLike = None) -> np.random.Generator:
    """
    Construire un générateur numpy à partir d'une graine quelconque.

    Args:
        seed: Entier, SeedSequence, générateur existant ou None

    Returns:
        Générateur ``numpy.random.Generator``
    """
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def trial_seed(base_seed: int, trial_index: int, stream: Optional[int] = None) -> np.random.SeedSequence:
    """
    Dériver la graine d'un essai.

    Args:
        base_seed: Graine de base de l'expérience
        trial_index: Indice de l'essai dans la grille
        stream: Identifiant optionnel du point de grille (famille, taille, taux)

    Returns:
        SeedSequence déterministe
    """
    if base_seed < 0 or trial_index < 0:
        raise ValueError("Les graines et indices d'essai doivent être positifs")
    entropy = [int(base_seed), int(trial_index)]
    if stream is not None:
        entropy.append(int(stream))
    return np.random.SeedSequence(entropy)


def trial_rng(base_seed: int, trial_index: int, stream: Optional[int] = None) -> np.random.Generator:
    """Générateur numpy associé à ``trial_seed``."""
    return np.random.default_rng(trial_seed(base_seed, trial_index, stream))
