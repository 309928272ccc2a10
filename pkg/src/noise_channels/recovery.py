"""
Récupération bruitée : syndromes faux effectifs, canal effectif et canal de
sortie d'une correction bruitée.
"""

import logging
from typing import Callable, Dict

import numpy as np

from src.noise_channels.bounded import check_alpha_bounded
from src.noise_channels.channels import PauliChannel, RecoveryModel
from src.pauli_core.subsystem_code import CorrectionTable, StabSyndrome, SubsystemCode, syndrome_of
from src.utils.seeding import SeedLike, make_rng

logger = logging.getLogger(__name__)


def effective_recovery_channel(
    model: RecoveryModel,
    n_checks: int,
    repair: Callable[[np.ndarray], np.ndarray],
    samples: int,
    seed: SeedLike = None,
) -> np.ndarray:
    """
    Échantillonner les syndromes faux effectifs ω_eff = w + repair(w).

    Args:
        model: Modèle de récupération (taux η)
        n_checks: Nombre de générateurs mesurés
        repair: Réparation appliquée aux erreurs de mesure w seules
        samples: Nombre de tirages
        seed: Graine ou générateur

    Returns:
        Matrice 0/1 (tirages × générateurs)
    """
    rng = make_rng(seed)
    out = np.zeros((samples, n_checks), dtype=np.uint8)
    for i in range(samples):
        w = (rng.random(n_checks) < model.eta).astype(np.uint8)
        if w.any():
            out[i] = w ^ np.asarray(repair(w), dtype=np.uint8)
    return out


def empirical_distribution(samples: np.ndarray, n_stabs: int) -> Dict[StabSyndrome, float]:
    """Distribution empirique q(ω) à partir de tirages."""
    counts: Dict[StabSyndrome, int] = {}
    for row in samples:
        sigma = StabSyndrome(row[:n_stabs])
        counts[sigma] = counts.get(sigma, 0) + 1
    total = samples.shape[0]
    return {sigma: c / total for sigma, c in counts.items()}


def effective_channel(q_r: Dict[StabSyndrome, float], code: SubsystemCode, table: CorrectionTable) -> PauliChannel:
    """Canal effectif {q(ω), F(ω)}."""
    return PauliChannel.explicit(code.n, [(q, table.correction(omega)) for omega, q in q_r.items()])


def recovery_output_channel(
    q_r: Dict[StabSyndrome, float], error_channel: PauliChannel, code: SubsystemCode, table: CorrectionTable
) -> PauliChannel:
    """
    Canal F résultant d'une correction bruitée appliquée après le canal d'erreur.

    Chaque couple (ω, E) de probabilité q(ω)p(E) donne F(σ(E)+ω)·E. On a alors
    fail(F) = fail(eff∘E) et reduce(F) = eff.
    """
    entries = []
    for p, e in error_channel.expand().terms():
        sigma = syndrome_of(e, code)
        for omega, q in q_r.items():
            entries.append((p * q, table.correction(sigma + omega) * e))
    return PauliChannel.explicit(code.n, entries)


def in_noise_class(
    fail_rate: float,
    syndrome_samples: np.ndarray,
    tau: float,
    epsilon: float,
    adjacency,
    max_subset_size: int = 3,
) -> bool:
    """
    Appartenance empirique à la classe N_{τ,ε} : échec ≤ ε et syndromes τ-bornés.

    Args:
        fail_rate: Probabilité d'échec estimée ou exacte
        syndrome_samples: Tirages de syndromes (matrice 0/1)
        tau: Température de confinement
        epsilon: Borne sur le bruit logique
        adjacency: Graphe de localité des générateurs
        max_subset_size: Taille maximale des sous-ensembles testés
    """
    if fail_rate > epsilon:
        return False
    if tau <= 0:
        return not np.asarray(syndrome_samples).any()
    report = check_alpha_bounded(syndrome_samples, tau, max_subset_size, adjacency)
    return report.ok
