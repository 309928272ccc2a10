"""
Statistiques des expériences : intervalles de Wilson, ajustement du
confinement, test de dérive et croissance des amas connexes.
"""

import logging
import math
from dataclasses import dataclass
from typing import Hashable, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
import statsmodels.api as sm
from scipy.stats import kendalltau
from statsmodels.stats.proportion import proportion_confint

from src.noise_channels.bounded import connected_subsets
from src.sim_harness.clusters import ClusterStats

logger = logging.getLogger(__name__)

MIN_SUSTAINABILITY_ROUNDS = 20
MIN_FIT_BINS = 3


def wilson_interval(successes: int, n: int, alpha: float = 0.05) -> Tuple[float, float, float]:
    """
    Taux observé et intervalle de confiance de Wilson.

    Args:
        successes: Nombre d'événements
        n: Nombre d'essais
        alpha: Niveau (0.05 pour un intervalle à 95 %)

    Returns:
        (taux, borne basse, borne haute) ; (0, 0, 1) si n = 0
    """
    if successes < 0 or successes > n:
        raise ValueError(f"Nombre d'événements invalide: {successes} sur {n}")
    if n == 0:
        return 0.0, 0.0, 1.0
    low, high = proportion_confint(successes, n, alpha=alpha, method="wilson")
    return successes / n, float(low), float(high)


def per_round_failure(trial_rate: float, rounds: int) -> float:
    """Taux par tour p tel que 1 − (1 − p)^T égale le taux par essai."""
    if rounds < 1:
        raise ValueError("rounds doit être >= 1")
    if not 0.0 <= trial_rate <= 1.0:
        raise ValueError(f"Taux hors de [0, 1]: {trial_rate}")
    return float(-math.expm1(math.log1p(-trial_rate) / rounds)) if trial_rate < 1.0 else 1.0


@dataclass
class ConfinementFit:
    """
    Ajustement log-linéaire de l'histogramme des tailles d'amas.

    ``upsilon`` vaut None quand les données sont insuffisantes.
    """

    upsilon: Optional[float]
    ci: Optional[Tuple[float, float]]
    bins: int
    status: str

    @property
    def confined(self) -> Optional[bool]:
        return None if self.upsilon is None else self.upsilon < 1.0


def fit_confinement(stats: ClusterStats, eta: Optional[float] = None, alpha: float = 0.05) -> ConfinementFit:
    """
    Moindres carrés pondérés de log(nombre) contre la taille, tailles ≥ 2.

    Le poids d'une classe est son effectif (variance du log d'un comptage de
    Poisson ≈ 1/n). υ = exp(pente). Il faut au moins trois classes pour
    qu'il reste un degré de liberté résiduel et donc un intervalle de confiance.

    Args:
        stats: Statistiques d'amas (l'ajustement y est reporté)
        eta: Taux de mesure du point ; η = 0 marque l'ajustement comme référence
        alpha: Niveau de l'intervalle de confiance

    Returns:
        ConfinementFit, de statut "confined", "unconfined", "baseline" ou "insufficient"
    """
    bins = sorted((s, c) for s, c in stats.histogram.items() if s >= 2 and c > 0)
    if len(bins) < MIN_FIT_BINS:
        logger.warning(f"Ajustement impossible: {len(bins)} classe(s) de taille >= 2, {MIN_FIT_BINS} requises")
        fit = ConfinementFit(None, None, len(bins), "insufficient")
    else:
        sizes = np.array([s for s, _ in bins], dtype=float)
        counts = np.array([c for _, c in bins], dtype=float)
        model = sm.WLS(np.log(counts), sm.add_constant(sizes), weights=counts).fit()
        slope = float(model.params[1])
        low, high = model.conf_int(alpha=alpha)[1]
        ci = (float(np.exp(low)), float(np.exp(high)))
        upsilon = float(np.exp(slope))
        if eta == 0:
            status = "baseline"
        else:
            status = "confined" if upsilon < 1.0 else "unconfined"
        fit = ConfinementFit(upsilon, ci, len(bins), status)
    stats.upsilon, stats.upsilon_ci, stats.confined = fit.upsilon, fit.ci, fit.confined
    return fit


@dataclass
class SustainabilityReport:
    """Test de Mann-Kendall sur une série par tour."""

    rounds: int
    tau: float
    p_value: float
    drift: bool
    direction: str
    mean: float


def sustainability_report(series: Sequence[float], alpha: float = 0.05) -> SustainabilityReport:
    """
    Tendance monotone de la série (poids résiduel moyen par tour).

    Une dérive est signalée quand la p-valeur du tau de Kendall contre
    l'indice de tour est inférieure à ``alpha``.

    Raises:
        ValueError: moins de 20 tours
    """
    values = np.asarray(series, dtype=float)
    if values.size < MIN_SUSTAINABILITY_ROUNDS:
        raise ValueError(f"Au moins {MIN_SUSTAINABILITY_ROUNDS} tours sont nécessaires (reçu {values.size})")
    if np.ptp(values) == 0:
        tau, p_value = 0.0, 1.0
    else:
        tau, p_value = kendalltau(np.arange(values.size), values)
        tau, p_value = float(tau), float(p_value)
    drift = p_value < alpha
    direction = "stable"
    if drift:
        direction = "hausse" if tau > 0 else "baisse"
        logger.warning(f"Dérive détectée (tau={tau:.3f}, p={p_value:.2g})")
    return SustainabilityReport(int(values.size), tau, p_value, drift, direction, float(values.mean()))


def connectivity_growth(graph: nx.Graph, max_size: int = 4, root: Optional[Hashable] = None) -> float:
    """
    Constante de croissance empirique : max_s C_s^(1/s), où C_s compte les
    ensembles connexes de taille s contenant la racine.

    Args:
        graph: Graphe de localité des éléments de syndrome
        max_size: Taille maximale énumérée
        root: Sommet de départ (par défaut un sommet de degré maximal)

    Returns:
        Estimation de la constante
    """
    if graph.number_of_nodes() == 0:
        return 0.0
    if root is None:
        ordered = sorted(graph.nodes, key=repr)
        root = max(ordered, key=graph.degree)
    counts = {}
    for subset in connected_subsets(graph, max_size, roots=[root]):
        counts[len(subset)] = counts.get(len(subset), 0) + 1
    return max(c ** (1.0 / s) for s, c in counts.items())
