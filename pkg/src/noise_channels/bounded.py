"""
Vérification statistique de la propriété « α-bornée » d'une distribution de supports.
"""

import logging
from dataclasses import dataclass, field
from typing import FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

import networkx as nx
import numpy as np
from statsmodels.stats.proportion import proportion_confint

logger = logging.getLogger(__name__)

# Un peu plus de 5σ en bilatéral
FIVE_SIGMA = 5.7e-7


@dataclass
class AlphaBoundReport:
    """Résultat de ``check_alpha_bounded``."""

    alpha: float
    n_samples: int
    subsets_checked: int
    violations: List[Tuple[Tuple[int, ...], float, float]] = field(default_factory=list)
    max_ratio: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.violations


def connected_subsets(adjacency: nx.Graph, max_size: int, roots: Optional[Iterable] = None) -> List[FrozenSet]:
    """
    Tous les sous-ensembles connexes de taille 1 à ``max_size``, ou seulement
    ceux qui contiennent l'un des sommets ``roots``.

    Les ensembles de taille k+1 sont obtenus en étendant ceux de taille k par
    un voisin, puis dédupliqués.
    """
    level: Set[FrozenSet] = {frozenset([v]) for v in (adjacency.nodes if roots is None else roots)}
    result = list(level)
    for _ in range(max_size - 1):
        grown: Set[FrozenSet] = set()
        for subset in level:
            frontier = set().union(*(adjacency[v] for v in subset)) - subset
            for u in frontier:
                grown.add(subset | {u})
        level = grown
        result.extend(level)
    return result


def check_alpha_bounded(
    samples: Sequence,
    alpha: float,
    max_subset_size: int,
    adjacency: nx.Graph,
    significance: float = FIVE_SIGMA,
) -> AlphaBoundReport:
    """
    Estimer p̃(A) = P(A ⊆ support) pour chaque sous-ensemble connexe A et
    signaler ceux dont l'intervalle de Wilson dépasse entièrement α^|A|.

    Args:
        samples: Supports tirés (matrice 0/1 échantillons × sites, ou liste d'ensembles d'indices)
        alpha: Borne α > 0
        max_subset_size: Taille maximale des sous-ensembles testés (≤ 4)
        adjacency: Graphe de localité des sites
        significance: Niveau de l'intervalle de confiance

    Returns:
        AlphaBoundReport
    """
    if len(samples) == 0:
        raise ValueError("Aucun échantillon à analyser")
    if not 1 <= max_subset_size <= 4:
        raise ValueError("max_subset_size doit appartenir à [1, 4]")
    if alpha <= 0:
        raise ValueError("alpha doit être strictement positif")
    matrix = _as_matrix(samples, adjacency.number_of_nodes())
    n_samples = matrix.shape[0]
    report = AlphaBoundReport(alpha=alpha, n_samples=n_samples, subsets_checked=0)
    for subset in connected_subsets(adjacency, max_subset_size):
        cols = sorted(subset)
        count = int(np.count_nonzero(matrix[:, cols].all(axis=1)))
        bound = alpha ** len(cols)
        report.subsets_checked += 1
        estimate = count / n_samples
        report.max_ratio = max(report.max_ratio, estimate / bound)
        if count == 0:
            continue
        low, _ = proportion_confint(count, n_samples, alpha=significance, method="wilson")
        if low > bound:
            report.violations.append((tuple(cols), estimate, bound))
    if report.violations:
        logger.warning(f"{len(report.violations)} sous-ensemble(s) violent la borne α={alpha}")
    return report


def _as_matrix(samples, n_sites: int) -> np.ndarray:
    if isinstance(samples, np.ndarray) and samples.ndim == 2:
        return samples.astype(bool)
    matrix = np.zeros((len(samples), n_sites), dtype=bool)
    for i, support in enumerate(samples):
        matrix[i, list(support)] = True
    return matrix
