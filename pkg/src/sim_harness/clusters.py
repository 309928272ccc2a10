"""
Décomposition en amas connexes et histogrammes de tailles d'amas.
"""

import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Union

import networkx as nx
import numpy as np
import pandas as pd
from scipy import sparse
from scipy.sparse.csgraph import connected_components

logger = logging.getLogger(__name__)

Adjacency = Union[sparse.spmatrix, nx.Graph]

CLUSTER_COLUMNS = ["family", "size", "lambda", "eta", "cluster_size", "count"]


def _as_indices(defects, n: int) -> np.ndarray:
    defects = np.asarray(defects)
    if defects.dtype in (np.bool_, np.uint8) and defects.size == n:
        return np.flatnonzero(defects)
    return np.unique(defects.astype(np.int64))


def cluster_decompose(defects, adjacency: Adjacency) -> List[np.ndarray]:
    """
    Composantes connexes d'un ensemble de défauts.

    Args:
        defects: Vecteur de bits (uint8 ou bool) ou liste d'indices
        adjacency: Matrice creuse élément × élément, ou graphe networkx sur les indices

    Returns:
        Tableaux d'indices, un par amas, triés par plus petit élément
    """
    if isinstance(adjacency, nx.Graph):
        selected = _as_indices(defects, adjacency.number_of_nodes())
        if selected.size == 0:
            return []
        sub = adjacency.subgraph(selected.tolist())
        clusters = [np.array(sorted(c), dtype=np.int64) for c in nx.connected_components(sub)]
        # Un défaut absent du graphe forme un amas à lui seul
        missing = [int(x) for x in selected if x not in adjacency]
        clusters.extend(np.array([x], dtype=np.int64) for x in missing)
    else:
        selected = _as_indices(defects, adjacency.shape[0])
        if selected.size == 0:
            return []
        count, labels = connected_components(sparse.csr_matrix(adjacency)[selected][:, selected], directed=False)
        clusters = [selected[labels == k] for k in range(count)]
    clusters.sort(key=lambda c: int(c[0]))
    return clusters


@dataclass
class ClusterStats:
    """
    Statistiques d'amas accumulées pour un point de grille.

    Attributes:
        histogram: Taille d'amas -> nombre d'amas observés
        largest: Plus grand amas de chaque tour enregistré
        upsilon: Constante de décroissance ajustée (ou None)
        upsilon_ci: Intervalle de confiance de υ
        confined: υ < 1
        growth_constant: Constante de croissance empirique des amas connexes
    """

    histogram: Counter = field(default_factory=Counter)
    largest: List[int] = field(default_factory=list)
    upsilon: Optional[float] = None
    upsilon_ci: Optional[tuple] = None
    confined: Optional[bool] = None
    growth_constant: Optional[float] = None

    def add(self, sizes: Iterable[int]):
        """Ajouter les amas d'un tour."""
        sizes = [int(s) for s in sizes]
        self.histogram.update(sizes)
        self.largest.append(max(sizes, default=0))

    @property
    def total_clusters(self) -> int:
        return int(sum(self.histogram.values()))

    @property
    def total_size(self) -> int:
        return int(sum(s * c for s, c in self.histogram.items()))

    def quantiles(self, levels: Sequence[float] = (0.5, 0.9, 0.99)) -> Dict[str, float]:
        """Quantiles de la taille du plus grand amas par tour."""
        if not self.largest:
            return {}
        values = np.quantile(np.asarray(self.largest, dtype=float), levels)
        return {f"q{int(round(level * 100))}": float(v) for level, v in zip(levels, values)}

    def to_frame(self, family: str, size: int, lam: float, eta: float) -> pd.DataFrame:
        rows = [
            {"family": family, "size": size, "lambda": lam, "eta": eta, "cluster_size": s, "count": c}
            for s, c in sorted(self.histogram.items())
        ]
        return pd.DataFrame(rows, columns=CLUSTER_COLUMNS)

    @classmethod
    def from_histogram(cls, histogram: Dict[int, int]) -> "ClusterStats":
        return cls(histogram=Counter({int(s): int(c) for s, c in histogram.items() if c}))

    def summary(self) -> Dict:
        return {
            "clusters": self.total_clusters,
            "defects": self.total_size,
            "largest_quantiles": self.quantiles(),
            "upsilon": self.upsilon,
            "upsilon_ci": list(self.upsilon_ci) if self.upsilon_ci else None,
            "confined": self.confined,
            "growth_constant": self.growth_constant,
        }


def stats_by_point(frame: pd.DataFrame) -> Dict[tuple, ClusterStats]:
    """
    Regrouper un ``clusters.csv`` relu par point de grille.

    Returns:
        (famille, taille, λ, η) -> ClusterStats
    """
    missing = [c for c in CLUSTER_COLUMNS if c not in frame.columns]
    if missing:
        raise ValueError(f"Colonnes manquantes dans le fichier d'amas: {missing}")
    result = {}
    for key, group in frame.groupby(["family", "size", "lambda", "eta"], sort=True):
        result[key] = ClusterStats.from_histogram(dict(zip(group["cluster_size"], group["count"])))
    return result
