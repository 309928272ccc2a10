"""
3-colex stocké sous sa forme duale simpliciale.

Un colex est décrit par :

- des sommets 4-colorés, internes (un par 3-cellule) ou externes (un par région) ;
- des tétraèdres, un par sommet du colex, c'est-à-dire un par qubit.

Correspondance colex / dual :

=====================  ===============================================
colex                  dual
=====================  ===============================================
3-cellule              sommet interne
région                 sommet externe
plaquette              arête avec au moins une extrémité interne
bordure                arête entre deux sommets externes
coin                   tétraèdre à trois sommets externes
arête du colex         triangle avec au moins un sommet interne
=====================  ===============================================

L'étiquette d'une plaquette est le complémentaire des couleurs de ses
extrémités.
"""

import itertools
import logging
from functools import cached_property
from typing import Dict, List, Optional, Tuple

import numpy as np
import scipy.sparse as sp

logger = logging.getLogger(__name__)

COLORS = (0, 1, 2, 3)
COLOR_NAMES = ("r", "g", "b", "y")


def color_name(color: int) -> str:
    return COLOR_NAMES[color]


def label_of(color_a: int, color_b: int) -> Tuple[int, int]:
    """Étiquette (paire de couleurs) d'une arête reliant deux sommets de couleurs données."""
    rest = tuple(c for c in COLORS if c not in (color_a, color_b))
    if len(rest) != 2:
        raise ValueError(f"Extrémités de même couleur: {color_a}")
    return rest


def label_mask(label: Tuple[int, ...]) -> int:
    """Masque 4 bits d'un ensemble de couleurs."""
    mask = 0
    for c in label:
        mask |= 1 << c
    return mask


def label_name(label) -> str:
    return "".join(COLOR_NAMES[c] for c in label)


class Colex:
    """
    3-colex (forme duale).

    Args:
        vertex_colors: Couleur (0..3) de chaque sommet dual
        is_external: Sommets externes (régions)
        tetrahedra: Tableau (n, 4) des sommets de chaque qubit
        name: Nom du complexe
        coordinates: Coordonnées combinatoires optionnelles des sommets
    """

    def __init__(
        self,
        vertex_colors,
        is_external,
        tetrahedra,
        name: str = "",
        coordinates: Optional[np.ndarray] = None,
    ):
        self.vertex_colors = np.asarray(vertex_colors, dtype=np.int64)
        self.is_external = np.asarray(is_external, dtype=bool)
        tets = np.sort(np.asarray(tetrahedra, dtype=np.int64).reshape(-1, 4), axis=1)
        order = np.lexsort(tets.T[::-1])
        self.tetrahedra = tets[order]
        self.name = name
        self.coordinates = coordinates
        if self.vertex_colors.shape != self.is_external.shape:
            raise ValueError("Couleurs et drapeaux externes de tailles différentes")
        if self.tetrahedra.size and self.tetrahedra.max() >= self.n_vertices:
            raise ValueError("Un tétraèdre référence un sommet inexistant")

    def __repr__(self) -> str:
        return (
            f"Colex(name='{self.name}', qubits={self.n_qubits}, internes={len(self.internal_vertices)}, "
            f"régions={len(self.external_vertices)})"
        )

    @property
    def n_qubits(self) -> int:
        return int(self.tetrahedra.shape[0])

    @property
    def n_vertices(self) -> int:
        return int(self.vertex_colors.shape[0])

    @cached_property
    def internal_vertices(self) -> np.ndarray:
        return np.flatnonzero(~self.is_external)

    @cached_property
    def external_vertices(self) -> np.ndarray:
        return np.flatnonzero(self.is_external)

    @cached_property
    def incidence(self) -> sp.csr_matrix:
        """Matrice sommets × qubits (1 si le sommet appartient au tétraèdre)."""
        rows = self.tetrahedra.ravel()
        cols = np.repeat(np.arange(self.n_qubits), 4)
        data = np.ones(rows.size, dtype=np.int64)
        return sp.csr_matrix((data, (rows, cols)), shape=(self.n_vertices, self.n_qubits))

    def vertex_qubits(self, v: int) -> np.ndarray:
        """Qubits du tétraèdre-étoile de v (support de la cellule ou de la région)."""
        row = self.incidence.getrow(v)
        return np.sort(row.indices)

    @cached_property
    def edge_qubits(self) -> Dict[Tuple[int, int], List[int]]:
        """Pour chaque arête duale (u < v) : qubits qui la contiennent."""
        result: Dict[Tuple[int, int], List[int]] = {}
        for q, tet in enumerate(self.tetrahedra):
            for u, v in itertools.combinations(tet.tolist(), 2):
                result.setdefault((u, v), []).append(q)
        return dict(sorted(result.items()))

    @cached_property
    def triangle_qubits(self) -> Dict[Tuple[int, int, int], List[int]]:
        """Pour chaque triangle dual : qubits qui le contiennent."""
        result: Dict[Tuple[int, int, int], List[int]] = {}
        for q, tet in enumerate(self.tetrahedra):
            for tri in itertools.combinations(tet.tolist(), 3):
                result.setdefault(tri, []).append(q)
        return dict(sorted(result.items()))

    @cached_property
    def plaquettes(self) -> List[Tuple[int, int]]:
        """Arêtes duales portant une plaquette (au moins une extrémité interne), ordre lexicographique."""
        return [e for e in self.edge_qubits if not (self.is_external[e[0]] and self.is_external[e[1]])]

    @cached_property
    def borders(self) -> List[Tuple[int, int]]:
        """Arêtes entre deux régions."""
        return [e for e in self.edge_qubits if self.is_external[e[0]] and self.is_external[e[1]]]

    def plaquette_label(self, edge: Tuple[int, int]) -> Tuple[int, int]:
        u, v = edge
        return label_of(int(self.vertex_colors[u]), int(self.vertex_colors[v]))

    def qubit_kappa(self, q: int) -> Tuple[int, ...]:
        """κ_v : couleurs des sommets externes du tétraèdre (régions contenant le sommet du colex)."""
        tet = self.tetrahedra[q]
        return tuple(sorted(int(self.vertex_colors[v]) for v in tet if self.is_external[v]))

