"""
Réseau carré périodique du code de répétition 2D (modèle d'Ising).

Qubits sur les faces, contrôles Z_iZ_j sur les arêtes, nœuds de couplage sur
les sommets. Indexation :

- face (r, c) : r·L + c ;
- sommet (r, c) : r·L + c, coin supérieur gauche de la face (r, c) ;
- arête horizontale h(r, c), de (r, c) à (r, c+1) : r·L + c, entre les faces
  (r−1, c) et (r, c) ;
- arête verticale v(r, c), de (r, c) à (r+1, c) : L² + r·L + c, entre les faces
  (r, c−1) et (r, c).
"""

import logging
from typing import List, Tuple

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from src.pauli_core.pauli import PauliOperator
from src.pauli_core.subsystem_code import SubsystemCode

logger = logging.getLogger(__name__)

# Ensembles d'arêtes et de faces : vecteurs numpy 0/1 (uint8)
EdgeSet = np.ndarray
FaceSet = np.ndarray


class TorusLattice:
    """
    Tore L×L : L² faces, 2L² arêtes, L² sommets.
    """

    def __init__(self, L: int):
        if L < 2:
            raise ValueError(f"Taille de tore invalide: L={L} (minimum 2)")
        self.L = int(L)
        self.n_faces = L * L
        self.n_edges = 2 * L * L
        self.n_vertices = L * L
        self.edge_face_pairs = self._edge_faces()
        self.edge_vertex_pairs = self._edge_vertices()
        rows = np.repeat(np.arange(self.n_edges), 2)
        self.boundary_matrix = sp.csr_matrix(
            (np.ones(2 * self.n_edges, dtype=np.int64), (rows, self.edge_face_pairs.ravel())),
            shape=(self.n_edges, self.n_faces),
        )
        self.incidence_matrix = sp.csr_matrix(
            (np.ones(2 * self.n_edges, dtype=np.int64), (self.edge_vertex_pairs.ravel(), rows)),
            shape=(self.n_vertices, self.n_edges),
        )
        # Deux arêtes sont voisines si elles partagent un sommet
        self.edge_adjacency = (self.incidence_matrix.T @ self.incidence_matrix).tocsr()
        # Deux faces sont voisines si elles partagent une arête
        self.face_adjacency = (self.boundary_matrix.T @ self.boundary_matrix).tocsr()

    def __repr__(self) -> str:
        return f"TorusLattice(L={self.L})"

    def _edge_faces(self) -> np.ndarray:
        L = self.L
        r, c = np.divmod(np.arange(L * L), L)
        horizontal = np.stack([((r - 1) % L) * L + c, r * L + c], axis=1)
        vertical = np.stack([r * L + (c - 1) % L, r * L + c], axis=1)
        return np.vstack([horizontal, vertical])

    def _edge_vertices(self) -> np.ndarray:
        L = self.L
        r, c = np.divmod(np.arange(L * L), L)
        horizontal = np.stack([r * L + c, r * L + (c + 1) % L], axis=1)
        vertical = np.stack([r * L + c, ((r + 1) % L) * L + c], axis=1)
        return np.vstack([horizontal, vertical])

    def face_index(self, r: int, c: int) -> int:
        return (r % self.L) * self.L + (c % self.L)

    def horizontal_edge(self, r: int, c: int) -> int:
        return self.face_index(r, c)

    def vertical_edge(self, r: int, c: int) -> int:
        return self.n_faces + self.face_index(r, c)

    def empty_faces(self) -> FaceSet:
        return np.zeros(self.n_faces, dtype=np.uint8)

    def empty_edges(self) -> EdgeSet:
        return np.zeros(self.n_edges, dtype=np.uint8)

    def face_set(self, faces) -> FaceSet:
        f = self.empty_faces()
        f[list(faces)] = 1
        return f

    def edge_set(self, edges) -> EdgeSet:
        e = self.empty_edges()
        for i in edges:
            e[i] ^= 1
        return e

    def boundary(self, f: FaceSet) -> EdgeSet:
        """Arêtes dont exactement une des deux faces voisines appartient à f."""
        return (self.boundary_matrix @ np.asarray(f, dtype=np.int64) % 2).astype(np.uint8)

    def vertex_parity(self, edges: EdgeSet) -> np.ndarray:
        """Parité du degré de chaque sommet dans l'ensemble d'arêtes."""
        return (self.incidence_matrix @ np.asarray(edges, dtype=np.int64) % 2).astype(np.uint8)

    def odd_vertices(self, edges: EdgeSet) -> np.ndarray:
        return np.flatnonzero(self.vertex_parity(edges))

    def is_closed(self, edges: EdgeSet) -> bool:
        return not self.vertex_parity(edges).any()

    def euler_characteristic(self) -> int:
        return self.n_vertices - self.n_edges + self.n_faces

    def edge_clusters(self, edges: EdgeSet) -> List[np.ndarray]:
        """
        Composantes connexes d'un ensemble d'arêtes (arêtes voisines = sommet commun).

        Returns:
            Liste des tableaux d'indices d'arêtes, un par amas, triés par plus petit indice
        """
        selected = np.flatnonzero(edges)
        if selected.size == 0:
            return []
        sub = self.edge_adjacency[selected][:, selected]
        count, labels = connected_components(sub, directed=False)
        return [selected[labels == k] for k in range(count)]

    def to_subsystem_code(self) -> SubsystemCode:
        """Vue code de stabilisateurs : contrôles Z_iZ_j, logiques X sur toutes les faces et Z_0."""
        n = self.n_faces
        checks = [PauliOperator.from_support(n, z=pair.tolist()) for pair in self.edge_face_pairs]
        logicals = [PauliOperator.from_support(n, x=range(n)), PauliOperator.from_support(n, z=[0])]
        return SubsystemCode(n, checks, checks, logicals, css_flag=True, name=f"ising-tore-{self.L}")

    def face_regions_without(self, cut_edges: np.ndarray) -> Tuple[int, np.ndarray]:
        """
        Régions de faces connexes lorsque les arêtes ``cut_edges`` sont retirées.

        Returns:
            (nombre de régions, étiquette de région par face)
        """
        keep = np.ones(self.n_edges, dtype=bool)
        keep[cut_edges] = False
        pairs = self.edge_face_pairs[keep]
        graph = sp.coo_matrix(
            (np.ones(len(pairs), dtype=np.int8), (pairs[:, 0], pairs[:, 1])),
            shape=(self.n_faces, self.n_faces),
        )
        return connected_components(graph, directed=False)
