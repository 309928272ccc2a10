"""
Réseau dual d'un colex : sommets colorés internes et externes, arêtes
étiquetées (une par plaquette) et matrices d'incidence utilisées par le
décodage.
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List, Tuple

import networkx as nx
import numpy as np
import scipy.sparse as sp

from src.colex_lattice.complex import COLORS, Colex, label_mask, label_of
from src.colex_lattice.validation import classify_regions, validate

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class DualLattice:
    """
    Attributes:
        vertex_colors: Couleur de chaque sommet
        is_external: Sommets externes (régions)
        frozen: Sommets gelés (tous les internes, et les régions gelées)
        edges: Tableau (m, 2) des arêtes portant une plaquette, ordre lexicographique
        edge_qubits: Pour chaque arête, qubits de la plaquette
        tetrahedra: Tétraèdre de chaque qubit
        name: Nom du colex d'origine
    """

    vertex_colors: np.ndarray
    is_external: np.ndarray
    frozen: np.ndarray
    edges: np.ndarray
    edge_qubits: Tuple[Tuple[int, ...], ...]
    tetrahedra: np.ndarray
    name: str = ""

    @property
    def n_qubits(self) -> int:
        return int(self.tetrahedra.shape[0])

    @property
    def n_vertices(self) -> int:
        return int(self.vertex_colors.shape[0])

    @property
    def n_edges(self) -> int:
        return int(self.edges.shape[0])

    @cached_property
    def edge_labels(self) -> List[Tuple[int, int]]:
        return [label_of(int(self.vertex_colors[u]), int(self.vertex_colors[v])) for u, v in self.edges]

    @cached_property
    def edge_masks(self) -> np.ndarray:
        """Étiquette de chaque arête sous forme de masque 4 bits."""
        return np.array([label_mask(lab) for lab in self.edge_labels], dtype=np.int64)

    @cached_property
    def edge_index(self) -> Dict[Tuple[int, int], int]:
        return {(int(u), int(v)): j for j, (u, v) in enumerate(self.edges)}

    @cached_property
    def plaquette_matrix(self) -> sp.csr_matrix:
        """Matrice arêtes × qubits des supports de plaquette."""
        rows, cols = [], []
        for j, qubits in enumerate(self.edge_qubits):
            rows.extend([j] * len(qubits))
            cols.extend(qubits)
        data = np.ones(len(rows), dtype=np.int64)
        return sp.csr_matrix((data, (rows, cols)), shape=(self.n_edges, self.n_qubits))

    @cached_property
    def stabilizer_vertices(self) -> np.ndarray:
        """Sommets portant un stabilisateur (gelés), ordre croissant."""
        return np.flatnonzero(self.frozen)

    @cached_property
    def stabilizer_matrix(self) -> sp.csr_matrix:
        """Matrice sommets gelés × qubits (support des cellules et régions gelées)."""
        rows = self.tetrahedra.ravel()
        cols = np.repeat(np.arange(self.n_qubits), 4)
        data = np.ones(rows.size, dtype=np.int64)
        full = sp.csr_matrix((data, (rows, cols)), shape=(self.n_vertices, self.n_qubits))
        return full[self.stabilizer_vertices]

    @cached_property
    def vertex_position(self) -> Dict[int, int]:
        """Sommet gelé → ligne de ``stabilizer_matrix``."""
        return {int(v): i for i, v in enumerate(self.stabilizer_vertices)}

    @cached_property
    def incident_edges(self) -> List[List[int]]:
        result: List[List[int]] = [[] for _ in range(self.n_vertices)]
        for j, (u, v) in enumerate(self.edges):
            result[u].append(j)
            result[v].append(j)
        return result

    def tetrahedra_contain_any(self, vertices) -> np.ndarray:
        """Qubits dont le tétraèdre contient au moins un des sommets donnés."""
        mask = np.zeros(self.n_vertices, dtype=bool)
        mask[list(vertices)] = True
        return mask[self.tetrahedra].any(axis=1)

    def other_end(self, edge: int, vertex: int) -> int:
        u, v = self.edges[edge]
        return int(v) if u == vertex else int(u)

    @cached_property
    def graph(self) -> nx.Graph:
        """Graphe des arêtes-plaquettes (attribut ``key`` = indice d'arête)."""
        g = nx.Graph()
        g.add_nodes_from(range(self.n_vertices))
        for j, (u, v) in enumerate(self.edges):
            g.add_edge(int(u), int(v), key=j, weight=1)
        return g

    @cached_property
    def missing_region_color(self):
        """Couleur ne portant aucune région, ou None."""
        present = {int(c) for c in self.vertex_colors[self.is_external]}
        absent = [c for c in COLORS if c not in present]
        return absent[0] if absent else None

    def reference_color(self, vertex: int) -> int:
        """
        Couleur de référence d'un sommet gelé pour la détection des points de
        branchement et de terminaison : la couleur suivante pour un sommet
        interne, la couleur sans région pour une région gelée.
        """
        if not self.is_external[vertex]:
            return (int(self.vertex_colors[vertex]) + 1) % 4
        if self.missing_region_color is None:
            raise ValueError(f"La région gelée {vertex} n'a pas de couleur de référence")
        return self.missing_region_color

    @cached_property
    def reference_edges(self) -> Dict[int, List[int]]:
        """Pour chaque sommet gelé : arêtes vers les voisins de la couleur de référence."""
        result = {}
        for v in self.stabilizer_vertices.tolist():
            ref = self.reference_color(v)
            result[v] = [j for j in self.incident_edges[v] if self.vertex_colors[self.other_end(j, v)] == ref]
        return result

    @cached_property
    def label_graphs(self) -> Dict[int, nx.Graph]:
        """Pour chaque étiquette (masque), le sous-graphe de ses arêtes."""
        graphs = {}
        for mask in sorted(set(self.edge_masks.tolist())):
            g = nx.Graph()
            for j in np.flatnonzero(self.edge_masks == mask):
                u, v = self.edges[j]
                g.add_edge(int(u), int(v), key=int(j), weight=1)
            graphs[mask] = g
        return graphs

    def check_color_rule(self) -> List[int]:
        """Arêtes violant la règle « une arête rg relie un sommet b et un sommet y »."""
        bad = []
        for j, (u, v) in enumerate(self.edges):
            endpoints = {int(self.vertex_colors[u]), int(self.vertex_colors[v])}
            if len(endpoints) != 2 or endpoints & set(self.edge_labels[j]):
                bad.append(j)
        return bad

    def to_colex(self) -> Colex:
        """Reconstruire le colex (involution de ``dualize``)."""
        return Colex(self.vertex_colors.copy(), self.is_external.copy(), self.tetrahedra.copy(), name=self.name)


def dualize(colex: Colex) -> DualLattice:
    """
    Réseau dual d'un colex validé.

    Raises:
        ValueError: si le colex est invalide
    """
    report = validate(colex)
    if not report.ok:
        raise ValueError(f"Colex invalide: {report.first.message}")
    classification = classify_regions(colex)
    frozen = ~colex.is_external.copy()
    for v in classification.frozen_regions:
        frozen[v] = True
    edges = np.array(colex.plaquettes, dtype=np.int64).reshape(-1, 2)
    edge_qubits = tuple(tuple(colex.edge_qubits[tuple(e)]) for e in colex.plaquettes)
    dual = DualLattice(
        vertex_colors=colex.vertex_colors.copy(),
        is_external=colex.is_external.copy(),
        frozen=frozen,
        edges=edges,
        edge_qubits=edge_qubits,
        tetrahedra=colex.tetrahedra.copy(),
        name=colex.name,
    )
    bad = dual.check_color_rule()
    if bad:
        raise ValueError(f"{len(bad)} arête(s) duale(s) violent la règle de couleur")
    logger.debug(f"Dual de '{colex.name}': {dual.n_vertices} sommets, {dual.n_edges} arêtes")
    return dual
