"""
Syndromes de jauge vus comme ensembles d'arêtes duales (flux de couleur).
"""

import logging
from typing import List

import networkx as nx
import numpy as np

from src.colex_lattice.dual import DualLattice
from src.gauge_color_code.charges import charge_of
from src.pauli_core.gf2 import mod2_matmul
from src.pauli_core.pauli import PauliOperator
from src.pauli_core.subsystem_code import StabSyndrome, SubsystemCode, gauge_syndrome_of

logger = logging.getLogger(__name__)

# Indicatrice 0/1 (uint8) sur les arêtes du dual
FluxConfig = np.ndarray


def empty_flux(dual: DualLattice) -> FluxConfig:
    return np.zeros(dual.n_edges, dtype=np.uint8)


def gauge_syndrome_bits(bitflips: np.ndarray, dual: DualLattice) -> FluxConfig:
    """Plaquettes Z qui anticommutent avec un ensemble de qubits inversés."""
    return mod2_matmul(dual.plaquette_matrix, np.asarray(bitflips, dtype=np.uint8))


def stabilizer_syndrome_bits(bitflips: np.ndarray, dual: DualLattice) -> np.ndarray:
    """Syndrome Z (sommets gelés) d'un ensemble de qubits inversés."""
    return mod2_matmul(dual.stabilizer_matrix, np.asarray(bitflips, dtype=np.uint8))


def extract_gauge_syndrome(e: PauliOperator, code: SubsystemCode, dual: DualLattice, basis: str = "X") -> FluxConfig:
    """
    Syndrome de jauge d'une erreur de type ``basis`` : arêtes dont la plaquette
    de l'autre type anticommute avec e.

    La jauge du code est rangée X_p puis Z_p dans l'ordre des arêtes du dual ;
    une erreur Z se lit sur les X_p exactement comme une erreur X sur les Z_p.

    Raises:
        ValueError: code non CSS, jauge mal rangée ou erreur d'un autre type
    """
    if not code.css_flag:
        raise ValueError("L'extraction du flux suppose un code CSS")
    if basis not in ("X", "Z"):
        raise ValueError(f"Type d'erreur inconnu: {basis}")
    if e.n != dual.n_qubits:
        raise ValueError(f"Erreur sur {e.n} qubits pour un réseau de {dual.n_qubits} qubits")
    other = e.z_bits if basis == "X" else e.x_bits
    if other.any():
        raise ValueError(f"Seules les erreurs de type {basis} sont traitées")
    m = dual.n_edges
    bits = gauge_syndrome_of(e, code).bits
    if bits.shape[0] != 2 * m:
        raise ValueError(f"Jauge de {bits.shape[0]} générateurs pour {m} plaquettes")
    return np.array(bits[m:] if basis == "X" else bits[:m], dtype=np.uint8)


def label_parity(flux: FluxConfig, dual: DualLattice, vertex: int, mask: int) -> int:
    """Parité du nombre d'arêtes de ``flux`` incidentes à ``vertex`` et d'étiquette ``mask``."""
    count = 0
    for j in dual.incident_edges[vertex]:
        if flux[j] and dual.edge_masks[j] == mask:
            count += 1
    return count % 2


def is_valid_flux(flux: FluxConfig, dual: DualLattice) -> bool:
    """Pour chaque couleur, le flux de cette couleur est de degré pair en chaque sommet interne."""
    return charge_of(flux, dual).is_zero()


def err_of(flux: FluxConfig, dual: DualLattice) -> StabSyndrome:
    """
    Syndrome d'erreur d'un syndrome de jauge valide.

    Un sommet interne est un point de branchement si les parités de ses
    arêtes incidentes sont impaires pour chaque paire de couleurs ; pour un
    flux valide ces parités sont égales, on lit donc celle des arêtes vers la
    couleur de référence. Une région gelée est un point de terminaison si le
    nombre d'arêtes vers la couleur sans région est impair.

    Returns:
        StabSyndrome indexé par ``dual.stabilizer_vertices``

    Raises:
        ValueError: flux invalide
    """
    flux = np.asarray(flux, dtype=np.uint8)
    if not is_valid_flux(flux, dual):
        raise ValueError("err_of suppose un flux valide (quasi-syndrome)")
    return StabSyndrome(_reference_parities(flux, dual))


def _reference_parities(flux: FluxConfig, dual: DualLattice) -> np.ndarray:
    bits = np.zeros(len(dual.stabilizer_vertices), dtype=np.uint8)
    for i, v in enumerate(dual.stabilizer_vertices.tolist()):
        bits[i] = int(flux[dual.reference_edges[v]].sum()) % 2
    return bits


def flux_clusters(flux: FluxConfig, dual: DualLattice) -> List[np.ndarray]:
    """Amas d'arêtes connexes (deux arêtes se touchent si elles partagent un sommet)."""
    selected = np.flatnonzero(flux)
    if selected.size == 0:
        return []
    g = nx.Graph()
    for j in selected.tolist():
        u, v = dual.edges[j]
        g.add_edge(int(u), int(v), key=j)
    clusters = []
    for nodes in nx.connected_components(g):
        sub = g.subgraph(nodes)
        clusters.append(np.array(sorted(data["key"] for _, _, data in sub.edges(data=True)), dtype=np.int64))
    clusters.sort(key=lambda c: c[0])
    return clusters
