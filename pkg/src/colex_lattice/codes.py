"""
Code de couleur de jauge associé à un colex : opérateurs de plaquette, de
cellule et de région, générateurs et représentants logiques.
"""

import logging
from typing import List, Sequence, Tuple

import numpy as np

from src.colex_lattice.complex import Colex
from src.colex_lattice.validation import classify_regions, validate
from src.pauli_core.gf2 import rank
from src.pauli_core.pauli import PauliOperator, product
from src.pauli_core.subsystem_code import SubsystemCode

logger = logging.getLogger(__name__)


def _operator(n: int, support: Sequence[int], letter: str) -> PauliOperator:
    if letter == "X":
        return PauliOperator.from_support(n, x=support)
    if letter == "Z":
        return PauliOperator.from_support(n, z=support)
    raise ValueError(f"Type d'opérateur inconnu: {letter}")


def cell_operator(colex: Colex, vertex: int, letter: str = "X") -> PauliOperator:
    """Opérateur X_c ou Z_c de la cellule duale au sommet interne ``vertex``."""
    if colex.is_external[vertex]:
        raise ValueError(f"Le sommet {vertex} est une région, pas une cellule")
    return _operator(colex.n_qubits, colex.vertex_qubits(vertex).tolist(), letter)


def region_operator(colex: Colex, vertex: int, letter: str = "X") -> PauliOperator:
    """Opérateur X_R ou Z_R de la région duale au sommet externe ``vertex``."""
    if not colex.is_external[vertex]:
        raise ValueError(f"Le sommet {vertex} est interne, pas une région")
    return _operator(colex.n_qubits, colex.vertex_qubits(vertex).tolist(), letter)


def plaquette_operator(colex: Colex, edge: Tuple[int, int], letter: str = "X") -> PauliOperator:
    u, v = sorted(edge)
    if colex.is_external[u] and colex.is_external[v]:
        raise ValueError(f"L'arête {edge} est une bordure, pas une plaquette")
    return _operator(colex.n_qubits, colex.edge_qubits[(u, v)], letter)


def neighbors_of_color(colex: Colex, vertex: int, color: int) -> List[int]:
    found = set()
    for u, v in colex.edge_qubits:
        if u == vertex and colex.vertex_colors[v] == color:
            found.add(v)
        elif v == vertex and colex.vertex_colors[u] == color:
            found.add(u)
    return sorted(found)


def cell_decomposition(colex: Colex, vertex: int, color: int) -> List[Tuple[int, int]]:
    """
    Plaquettes dont le produit vaut l'opérateur de cellule : les arêtes de
    ``vertex`` vers ses voisins de couleur ``color``.
    """
    if color == colex.vertex_colors[vertex]:
        raise ValueError("La couleur choisie doit différer de celle de la cellule")
    return [tuple(sorted((vertex, w))) for w in neighbors_of_color(colex, vertex, color)]


def redundant_region_relation(colex: Colex, colors: Tuple[int, int]) -> Tuple[PauliOperator, PauliOperator]:
    """
    Relation entre cellules et régions pour une paire de couleurs.

    Tout qubit possède exactement un sommet de chacune des deux couleurs ; le
    produit des cellules de ces couleurs est donc égal au produit des régions
    de ces mêmes couleurs.

    Returns:
        (produit des X_c, produit des X_R)
    """
    n = colex.n_qubits
    selected = set(colors)
    cells = [cell_operator(colex, int(v)) for v in colex.internal_vertices if colex.vertex_colors[v] in selected]
    regions = [region_operator(colex, int(v)) for v in colex.external_vertices if colex.vertex_colors[v] in selected]
    return product(cells, n), product(regions, n)


def stabilizer_layout(colex: Colex, drop_redundant: bool = True) -> List[Tuple[str, int]]:
    """
    Générateurs de stabilisateurs sous forme (type, sommet dual).

    Ordre : X des cellules, X des régions gelées, puis les mêmes en Z. Avec
    ``drop_redundant``, une région gelée n'est gardée que si elle augmente le rang.
    """
    classification = classify_regions(colex)
    n = colex.n_qubits
    cells = colex.internal_vertices.tolist()
    frozen = classification.frozen_regions
    kept_regions = list(frozen)
    if drop_redundant and frozen:
        rows = [np.isin(np.arange(n), colex.vertex_qubits(v)).astype(np.uint8) for v in cells]
        current = rank(np.array(rows)) if rows else 0
        kept_regions = []
        for v in frozen:
            candidate = np.isin(np.arange(n), colex.vertex_qubits(v)).astype(np.uint8)
            new_rank = rank(np.array(rows + [candidate]))
            if new_rank > current:
                rows.append(candidate)
                current = new_rank
                kept_regions.append(v)
        dropped = len(frozen) - len(kept_regions)
        if dropped:
            logger.info(f"{dropped} opérateur(s) de région redondant(s) écarté(s)")
    layout = [("X", v) for v in cells] + [("X", v) for v in kept_regions]
    return layout + [("Z", v) for _, v in layout]


def derive_code(colex: Colex, drop_redundant: bool = True) -> SubsystemCode:
    """
    Construire le code de couleur de jauge d'un colex.

    Args:
        colex: Colex valide
        drop_redundant: Écarter les opérateurs de région redondants

    Returns:
        SubsystemCode CSS : jauge = X_p puis Z_p, stabilisateurs selon
        ``stabilizer_layout``, logiques = X_R, Z_R de la première région libre

    Raises:
        ValueError: si le colex ne passe pas ``validate``
    """
    report = validate(colex)
    if not report.ok:
        raise ValueError(f"Colex invalide: {report.first.message}")
    n = colex.n_qubits
    gauge = [plaquette_operator(colex, e, "X") for e in colex.plaquettes]
    gauge += [plaquette_operator(colex, e, "Z") for e in colex.plaquettes]
    stabs = [_operator(n, colex.vertex_qubits(v).tolist(), letter) for letter, v in stabilizer_layout(colex, drop_redundant)]
    logicals = []
    free = classify_regions(colex).free_regions
    if free:
        logicals = [region_operator(colex, free[0], "X"), region_operator(colex, free[0], "Z")]
    code = SubsystemCode(n, stabs, gauge, logicals, css_flag=True, name=colex.name)
    logger.info(f"Code dérivé de '{colex.name}': {code}")
    return code
