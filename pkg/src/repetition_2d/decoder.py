"""
Correction « single-shot » du code de répétition 2D : fermeture du
pseudo-syndrome, décodage par composante, lecture logique transverse.
"""

import logging
from typing import NamedTuple, Tuple

import networkx as nx
import numpy as np

from src.matching.tjoin import torus_t_join
from src.repetition_2d.torus import EdgeSet, FaceSet, TorusLattice
from src.utils.exceptions import NonSyndromeEvent
from src.utils.records import RoundRecord
from src.utils.seeding import SeedLike, make_rng

logger = logging.getLogger(__name__)


class ClassVerdict(NamedTuple):
    label: str  # "trivial" ou "logical"
    tie: bool


def boundary(lattice: TorusLattice, f: FaceSet) -> EdgeSet:
    """Bord d'un ensemble de faces (voir ``TorusLattice.boundary``)."""
    return lattice.boundary(f)


def close_pseudo_syndrome(lattice: TorusLattice, p: EdgeSet) -> EdgeSet:
    """
    Réparer un pseudo-syndrome : plus petit w₀ tel que p + w₀ soit fermé.

    Le résultat ne dépend que de l'ensemble des sommets impairs de p, donc
    seulement des erreurs de mesure w lorsque p = s + w avec s fermé.

    Args:
        lattice: Tore
        p: Syndrome mesuré (éventuellement non fermé)

    Returns:
        Ensemble d'arêtes w₀ de cardinalité minimale
    """
    odd = lattice.odd_vertices(p)
    if odd.size % 2:
        # Impossible sur une surface fermée : chaque arête a deux extrémités
        raise RuntimeError(f"Nombre impair de sommets impairs ({odd.size})")
    repair = torus_t_join(lattice.L, odd.tolist())
    return lattice.edge_set(sorted(repair))


def decode(lattice: TorusLattice, l: EdgeSet) -> FaceSet:
    """
    Décoder un syndrome fermé composante par composante.

    Pour chaque composante connexe de l, les faces sont séparées en deux côtés
    de même bord ; on retourne le plus petit (en cas d'égalité, celui qui
    contient la face 0).

    Args:
        lattice: Tore
        l: Syndrome fermé

    Returns:
        Ensemble de faces à retourner

    Raises:
        ValueError: si l n'est pas fermé
        NonSyndromeEvent: si une composante n'est pas un bord (boucle non contractile)
    """
    if not lattice.is_closed(l):
        raise ValueError("Le syndrome à décoder doit être fermé")
    flips = lattice.empty_faces()
    for component in lattice.edge_clusters(l):
        side = _component_side(lattice, component)
        if side is None:
            raise NonSyndromeEvent(
                f"Composante de {component.size} arêtes non contractile", component=component.tolist()
            )
        flips ^= side
    return flips


def _component_side(lattice: TorusLattice, component: np.ndarray):
    """Côté le plus petit d'une composante, ou None si elle n'est pas un bord."""
    count, labels = lattice.face_regions_without(component)
    pairs = lattice.edge_face_pairs[component]
    region_graph = nx.Graph()
    region_graph.add_nodes_from(range(count))
    for a, b in pairs:
        ra, rb = labels[a], labels[b]
        if ra == rb:
            return None
        region_graph.add_edge(int(ra), int(rb))
    if not nx.is_bipartite(region_graph):
        return None
    coloring = nx.bipartite.color(region_graph)
    region_color = np.array([coloring[k] for k in range(count)], dtype=np.uint8)
    side_one = region_color[labels]
    size_one = int(side_one.sum())
    size_zero = lattice.n_faces - size_one
    if size_one < size_zero or (size_one == size_zero and side_one[0] == 1):
        return side_one
    return (1 - side_one).astype(np.uint8)


def logical_class(lattice: TorusLattice, f: FaceSet) -> ClassVerdict:
    """
    Classe logique d'un ensemble de faces par majorité.

    Returns:
        ("logical", tie) si |f| > L²/2 ; une égalité exacte compte comme triviale
    """
    size = int(np.count_nonzero(f))
    half = lattice.n_faces / 2
    if size == half:
        return ClassVerdict("trivial", True)
    return ClassVerdict("logical" if size > half else "trivial", False)


def ideal_logical_flag(lattice: TorusLattice, state: FaceSet) -> bool:
    """L'état, corrigé avec des mesures parfaites, porte-t-il une erreur logique ?"""
    try:
        corrected = state ^ decode(lattice, lattice.boundary(state))
    except NonSyndromeEvent:
        # Bandes parallèles non contractiles : seul le vote majoritaire tranche
        return logical_class(lattice, state).label == "logical"
    return bool(corrected.all())


def logical_readout(lattice: TorusLattice, state: FaceSet, eta: float, seed: SeedLike = None) -> int:
    """
    Lecture transverse : mesurer chaque qubit (erreur de lecture η), puis vote majoritaire.

    Args:
        lattice: Tore
        state: Faces inversées avant la lecture
        eta: Probabilité d'erreur de lecture par qubit
        seed: Graine ou générateur

    Returns:
        Bit logique lu (une égalité donne 0)
    """
    _check_rate("eta", eta)
    rng = make_rng(seed)
    outcomes = np.asarray(state, dtype=np.uint8) ^ (rng.random(lattice.n_faces) < eta).astype(np.uint8)
    return 1 if logical_class(lattice, outcomes).label == "logical" else 0


def single_shot_round(
    lattice: TorusLattice,
    state: FaceSet,
    lam: float,
    eta: float,
    seed: SeedLike = None,
    round_index: int = 0,
) -> Tuple[FaceSet, RoundRecord]:
    """
    Un tour de correction : bruit, mesure bruitée, réparation, décodage.

    Args:
        lattice: Tore
        state: Erreur présente avant le tour
        lam: Taux d'inversion par qubit
        eta: Taux d'erreur par mesure de contrôle
        seed: Graine ou générateur
        round_index: Indice du tour, reporté dans l'enregistrement

    Returns:
        (nouvel état, RoundRecord)
    """
    _check_rate("lambda", lam)
    _check_rate("eta", eta)
    rng = make_rng(seed)
    state = np.asarray(state, dtype=np.uint8) ^ (rng.random(lattice.n_faces) < lam).astype(np.uint8)
    true_syndrome = lattice.boundary(state)
    w = (rng.random(lattice.n_edges) < eta).astype(np.uint8)
    measured = true_syndrome ^ w
    w0 = close_pseudo_syndrome(lattice, measured)
    record = RoundRecord(round=round_index, w=int(w.sum()), w0=int(w0.sum()))
    try:
        flips = decode(lattice, measured ^ w0)
    except NonSyndromeEvent as e:
        logger.debug(f"Tour {round_index} interrompu: {e}")
        record.nonsyndrome_flag = True
        return state, record
    state = state ^ flips
    residual = lattice.boundary(state)
    sizes = [int(c.size) for c in lattice.edge_clusters(residual)]
    record.residual_weight = int(residual.sum())
    record.cluster_sizes = sizes
    record.largest_cluster = max(sizes, default=0)
    record.tie_flag = logical_class(lattice, state).tie
    record.logical_flag = ideal_logical_flag(lattice, state)
    return state, record


def _check_rate(name: str, value: float):
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} doit appartenir à [0, 1] (reçu {value})")
