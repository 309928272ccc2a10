"""
T-joins de cardinalité (ou de poids) minimale par couplage sur les plus
courts chemins.
"""

import logging
from collections import Counter
from dataclasses import dataclass
from typing import Hashable, Iterable, List, Set, Tuple

import networkx as nx

from src.matching.mwpm import MAX_DEFECTS, MatchGraph, mwpm
from src.utils.exceptions import InfeasibleMatchingError, ResourceError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class _AbsorberSlot:
    terminal_index: int


def edge_key(graph: nx.Graph, u: Hashable, v: Hashable) -> Hashable:
    """Identifiant d'une arête : attribut ``key`` s'il existe, sinon la paire non ordonnée."""
    return graph.edges[u, v].get("key", frozenset((u, v)))


def odd_vertices(edges: Iterable[Tuple[Hashable, Hashable]]) -> Set[Hashable]:
    """Sommets de degré impair d'un ensemble d'arêtes (paires)."""
    degree = Counter()
    for edge in edges:
        u, v = tuple(edge)
        degree[u] += 1
        degree[v] += 1
    return {v for v, d in degree.items() if d % 2}


def t_join(
    graph: nx.Graph,
    terminals: Iterable[Hashable],
    absorbers: Iterable[Hashable] = (),
    weight: str = "weight",
) -> Set[Hashable]:
    """
    T-join minimal dans un graphe quelconque.

    Les terminaux sont couplés deux à deux, ou chacun au sommet absorbant le
    plus proche ; la solution est le XOR des plus courts chemins retenus.

    Args:
        graph: Graphe networkx (poids entiers positifs, 1 par défaut)
        terminals: Ensemble T des sommets qui doivent être de degré impair
        absorbers: Sommets autorisés à recevoir un degré impair supplémentaire
        weight: Nom de l'attribut de poids

    Returns:
        Ensemble des identifiants d'arêtes (voir ``edge_key``)

    Raises:
        InfeasibleMatchingError: parité impossible sans absorbeur
    """
    absorber_set = set(absorbers)
    terms = [t for t in dict.fromkeys(terminals) if t not in absorber_set]
    if not terms:
        return set()
    if len(terms) > MAX_DEFECTS:
        raise ResourceError(f"{len(terms)} terminaux (limite {MAX_DEFECTS})")
    if not absorber_set and len(terms) % 2:
        raise InfeasibleMatchingError(f"Nombre impair de terminaux ({len(terms)}) sans absorbeur")

    match_graph = MatchGraph()
    for t in terms:
        match_graph.add_node(t)
    term_set = set(terms)
    for i, t in enumerate(terms):
        lengths = nx.single_source_dijkstra_path_length(graph, t, weight=weight)
        for u in terms[i + 1:]:
            if u in lengths:
                match_graph.add_edge(t, u, int(lengths[u]))
    absorb_paths = {}
    if absorber_set:
        abs_lengths, abs_paths = nx.multi_source_dijkstra(graph, absorber_set, weight=weight)
        for i, t in enumerate(terms):
            if t in abs_lengths:
                slot = _AbsorberSlot(i)
                match_graph.add_node(slot, boundary=True)
                match_graph.add_edge(t, slot, int(abs_lengths[t]))
                absorb_paths[t] = abs_paths[t]

    matching = mwpm(match_graph)
    toggled: Counter = Counter()
    for a, b in matching.pairs:
        if isinstance(b, _AbsorberSlot) or isinstance(a, _AbsorberSlot):
            t = a if a in term_set else b
            path = absorb_paths[t]
        else:
            path = nx.dijkstra_path(graph, a, b, weight=weight)
        for x, y in zip(path, path[1:]):
            toggled[edge_key(graph, x, y)] += 1
    result = {key for key, count in toggled.items() if count % 2}
    logger.debug(f"T-join: {len(terms)} terminaux, {len(result)} arêtes")
    return result


def torus_distance(L: int, a: int, b: int) -> int:
    """Distance L¹ avec repliement entre deux sommets r·L+c du tore L×L."""
    (r1, c1), (r2, c2) = divmod(a, L), divmod(b, L)
    dr, dc = abs(r1 - r2), abs(c1 - c2)
    return min(dr, L - dr) + min(dc, L - dc)


def _steps(start: int, end: int, L: int) -> Tuple[int, int]:
    forward = (end - start) % L
    if forward <= L - forward:
        return 1, forward
    return -1, L - forward


def torus_path_edges(L: int, a: int, b: int) -> List[int]:
    """
    Plus court chemin canonique entre deux sommets du tore, ligne d'abord.

    On se déplace d'abord le long de la ligne de départ (changement de
    colonne), puis le long de la colonne d'arrivée. Indexation des arêtes :
    l'arête horizontale du sommet (r, c) vers (r, c+1) porte l'indice r·L+c,
    l'arête verticale de (r, c) vers (r+1, c) porte l'indice L²+r·L+c.
    """
    (r, c), (r2, c2) = divmod(a, L), divmod(b, L)
    edges = []
    step, count = _steps(c, c2, L)
    for _ in range(count):
        nc = (c + step) % L
        edges.append(r * L + (c if step == 1 else nc))
        c = nc
    step, count = _steps(r, r2, L)
    for _ in range(count):
        nr = (r + step) % L
        edges.append(L * L + (r if step == 1 else nr) * L + c)
        r = nr
    return edges


def torus_t_join(L: int, terminals: Iterable[int]) -> Set[int]:
    """
    T-join minimal sur le graphe des sommets du tore L×L (poids unitaires).

    Args:
        L: Taille linéaire du tore
        terminals: Indices r·L+c des sommets de degré impair visés

    Returns:
        Ensemble des indices d'arêtes de la solution
    """
    terms = sorted(set(int(t) for t in terminals))
    if not terms:
        return set()
    if len(terms) % 2:
        raise InfeasibleMatchingError(f"Nombre impair de sommets impairs sur le tore ({len(terms)})")
    if len(terms) > MAX_DEFECTS:
        raise ResourceError(f"{len(terms)} terminaux (limite {MAX_DEFECTS})")
    match_graph = MatchGraph()
    for a in terms:
        match_graph.add_node(a)
    for i, a in enumerate(terms):
        for b in terms[i + 1:]:
            match_graph.add_edge(a, b, torus_distance(L, a, b))
    matching = mwpm(match_graph)
    toggled: Counter = Counter()
    for a, b in matching.pairs:
        for e in torus_path_edges(L, a, b):
            toggled[e] += 1
    return {e for e, count in toggled.items() if count % 2}
