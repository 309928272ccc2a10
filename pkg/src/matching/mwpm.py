"""
Couplage parfait de poids minimum (algorithme blossom de networkx) avec
nœuds de bord optionnels.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Hashable, List, Set, Tuple

import networkx as nx

from src.utils.exceptions import InfeasibleMatchingError, ResourceError

logger = logging.getLogger(__name__)

MAX_DEFECTS = 2000


@dataclass
class Matching:
    """Résultat d'un couplage : paires retenues et poids total."""

    pairs: List[Tuple[Hashable, Hashable]]
    weight: int

    def partner(self) -> Dict[Hashable, Hashable]:
        result = {}
        for u, v in self.pairs:
            result[u] = v
            result[v] = u
        return result


@dataclass
class MatchGraph:
    """
    Graphe de couplage.

    Les nœuds ordinaires doivent être couplés ; un nœud de bord peut absorber
    au plus un couplage (au poids de l'arête listée) ou rester libre.
    """

    nodes: List[Hashable] = field(default_factory=list)
    boundary: Set[Hashable] = field(default_factory=set)
    edges: Dict[Tuple[Hashable, Hashable], int] = field(default_factory=dict)

    def __post_init__(self):
        self._positions = {node: i for i, node in enumerate(self.nodes)}

    def add_node(self, node: Hashable, boundary: bool = False):
        if node not in self._positions:
            self._positions[node] = len(self.nodes)
            self.nodes.append(node)
        if boundary:
            self.boundary.add(node)

    def add_edge(self, u: Hashable, v: Hashable, weight: int):
        if u == v:
            raise ValueError(f"Boucle interdite sur le nœud {u}")
        if weight < 0:
            raise ValueError(f"Poids négatif {weight} sur l'arête ({u}, {v})")
        self.add_node(u)
        self.add_node(v)
        key = (u, v) if self._positions[u] < self._positions[v] else (v, u)
        self.edges[key] = min(int(weight), self.edges.get(key, int(weight)))

    @property
    def required_nodes(self) -> List[Hashable]:
        return [v for v in self.nodes if v not in self.boundary]


def mwpm(graph: MatchGraph) -> Matching:
    """
    Couplage de poids minimum couvrant tous les nœuds ordinaires.

    Chaque nœud de bord est relié aux autres nœuds de bord par une arête de
    poids nul (un nœud virtuel est ajouté si le nombre total de nœuds est
    impair), ce qui laisse libres les nœuds de bord inutilisés.

    Args:
        graph: Graphe de couplage

    Returns:
        Matching restreint aux arêtes du graphe d'entrée

    Raises:
        InfeasibleMatchingError: si aucun couplage couvrant n'existe
        ResourceError: au-delà de MAX_DEFECTS nœuds ordinaires
    """
    required = graph.required_nodes
    if len(required) > MAX_DEFECTS:
        raise ResourceError(f"{len(required)} défauts à coupler (limite {MAX_DEFECTS})")
    if not required:
        return Matching(pairs=[], weight=0)

    index = {node: i for i, node in enumerate(graph.nodes)}
    g = nx.Graph()
    g.add_nodes_from(range(len(graph.nodes)))
    # Insertion en ordre lexicographique des indices : départage déterministe
    for (u, v), w in sorted(graph.edges.items(), key=lambda item: (index[item[0][0]], index[item[0][1]])):
        g.add_edge(index[u], index[v], weight=w)
    boundary_ids = sorted(index[b] for b in graph.boundary)
    if len(graph.nodes) % 2:
        virtual = len(graph.nodes)
        g.add_node(virtual)
        boundary_ids.append(virtual)
    for i, a in enumerate(boundary_ids):
        for b in boundary_ids[i + 1:]:
            g.add_edge(a, b, weight=0, virtual=True)

    matched = nx.min_weight_matching(g, weight="weight")
    covered = set()
    pairs = []
    total = 0
    for a, b in matched:
        covered.update((a, b))
        data = g.edges[a, b]
        if data.get("virtual") or a >= len(graph.nodes) or b >= len(graph.nodes):
            continue
        u, v = (a, b) if a < b else (b, a)
        pairs.append((graph.nodes[u], graph.nodes[v]))
        total += data["weight"]
    missing = [v for v in required if index[v] not in covered]
    if missing:
        raise InfeasibleMatchingError(f"Aucun couplage parfait: {len(missing)} nœud(s) non couvert(s)")
    pairs.sort(key=lambda p: (index[p[0]], index[p[1]]))
    logger.debug(f"Couplage de {len(required)} nœuds, poids {total}")
    return Matching(pairs=pairs, weight=total)


def greedy_matching_weight(graph: MatchGraph) -> float:
    """
    Poids d'un couplage glouton (arêtes par poids croissant).

    Sert de borne de dominance : mwpm(graph).weight ≤ greedy_matching_weight(graph).
    Renvoie ``inf`` si le glouton laisse un nœud ordinaire libre.
    """
    index = {node: i for i, node in enumerate(graph.nodes)}
    used = set()
    total = 0
    for (u, v), w in sorted(graph.edges.items(), key=lambda item: (item[1], index[item[0][0]], index[item[0][1]])):
        if u in used or v in used:
            continue
        used.update((u, v))
        total += w
    if any(v not in used for v in graph.required_nodes):
        return float("inf")
    return total
