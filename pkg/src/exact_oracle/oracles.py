"""
Oracles exacts pour la validation : énumérations exhaustives et
recherches arborescentes, volontairement indépendantes des chemins de
calcul qu'elles valident.
"""

import itertools
import logging
import math
import time
from dataclasses import dataclass, field
from typing import Dict, Hashable, Iterable, Optional, Set, Tuple

import networkx as nx
import numpy as np
from scipy.stats import binom

from src.matching.mwpm import MatchGraph
from src.noise_channels.channels import IID_FLIP, PauliChannel
from src.pauli_core.gf2 import rank
from src.pauli_core.pauli import PauliOperator
from src.pauli_core.subsystem_code import CorrectionTable, StabSyndrome, SubsystemCode
from src.utils.exceptions import ResourceError

logger = logging.getLogger(__name__)

MAX_BRUTE_FORCE_NODES = 14
MAX_REACHABILITY_QUBITS = 12


@dataclass
class OracleBudget:
    """
    Budget d'un oracle exhaustif, vérifié avant et pendant les boucles.

    Attributes:
        max_enumeration: Nombre maximal d'éléments énumérés
        time_ceiling: Durée maximale en secondes
        max_qubits: Taille maximale des codes acceptés par ``coset_check``
    """

    max_enumeration: int = 10 ** 6
    time_ceiling: float = 60.0
    max_qubits: int = 512
    _count: int = field(default=0, repr=False)
    _start: Optional[float] = field(default=None, repr=False)

    def start(self):
        self._count = 0
        self._start = time.monotonic()

    def require(self, count: int, what: str):
        """Refuser d'avance une énumération trop grande."""
        if count > self.max_enumeration:
            raise ResourceError(f"{what}: {count} éléments (budget {self.max_enumeration})")

    def charge(self, count: int = 1):
        """Comptabiliser des éléments énumérés ; lève ResourceError hors budget."""
        self._count += count
        if self._count > self.max_enumeration:
            raise ResourceError(f"Budget d'énumération dépassé ({self.max_enumeration})")
        if self._start is not None and time.monotonic() - self._start > self.time_ceiling:
            raise ResourceError(f"Budget de temps dépassé ({self.time_ceiling} s)")


def torus_graph(lattice) -> nx.Graph:
    """Graphe sommets/arêtes d'un tore, attribut ``key`` = indice d'arête."""
    g = nx.Graph()
    g.add_nodes_from(range(lattice.n_vertices))
    for j, (u, v) in enumerate(lattice.edge_vertex_pairs):
        g.add_edge(int(u), int(v), key=j)
    return g


def dual_charge_graph(dual) -> nx.Graph:
    """Graphe d'un réseau dual : ``key`` = indice d'arête, ``charge`` = masque de l'étiquette."""
    g = nx.Graph()
    g.add_nodes_from(range(dual.n_vertices))
    for j, (u, v) in enumerate(dual.edges):
        g.add_edge(int(u), int(v), key=j, charge=int(dual.edge_masks[j]))
    return g


def _as_charges(defects) -> Dict[Hashable, int]:
    if isinstance(defects, dict):
        return {d: int(m) for d, m in defects.items() if m}
    charges: Dict[Hashable, int] = {}
    for d in defects:
        charges[d] = charges.get(d, 0) ^ 1
    return {d: m for d, m in charges.items() if m}


def enumerate_minimal_repair(
    defects,
    graph: nx.Graph,
    absorbers: Iterable[Hashable] = (),
    budget: Optional[OracleBudget] = None,
) -> Set[Hashable]:
    """
    Ensemble d'arêtes de cardinalité minimale dont les charges aux sommets
    sont exactement celles des défauts (hors sommets absorbants).

    ``defects`` est soit une liste de sommets (charge Z₂, une arête vaut 1),
    soit un dict sommet → masque ; chaque arête porte alors son masque dans
    l'attribut ``charge`` et ajoute ce masque (XOR) à ses deux extrémités.

    Approfondissement itératif : à profondeur k, le plus petit sommet encore
    chargé doit être couvert par une arête non encore choisie ; une branche
    est coupée dès que ⌈sommets chargés / 2⌉ dépasse la profondeur disponible.

    Returns:
        Identifiants des arêtes (attribut ``key`` ou paire non ordonnée)
    """
    budget = budget or OracleBudget()
    budget.start()
    absorber_set = set(absorbers)
    target = {d: m for d, m in _as_charges(defects).items() if d not in absorber_set}
    if not target:
        return set()
    order = {node: i for i, node in enumerate(sorted(graph.nodes, key=repr))}
    edge_ids = {}
    edge_charge = {}
    for u, v, data in graph.edges(data=True):
        edge_ids[frozenset((u, v))] = data.get("key", frozenset((u, v)))
        edge_charge[frozenset((u, v))] = int(data.get("charge", 1))

    def search(charges: Dict[Hashable, int], chosen: Set[frozenset], depth: int) -> Optional[Set[frozenset]]:
        budget.charge()
        pending = [x for x, m in charges.items() if m and x not in absorber_set]
        if not pending:
            return set(chosen)
        if math.ceil(len(pending) / 2) > depth:
            return None
        v = min(pending, key=order.__getitem__)
        for w in sorted(graph.neighbors(v), key=order.__getitem__):
            edge = frozenset((v, w))
            if edge in chosen:
                continue
            mask = edge_charge[edge]
            updated = dict(charges)
            updated[v] = updated.get(v, 0) ^ mask
            updated[w] = updated.get(w, 0) ^ mask
            chosen.add(edge)
            found = search(updated, chosen, depth - 1)
            chosen.discard(edge)
            if found is not None:
                return found
        return None

    for depth in range(math.ceil(len(target) / 2), graph.number_of_edges() + 1):
        found = search(dict(target), set(), depth)
        if found is not None:
            logger.debug(f"Réparation minimale: {len(found)} arêtes pour {len(target)} défauts")
            return {edge_ids[e] for e in found}
    raise ValueError("Aucune réparation n'existe pour ces défauts")


def minimal_repair_ratio(repair: Iterable[Hashable], graph: nx.Graph, absorbers: Iterable[Hashable] = (), budget=None) -> float:
    """
    Plus grand rapport, sur les composantes connexes de ``repair``, entre la
    taille de la composante et la réparation optimale de ses charges
    (sommets impairs si les arêtes ne portent pas d'attribut ``charge``).
    """
    keyed = {data.get("key", frozenset((u, v))): (u, v, int(data.get("charge", 1))) for u, v, data in graph.edges(data=True)}
    sub = nx.Graph()
    for key in repair:
        u, v, mask = keyed[key]
        sub.add_edge(u, v, key=key, charge=mask)
    absorber_set = set(absorbers)
    worst = 1.0
    for nodes in nx.connected_components(sub):
        component = sub.subgraph(nodes)
        charges: Dict[Hashable, int] = {}
        for u, v, data in component.edges(data=True):
            charges[u] = charges.get(u, 0) ^ data["charge"]
            charges[v] = charges.get(v, 0) ^ data["charge"]
        charges = {x: m for x, m in charges.items() if m and x not in absorber_set}
        optimum = len(enumerate_minimal_repair(charges, graph, absorber_set, budget))
        worst = max(worst, component.number_of_edges() / max(1, optimum))
    return worst


def _anticommutes(stab_matrix: np.ndarray, e: PauliOperator) -> np.ndarray:
    n = e.n
    x, z = stab_matrix[:, :n].astype(np.int64), stab_matrix[:, n:].astype(np.int64)
    return ((x @ e.z_bits.astype(np.int64) + z @ e.x_bits.astype(np.int64)) % 2).astype(np.uint8)


def _in_span(matrix: np.ndarray, vector: np.ndarray) -> bool:
    if not vector.any():
        return True
    if matrix.shape[0] == 0:
        return False
    return rank(np.vstack([matrix, vector])) == rank(matrix)


def exhaustive_fail(channel: PauliChannel, code: SubsystemCode, table: CorrectionTable, budget: Optional[OracleBudget] = None) -> float:
    """
    Probabilité d'échec de la correction idéale par énumération des termes.

    L'échec est détecté par un test de rang : l'erreur résiduelle C(σ(E))·E
    n'appartient pas à l'espace engendré par les générateurs de jauge.
    """
    budget = budget or OracleBudget()
    if channel.is_explicit:
        terms = channel.terms()
    else:
        budget.require(2 ** channel.n if channel.support_mode == IID_FLIP else 4 ** channel.n, "Canal i.i.d.")
        terms = channel.expand().terms()
    budget.require(len(terms), "Termes du canal")
    budget.start()
    failing = []
    for p, e in terms:
        budget.charge()
        sigma = StabSyndrome(_anticommutes(code.stab_matrix, e))
        residual = table.correction(sigma) * e
        if not _in_span(code.gauge_matrix, residual.symplectic()):
            failing.append(p)
    return math.fsum(failing)


def coset_check(e: PauliOperator, code: SubsystemCode, budget: Optional[OracleBudget] = None) -> str:
    """
    Classer un opérateur : "detectable" (syndrome non trivial), "stabilizer",
    "gauge" ou "logical".
    """
    budget = budget or OracleBudget()
    if code.n > budget.max_qubits:
        raise ResourceError(f"Code de {code.n} qubits (budget {budget.max_qubits})")
    if _anticommutes(code.stab_matrix, e).any():
        return "detectable"
    vector = e.symplectic()
    if _in_span(code.stab_matrix, vector):
        return "stabilizer"
    if _in_span(code.gauge_matrix, vector):
        return "gauge"
    return "logical"


def brute_force_matching_weight(graph: MatchGraph) -> float:
    """
    Poids minimal d'un couplage couvrant les nœuds ordinaires, par
    énumération de toutes les paires (au plus 14 nœuds).

    Returns:
        Poids minimal, ou ``inf`` si aucun couplage n'existe
    """
    if len(graph.nodes) > MAX_BRUTE_FORCE_NODES:
        raise ResourceError(f"{len(graph.nodes)} nœuds (limite {MAX_BRUTE_FORCE_NODES})")
    weights: Dict[frozenset, int] = {frozenset(k): w for k, w in graph.edges.items()}
    required = graph.required_nodes

    def best(remaining: Tuple[Hashable, ...], free_boundary: frozenset) -> float:
        if not remaining:
            return 0
        v, rest = remaining[0], remaining[1:]
        result = math.inf
        for i, u in enumerate(rest):
            w = weights.get(frozenset((u, v)))
            if w is not None:
                result = min(result, w + best(rest[:i] + rest[i + 1:], free_boundary))
        for b in free_boundary:
            w = weights.get(frozenset((b, v)))
            if w is not None:
                result = min(result, w + best(rest, free_boundary - {b}))
        return result

    return best(tuple(required), frozenset(graph.boundary))


def reachable_syndromes(code: SubsystemCode, budget: Optional[OracleBudget] = None) -> Set[StabSyndrome]:
    """Syndromes atteignables, par parcours en largeur sur les erreurs à un qubit (n ≤ 12)."""
    if code.n > MAX_REACHABILITY_QUBITS:
        raise ResourceError(f"Code de {code.n} qubits (limite {MAX_REACHABILITY_QUBITS})")
    budget = budget or OracleBudget()
    budget.start()
    moves = []
    for q, letter in itertools.product(range(code.n), "XZ"):
        moves.append(_anticommutes(code.stab_matrix, PauliOperator.single(code.n, q, letter)))
    start = np.zeros(code.stab_matrix.shape[0], dtype=np.uint8)
    seen = {np.packbits(start).tobytes(): start}
    frontier = [start]
    while frontier:
        nxt = []
        for s in frontier:
            for m in moves:
                t = s ^ m
                key = np.packbits(t).tobytes()
                if key not in seen:
                    budget.charge()
                    seen[key] = t
                    nxt.append(t)
        frontier = nxt
    return {StabSyndrome(bits) for bits in seen.values()}


def repetition_fail_closed_form(lam: float, n: int = 3) -> float:
    """
    Échec du vote majoritaire sur n qubits (n impair) : plus de n/2 inversions.
    Pour n = 3 : 3λ²(1−λ) + λ³.
    """
    if n % 2 == 0:
        raise ValueError("n doit être impair")
    return float(binom.sf(n // 2, n, lam))
