"""
Réductions vers un problème de couplage.

Une réduction associe à un problème de décodage un graphe dérivé :

- nœuds S′ (générateurs, éventuellement recombinés) ;
- arêtes E′ à une ou deux extrémités (une seule : arête de bord) ;
- relèvement g : chaque arête de E′ → ensemble d'erreurs élémentaires ;
- découpage h : chaque erreur élémentaire → arêtes de E′.

Le contrat 𝔖∘g = 𝔖′ garantit qu'un T-join dans le graphe dérivé se relève
en une erreur de même syndrome. Les constantes a = max |h(ξ)| et
b = max |g(ξ′)| sont conservées avec la réduction ; une solution relevée
pèse au plus a·b fois l'optimum.

Deux instances :

- ``SyndromeReduction`` : erreurs = qubits, nœuds = stabilisateurs,
  générateurs de charge C = {r, g, x = r+b} ;
- ``RepairReduction`` : erreurs = arêtes du dual (erreurs de mesure),
  nœuds = (sommet interne, étiquette), générateurs C = {rg, gb, by}.
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Dict, Hashable, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from src.colex_lattice.complex import COLOR_NAMES
from src.colex_lattice.dual import DualLattice
from src.gauge_color_code.charges import ALL_COLORS_MASK, ChargeMap
from src.matching.tjoin import t_join
from src.pauli_core.gf2 import GF2Solver, as_bits, mod2_matmul
from src.utils.exceptions import InfeasibleMatchingError, NonSyndromeEvent

logger = logging.getLogger(__name__)

BOUNDARY = "boundary"
LOCAL_RADII = (1, 2, 3)

RG, GB, BY, RB, GY = 0b0011, 0b0110, 0b1100, 0b0101, 0b1010
REPAIR_GENERATORS = (RG, GB, BY)
# Deux étiquettes engendrant les charges possibles d'un sommet, par couleur
REPAIR_BASIS = {0: (GB, BY), 1: (RB, BY), 2: (RG, GY), 3: (RG, GB)}
# rb = rg + gb, gy = gb + by : composante confiée au partenaire
REPAIR_MOVED = {RB: GB, GY: BY}


def mask_name(mask: int) -> str:
    return "".join(COLOR_NAMES[c] for c in range(4) if mask >> c & 1)


@dataclass
class MatchingReduction:
    """
    Attributes:
        nodes: Nœuds dérivés (étiquettes lisibles)
        edges: Extrémités de chaque arête dérivée (indices de nœuds ; None = bord)
        lifts: Relèvement de chaque arête dérivée (indices d'erreurs élémentaires)
        splits: Pour chaque erreur élémentaire, indices des arêtes dérivées
        name: Nom de la réduction
    """

    nodes: List[Hashable]
    edges: List[Tuple[int, Optional[int]]]
    lifts: List[Tuple[int, ...]]
    splits: List[Tuple[int, ...]]
    name: str = ""

    @property
    def a(self) -> int:
        return max((len(s) for s in self.splits), default=0)

    @property
    def b(self) -> int:
        return max((len(lift) for lift in self.lifts), default=0)

    @property
    def ratio_bound(self) -> int:
        """Constante c = a·b : |relèvement d'un T-join minimal| ≤ c · optimum."""
        return self.a * self.b

    @property
    def weights(self) -> List[int]:
        return [len(lift) for lift in self.lifts]

    @cached_property
    def graph(self) -> nx.Graph:
        """Graphe dérivé : nœuds entiers plus ``BOUNDARY``, attribut ``key`` = indice d'arête."""
        g = nx.Graph()
        g.add_nodes_from(range(len(self.nodes)))
        for idx, (u, v) in enumerate(self.edges):
            w = BOUNDARY if v is None else v
            g.add_edge(u, w, key=idx, weight=max(1, len(self.lifts[idx])))
        return g

    @property
    def has_boundary(self) -> bool:
        return any(v is None for _, v in self.edges)

    def derived_syndrome(self, edge_indices: Sequence[int]) -> np.ndarray:
        """𝔖′ d'un ensemble d'arêtes dérivées (indicatrice sur les nœuds)."""
        bits = np.zeros(len(self.nodes), dtype=np.uint8)
        for idx in edge_indices:
            u, v = self.edges[idx]
            bits[u] ^= 1
            if v is not None:
                bits[v] ^= 1
        return bits

    def lift(self, edge_indices: Sequence[int], size: int) -> np.ndarray:
        """Relever un ensemble d'arêtes dérivées en indicatrice d'erreurs élémentaires."""
        bits = np.zeros(size, dtype=np.uint8)
        for idx in edge_indices:
            for e in self.lifts[idx]:
                bits[e] ^= 1
        return bits

    def to_text(self) -> str:
        """Export texte en sections ``[NODE]``, ``[EDGE]`` et ``[LIFT]``."""
        lines = [f"# reduction {self.name} a={self.a} b={self.b}", "[NODE]"]
        lines += [f"{i} {node}" for i, node in enumerate(self.nodes)]
        lines.append("[EDGE]")
        for i, (u, v) in enumerate(self.edges):
            lines.append(f"{i} {u} {BOUNDARY if v is None else v} {len(self.lifts[i])}")
        lines.append("[LIFT]")
        lines += [f"{i} " + " ".join(str(e) for e in lift) for i, lift in enumerate(self.lifts)]
        return "\n".join(lines) + "\n"


def _pairings(items: Sequence[int]):
    """Partitions d'une liste en blocs de taille 1 ou 2."""
    if not items:
        yield []
        return
    first, rest = items[0], list(items[1:])
    for tail in _pairings(rest):
        yield [(first,)] + tail
    for i, other in enumerate(rest):
        for tail in _pairings(rest[:i] + rest[i + 1:]):
            yield [(first, other)] + tail


class LocalReduction:
    """
    Réduction d'un problème (H, M) au couplage par relèvements locaux.

    H est la matrice nœuds × erreurs élémentaires sur GF(2). Certains nœuds
    portent une charge hors de C : une de ses composantes est reportée sur
    un nœud proche (son partenaire). Ce changement de coordonnées σ′ = Mσ
    est une involution, les partenaires n'étant jamais eux-mêmes reportés.
    Le syndrome transformé de chaque erreur élémentaire est ensuite découpé
    en blocs d'au plus deux nœuds, chacun relevé par une résolution locale
    sur GF(2).

    Les sous-classes fournissent les nœuds (sommet du dual, masque de
    charge), la matrice H, les partenaires et les erreurs voisines d'un
    ensemble de sommets.
    """

    kind = "reduction"
    NEUTRAL_MASKS: Tuple[int, ...] = (0,)

    def __init__(
        self,
        dual: DualLattice,
        check_matrix,
        node_vertices: np.ndarray,
        node_masks: np.ndarray,
    ):
        self.dual = dual
        self.check_matrix = as_bits(check_matrix)
        self.size, self.n_errors = self.check_matrix.shape
        self.node_vertices = np.asarray(node_vertices, dtype=np.int64)
        self.node_masks = np.asarray(node_masks, dtype=np.int64)
        self._global = GF2Solver(self.check_matrix)
        self.partners = self._choose_partners()
        self._lift_cache: Dict[Tuple[int, ...], Optional[Tuple[int, ...]]] = {}
        self._ball_cache: Dict[Tuple[Tuple[int, ...], int], np.ndarray] = {}
        self.reduction = self._build()
        logger.info(
            f"Réduction {self.kind} de '{dual.name}': {self.size} nœuds, {len(self.reduction.edges)} arêtes, "
            f"a={self.reduction.a}, b={self.reduction.b}"
        )

    # -- à fournir par les sous-classes

    def _choose_partners(self) -> Dict[int, int]:
        raise NotImplementedError

    def _node_name(self, pos: int) -> str:
        raise NotImplementedError

    def _errors_touching(self, vertices) -> np.ndarray:
        """Erreurs élémentaires dont le support touche les sommets donnés."""
        raise NotImplementedError

    # -- partie commune

    def _nearest_node(self, pos: int, accept: Callable[[int], bool]) -> int:
        """Nœud accepté le plus proche (distance dans le dual, puis indice) d'un autre sommet que celui de ``pos``."""
        v = int(self.node_vertices[pos])
        lengths = nx.single_source_shortest_path_length(self.dual.graph, v)
        candidates = sorted(
            (lengths[int(self.node_vertices[p])], p)
            for p in range(self.size)
            if p != pos and int(self.node_vertices[p]) in lengths and int(self.node_vertices[p]) != v and accept(p)
        )
        if not candidates:
            raise ValueError(f"Aucun partenaire pour le nœud {self._node_name(pos)}")
        return candidates[0][1]

    def transform(self, bits: np.ndarray) -> np.ndarray:
        """σ′ = Mσ (et, M étant une involution, σ = Mσ′)."""
        bits = np.asarray(bits, dtype=np.uint8)
        out = bits.copy()
        for pos, partner in self.partners.items():
            if bits[pos]:
                out[partner] ^= 1
        return out

    def _indicator(self, positions: Sequence[int]) -> np.ndarray:
        bits = np.zeros(self.size, dtype=np.uint8)
        bits[list(positions)] = 1
        return bits

    def _charge(self, target: np.ndarray) -> int:
        mask = 0
        for pos in np.flatnonzero(target):
            mask ^= int(self.node_masks[pos])
        return 0 if mask in self.NEUTRAL_MASKS else mask

    def _ball_columns(self, target: np.ndarray, radius: int) -> np.ndarray:
        """Erreurs élémentaires touchant un sommet à distance ≤ radius du support de ``target``."""
        sources = tuple(sorted({int(self.node_vertices[p]) for p in np.flatnonzero(target)}))
        key = (sources, radius)
        if key not in self._ball_cache:
            ball = nx.multi_source_dijkstra_path_length(self.dual.graph, set(sources), cutoff=radius)
            self._ball_cache[key] = self._errors_touching(ball)
        return self._ball_cache[key]

    def _local_lift(self, block: Tuple[int, ...]) -> Optional[Tuple[int, ...]]:
        """Erreurs dont le syndrome vaut M·1_block, cherchées à rayon croissant ; None si hors d'atteinte."""
        if block in self._lift_cache:
            return self._lift_cache[block]
        target = self.transform(self._indicator(block))
        lift = None
        if self._global.is_consistent(target):
            for radius in LOCAL_RADII:
                cols = self._ball_columns(target, radius)
                solution = GF2Solver(self.check_matrix[:, cols]).solve(target)
                if solution is not None:
                    lift = tuple(int(e) for e in cols[np.flatnonzero(solution)])
                    break
        self._lift_cache[block] = lift
        return lift

    def _global_lift(self, block: Tuple[int, ...]) -> Optional[Tuple[int, ...]]:
        target = self.transform(self._indicator(block))
        solution = self._global.solve(target)
        if solution is None:
            return None
        return tuple(int(e) for e in np.flatnonzero(solution))

    def _split_error(self, col: int) -> List[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
        """Découpage du syndrome transformé d'une erreur élémentaire en blocs relevés localement."""
        derived = np.flatnonzero(self.transform(self.check_matrix[:, col])).tolist()
        candidates = sorted(
            _pairings(derived),
            key=lambda blocks: (
                sum(1 for b in blocks if self._charge(self.transform(self._indicator(b)))),
                len(blocks),
            ),
        )
        for blocks in candidates:
            lifts = [self._local_lift(b) for b in blocks]
            if all(lift is not None for lift in lifts):
                return list(zip(blocks, lifts))
        for blocks in sorted(_pairings(derived), key=len):
            lifts = [self._global_lift(b) for b in blocks]
            if all(lift is not None for lift in lifts):
                logger.debug(f"Erreur {col}: relèvement global nécessaire")
                return list(zip(blocks, lifts))
        raise RuntimeError(f"Syndrome de l'erreur élémentaire {col} non découpable")

    def _build(self) -> MatchingReduction:
        nodes = [self._node_name(pos) for pos in range(self.size)]
        edge_index: Dict[Tuple[int, ...], int] = {}
        edges: List[Tuple[int, Optional[int]]] = []
        lifts: List[Tuple[int, ...]] = []
        splits: List[Tuple[int, ...]] = []
        for col in range(self.n_errors):
            parts = []
            for block, lift in self._split_error(col):
                if block not in edge_index:
                    edge_index[block] = len(edges)
                    edges.append((block[0], block[1] if len(block) > 1 else None))
                    lifts.append(lift)
                parts.append(edge_index[block])
            splits.append(tuple(parts))
        return MatchingReduction(nodes, edges, lifts, splits, name=f"{self.kind}:{self.dual.name}")

    def is_valid(self, bits: np.ndarray) -> bool:
        return self._global.is_consistent(np.asarray(bits, dtype=np.uint8))

    def check_contract(self) -> List[int]:
        """Arêtes dérivées violant 𝔖∘g = 𝔖′ (liste vide si le contrat est respecté)."""
        bad = []
        for idx in range(len(self.reduction.edges)):
            lifted = self.reduction.lift([idx], self.n_errors)
            syndrome = mod2_matmul(self.check_matrix, lifted)
            if not np.array_equal(self.transform(syndrome), self.reduction.derived_syndrome([idx])):
                bad.append(idx)
        return bad

    def match(self, bits: np.ndarray) -> np.ndarray:
        """
        Erreur de syndrome ``bits`` : σ′ = Mσ, T-join minimal dans le graphe
        dérivé, puis relèvement.

        Raises:
            NonSyndromeEvent: aucun T-join n'existe dans le graphe dérivé
        """
        bits = np.asarray(bits, dtype=np.uint8)
        derived = self.transform(bits)
        matching = self.reduction
        terminals = np.flatnonzero(derived).tolist()
        if not terminals:
            return np.zeros(self.n_errors, dtype=np.uint8)
        absorbers = [BOUNDARY] if matching.has_boundary else []
        try:
            keys = t_join(matching.graph, terminals, absorbers=absorbers)
        except InfeasibleMatchingError as e:
            raise NonSyndromeEvent(f"Couplage impossible sur le graphe dérivé ({self.kind}): {e}") from e
        lifted = matching.lift(sorted(keys), self.n_errors)
        if not np.array_equal(mod2_matmul(self.check_matrix, lifted), bits):
            raise RuntimeError("Le relèvement ne reproduit pas le syndrome (contrat de réduction violé)")
        return lifted


class SyndromeReduction(LocalReduction):
    """
    Réduction du décodage du syndrome d'erreur avec les générateurs
    C = {r, g, x = r+b}.

    Un sommet b porte la charge x + r : sa composante r est reportée sur un
    sommet r interne proche ; de même un sommet y = g + x reporte sa
    composante g sur un partenaire g.
    """

    kind = "syndrome"
    NEUTRAL_MASKS = (0, ALL_COLORS_MASK)

    def __init__(self, dual: DualLattice):
        vertices = dual.stabilizer_vertices
        self.vertices = vertices
        super().__init__(
            dual,
            dual.stabilizer_matrix,
            node_vertices=vertices,
            node_masks=np.array([1 << int(dual.vertex_colors[v]) for v in vertices], dtype=np.int64),
        )

    def _choose_partners(self) -> Dict[int, int]:
        """Position d'un sommet b (resp. y) → position du sommet r (resp. g) interne le plus proche."""
        dual = self.dual
        partners = {}
        for pos, v in enumerate(self.vertices.tolist()):
            color = int(dual.vertex_colors[v])
            if color not in (2, 3):
                continue
            target = 0 if color == 2 else 1

            def accept(p: int, target=target) -> bool:
                u = int(self.node_vertices[p])
                return not dual.is_external[u] and int(dual.vertex_colors[u]) == target

            partners[pos] = self._nearest_node(pos, accept)
        return partners

    def _node_name(self, pos: int) -> str:
        v = int(self.node_vertices[pos])
        return f"v{v}:{COLOR_NAMES[int(self.dual.vertex_colors[v])]}"

    def _errors_touching(self, vertices) -> np.ndarray:
        return np.flatnonzero(self.dual.tetrahedra_contain_any(vertices))


class RepairReduction(LocalReduction):
    """
    Réduction de la réparation du syndrome de jauge avec les générateurs
    C = {rg, gb, by}.

    Un sommet interne ne peut porter que les charges d'un sous-groupe
    Z₂ × Z₂ (les étiquettes sans sa couleur) : il donne deux nœuds, un par
    étiquette de ``REPAIR_BASIS``. Les nœuds rb (sommets g) et gy (sommets
    b) reportent respectivement leur composante gb et by sur le nœud de
    même étiquette le plus proche, si bien que tout nœud transformé porte
    une charge de C. Les régions ne portent pas de nœud : elles absorbent
    la charge de toute étiquette qui ne contient pas leur couleur.
    """

    kind = "repair"

    def __init__(self, dual: DualLattice):
        internal = np.flatnonzero(~dual.is_external)
        node_vertices, node_masks = [], []
        for v in internal.tolist():
            for mask in REPAIR_BASIS[int(dual.vertex_colors[v])]:
                node_vertices.append(v)
                node_masks.append(mask)
        self._positions: Dict[Tuple[int, int], int] = {
            (v, mask): pos for pos, (v, mask) in enumerate(zip(node_vertices, node_masks))
        }
        node_vertices = np.array(node_vertices, dtype=np.int64)
        node_masks = np.array(node_masks, dtype=np.int64)
        super().__init__(dual, self._charge_matrix(dual, node_vertices, node_masks), node_vertices, node_masks)

    @staticmethod
    def _charge_matrix(dual: DualLattice, node_vertices: np.ndarray, node_masks: np.ndarray) -> np.ndarray:
        """H : coordonnée de la charge de chaque arête dans la base de chaque sommet interne."""
        position = {(int(v), int(m)): p for p, (v, m) in enumerate(zip(node_vertices, node_masks))}
        matrix = np.zeros((node_vertices.shape[0], dual.n_edges), dtype=np.uint8)
        for j, (u, v) in enumerate(dual.edges):
            label = int(dual.edge_masks[j])
            for vertex in (int(u), int(v)):
                if dual.is_external[vertex]:
                    continue
                for mask in REPAIR_BASIS[int(dual.vertex_colors[vertex])]:
                    if _coordinate(label, mask, int(dual.vertex_colors[vertex])):
                        matrix[position[(vertex, mask)], j] = 1
        return matrix

    def _choose_partners(self) -> Dict[int, int]:
        partners = {}
        for pos in range(self.size):
            moved = REPAIR_MOVED.get(int(self.node_masks[pos]))
            if moved is None:
                continue
            partners[pos] = self._nearest_node(pos, lambda p, moved=moved: int(self.node_masks[p]) == moved)
        return partners

    def _node_name(self, pos: int) -> str:
        v = int(self.node_vertices[pos])
        return f"v{v}:{COLOR_NAMES[int(self.dual.vertex_colors[v])]}:{mask_name(int(self.node_masks[pos]))}"

    def _errors_touching(self, vertices) -> np.ndarray:
        mask = np.zeros(self.dual.n_vertices, dtype=bool)
        mask[list(vertices)] = True
        return np.flatnonzero(mask[self.dual.edges].any(axis=1))

    def node_bits(self, charges: ChargeMap) -> np.ndarray:
        """Syndrome dérivé (avant transformation) d'une carte des charges."""
        bits = np.zeros(self.size, dtype=np.uint8)
        for v, charge in charges.defects().items():
            color = int(self.dual.vertex_colors[v])
            for mask in REPAIR_BASIS[color]:
                if _coordinate(charge, mask, color):
                    bits[self._positions[(v, mask)]] = 1
        return bits


def _coordinate(label: int, mask: int, color: int) -> bool:
    """Coordonnée ``mask`` de la charge ``label`` dans la base du sommet de couleur ``color``."""
    first, second = REPAIR_BASIS[color]
    if label not in (first, second, first ^ second):
        raise ValueError(f"Charge {mask_name(label)} impossible sur un sommet {COLOR_NAMES[color]}")
    return label == mask or label == first ^ second
