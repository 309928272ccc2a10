"""
Réparation d'un syndrome de jauge mesuré avec des erreurs.
"""

import logging
import threading
from functools import lru_cache
from typing import Dict, List, Set

import numpy as np

from src.colex_lattice.complex import label_name
from src.colex_lattice.dual import DualLattice
from src.gauge_color_code.charges import charge_of
from src.gauge_color_code.flux import FluxConfig, empty_flux, label_parity
from src.gauge_color_code.reduction import RepairReduction
from src.matching.tjoin import t_join
from src.pauli_core.gf2 import mod2_matmul
from src.utils.exceptions import InfeasibleMatchingError, NonSyndromeEvent

logger = logging.getLogger(__name__)

REDUCTION_CACHE_SIZE = 8

_REDUCTIONS_LOCK = threading.Lock()


@lru_cache(maxsize=REDUCTION_CACHE_SIZE)
def _cached_reduction(dual: DualLattice) -> RepairReduction:
    return RepairReduction(dual)


def get_repair_reduction(dual: DualLattice) -> RepairReduction:
    """Réduction de réparation partagée d'un réseau dual (construite au premier appel, sous verrou)."""
    with _REDUCTIONS_LOCK:
        return _cached_reduction(dual)


def repair_gauge_syndrome(measured: FluxConfig, dual: DualLattice) -> FluxConfig:
    """
    Réparer un syndrome de jauge mesuré.

    La carte des charges est exprimée sur les nœuds de ``RepairReduction``
    (générateurs rg, gb et by) ; un T-join minimal dans le graphe dérivé,
    où le bord absorbe les charges près des régions, est relevé en arêtes
    du dual. |δ₀| vaut au plus ``ratio_bound`` fois la réparation optimale.

    Args:
        measured: Syndrome de jauge mesuré
        dual: Réseau dual

    Returns:
        δ₀ tel que measured + δ₀ soit valide ; δ₀ ne dépend que de la carte des charges

    Raises:
        NonSyndromeEvent: charge résiduelle impossible à neutraliser
    """
    charges = charge_of(measured, dual)
    defects = charges.defects()
    if not defects:
        return empty_flux(dual)
    reduction = get_repair_reduction(dual)
    target = reduction.node_bits(charges)
    try:
        delta0 = reduction.match(target)
    except NonSyndromeEvent as e:
        raise NonSyndromeEvent(str(e), component=sorted(defects)) from e
    if not np.array_equal(mod2_matmul(reduction.check_matrix, delta0), target):
        raise RuntimeError("La réparation ne neutralise pas la carte des charges")
    logger.debug(f"Réparation: {len(defects)} défauts, |δ₀|={int(delta0.sum())}")
    return delta0


def _label_t_join(dual: DualLattice, mask: int, terminals: List[int]) -> Set[int]:
    """T-join dans le sous-graphe d'une étiquette ; les régions absorbent la charge."""
    graph = dual.label_graphs[mask]
    absorbers = [v for v in graph.nodes if dual.is_external[v]]
    isolated = [v for v in terminals if v not in graph]
    if isolated:
        raise NonSyndromeEvent(f"Sommets sans arête d'étiquette adaptée: {isolated}", component=isolated)
    try:
        return t_join(graph, terminals, absorbers=absorbers)
    except InfeasibleMatchingError as e:
        raise NonSyndromeEvent(
            f"Charge {label_name([c for c in range(4) if mask >> c & 1])} non neutralisable: {e}",
            component=terminals,
        ) from e


def simplified_flux_repair(measured: FluxConfig, dual: DualLattice) -> FluxConfig:
    """
    Réparation étiquette par étiquette, sans calcul de charge.

    Valable sous la promesse qu'aucun point de branchement n'est présent :
    chaque étiquette est traitée comme un flux Z₂ indépendant.
    """
    measured = np.asarray(measured, dtype=np.uint8)
    terminals: Dict[int, Set[int]] = {}
    for j in np.flatnonzero(measured):
        mask = int(dual.edge_masks[j])
        for v in dual.edges[j]:
            v = int(v)
            if not dual.is_external[v] and label_parity(measured, dual, v, mask):
                terminals.setdefault(mask, set()).add(v)
    delta0 = empty_flux(dual)
    for mask in sorted(terminals):
        for j in _label_t_join(dual, mask, sorted(terminals[mask])):
            delta0[j] ^= 1
    return delta0
