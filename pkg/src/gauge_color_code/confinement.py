"""
Témoins de K-confinement et neutralité des composantes d'un flux.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Tuple

import numpy as np

from src.colex_lattice.dual import DualLattice
from src.gauge_color_code.charges import ChargeLabel, vertex_charge
from src.gauge_color_code.flux import FluxConfig, err_of, flux_clusters
from src.pauli_core.gf2 import GF2Solver, as_bits
from src.pauli_core.pauli import PauliOperator
from src.utils.exceptions import NonSyndromeEvent

logger = logging.getLogger(__name__)


def confinement_constant(dual: DualLattice) -> int:
    """K : taille maximale du support d'un stabilisateur local."""
    sizes = np.asarray(dual.stabilizer_matrix.sum(axis=1)).ravel()
    return int(sizes.max()) if sizes.size else 0


def _touched_internal(flux: FluxConfig, dual: DualLattice) -> List[int]:
    touched = set()
    for j in np.flatnonzero(flux):
        for v in dual.edges[j]:
            if not dual.is_external[v]:
                touched.add(int(v))
    return sorted(touched)


def k_confinement_witness(flux: FluxConfig, dual: DualLattice) -> Tuple[PauliOperator, Fraction]:
    """
    Construire E de syndrome err(γ) supporté par les cellules des sommets internes de γ.

    Un flux valide a un degré au moins 2 en chaque sommet interne touché ; il
    touche donc au plus |γ| sommets internes et |supp E| ≤ K|γ|.

    Returns:
        (E, |supp E| / max(1, |γ|))

    Raises:
        NonSyndromeEvent: aucune solution dans ce support (neutralisation impossible)
    """
    flux = np.asarray(flux, dtype=np.uint8)
    sigma = err_of(flux, dual).bits
    weight = int(flux.sum())
    if not sigma.any():
        return PauliOperator.identity(dual.n_qubits), Fraction(0, 1)
    touched = _touched_internal(flux, dual)
    columns = np.flatnonzero(dual.tetrahedra_contain_any(touched))
    solution = GF2Solver(as_bits(dual.stabilizer_matrix)[:, columns]).solve(sigma)
    if solution is None:
        raise NonSyndromeEvent("Flux non neutralisable dans le support de ses cellules", component=touched)
    bits = np.zeros(dual.n_qubits, dtype=np.uint8)
    bits[columns[np.flatnonzero(solution)]] = 1
    ratio = Fraction(int(bits.sum()), max(1, weight))
    return PauliOperator(bits), ratio


@dataclass
class ComponentCharge:
    """Charge totale des points de branchement et de terminaison d'une composante."""

    edges: np.ndarray
    points: List[int]
    total: ChargeLabel
    touches_region: bool

    @property
    def neutral(self) -> bool:
        return self.total.is_zero()


def neutralization_check(flux: FluxConfig, dual: DualLattice) -> List[ComponentCharge]:
    """
    Pour chaque composante connexe d'un flux valide, charge totale (groupe des
    charges de sommet) de ses points de branchement et de terminaison.

    Une composante qui ne touche aucune région est toujours neutre.
    """
    flux = np.asarray(flux, dtype=np.uint8)
    report = []
    for component in flux_clusters(flux, dual):
        part = np.zeros_like(flux)
        part[component] = 1
        sigma = err_of(part, dual).bits
        points = [int(dual.stabilizer_vertices[i]) for i in np.flatnonzero(sigma)]
        ends = set(int(v) for v in dual.edges[component].ravel())
        touches = any(dual.is_external[v] for v in ends)
        report.append(ComponentCharge(component, points, vertex_charge(points, dual), touches))
    unbalanced = [c for c in report if not c.neutral and not c.touches_region]
    if unbalanced:
        logger.warning(f"{len(unbalanced)} composante(s) intérieure(s) non neutre(s)")
    return report
