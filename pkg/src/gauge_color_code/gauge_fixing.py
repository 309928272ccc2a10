"""
Fixation de jauge de type Z après un tour de mesures single-shot.
"""

import logging
from typing import Optional, Tuple

import numpy as np

from src.colex_lattice.dual import DualLattice
from src.gauge_color_code.decoder import SyndromeDecoder, get_decoder
from src.gauge_color_code.flux import FluxConfig, err_of, gauge_syndrome_bits
from src.pauli_core.gf2 import GF2Solver, as_bits, mod2_matmul
from src.pauli_core.pauli import PauliOperator
from src.utils.exceptions import NonSyndromeEvent

logger = logging.getLogger(__name__)


class GaugeFixer:
    """
    Correction et fixation de jauge à partir d'un syndrome de jauge réparé.

    Le syndrome Z d'un opérateur de jauge X G = ∏ X_p^{c_p} vaut (P·Pᵀ)·c ;
    la matrice P·Pᵀ est réduite une fois pour toutes.
    """

    def __init__(self, dual: DualLattice, decoder: Optional[SyndromeDecoder] = None):
        self.dual = dual
        self.decoder = decoder or get_decoder(dual)
        self._plaquettes = as_bits(dual.plaquette_matrix)
        overlap = mod2_matmul(self._plaquettes, self._plaquettes.T)
        self._solver = GF2Solver(overlap)

    def fix_bits(self, gamma_eff: FluxConfig) -> Tuple[np.ndarray, np.ndarray]:
        """
        Args:
            gamma_eff: Syndrome de jauge réparé (valide)

        Returns:
            (qubits de la correction E, qubits de l'opérateur de jauge G)

        Raises:
            NonSyndromeEvent: syndrome invalide ou fixation impossible
        """
        gamma_eff = np.asarray(gamma_eff, dtype=np.uint8)
        correction = self.decoder.decode_bits(err_of(gamma_eff, self.dual).bits)
        target = gamma_eff ^ gauge_syndrome_bits(correction, self.dual)
        coefficients = self._solver.solve(target)
        if coefficients is None:
            raise NonSyndromeEvent("Aucun opérateur de jauge ne fixe le syndrome demandé")
        gauge = mod2_matmul(self._plaquettes.T, coefficients)
        return correction, gauge


def gauge_fix(gamma_eff: FluxConfig, dual: DualLattice, fixer: Optional[GaugeFixer] = None) -> Tuple[PauliOperator, PauliOperator]:
    """
    Correction de type X et opérateur de jauge X.

    Après application de E puis G, le syndrome de jauge Z de l'état vaut
    γ + gamma_eff, c'est-à-dire δ_eff.
    """
    fixer = fixer or GaugeFixer(dual)
    correction, gauge = fixer.fix_bits(gamma_eff)
    return PauliOperator(correction), PauliOperator(gauge)
