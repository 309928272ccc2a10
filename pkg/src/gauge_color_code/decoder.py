"""
Décodage du syndrome d'erreur par couplage sur le graphe dérivé.
"""

import logging
import threading
from functools import lru_cache

import numpy as np

from src.colex_lattice.dual import DualLattice
from src.gauge_color_code.reduction import SyndromeReduction
from src.pauli_core.pauli import PauliOperator
from src.pauli_core.subsystem_code import StabSyndrome
from src.utils.exceptions import NonSyndromeEvent

logger = logging.getLogger(__name__)

DECODER_CACHE_SIZE = 8


class SyndromeDecoder:
    """
    Décodeur du syndrome Z d'un code de couleur de jauge.

    La réduction est calculée une fois ; ``decode_bits`` est réentrant.
    """

    def __init__(self, dual: DualLattice):
        self.dual = dual
        self.reduction = SyndromeReduction(dual)

    @property
    def a(self) -> int:
        return self.reduction.reduction.a

    @property
    def b(self) -> int:
        return self.reduction.reduction.b

    def decode_bits(self, sigma_bits) -> np.ndarray:
        """
        Trouver un ensemble de qubits inversés de syndrome ``sigma_bits``.

        Args:
            sigma_bits: Syndrome sur ``dual.stabilizer_vertices``

        Returns:
            Indicatrice des qubits à inverser

        Raises:
            NonSyndromeEvent: syndrome invalide (contrainte globale violée)
        """
        sigma = np.asarray(sigma_bits, dtype=np.uint8)
        if sigma.shape[0] != self.reduction.size:
            raise ValueError(f"Syndrome de longueur {sigma.shape[0]} pour {self.reduction.size} stabilisateurs")
        if not sigma.any():
            return np.zeros(self.dual.n_qubits, dtype=np.uint8)
        if not self.reduction.is_valid(sigma):
            raise NonSyndromeEvent("Syndrome d'erreur invalide")
        return self.reduction.match(sigma)

    def decode(self, sigma: StabSyndrome, basis: str = "X") -> PauliOperator:
        """
        Correction de type ``basis`` : le secteur Z se décode comme le secteur X,
        les stabilisateurs X et Z ayant les mêmes supports.
        """
        flips = self.decode_bits(sigma.bits)
        if basis == "X":
            return PauliOperator(flips)
        if basis == "Z":
            return PauliOperator(np.zeros_like(flips), flips)
        raise ValueError(f"Type de correction inconnu: {basis}")


_DECODERS_LOCK = threading.Lock()


@lru_cache(maxsize=DECODER_CACHE_SIZE)
def _cached_decoder(dual: DualLattice) -> SyndromeDecoder:
    return SyndromeDecoder(dual)


def get_decoder(dual: DualLattice) -> SyndromeDecoder:
    """
    Décodeur partagé d'un réseau dual (construit au premier appel).

    Les décodeurs sont gardés pour les ``DECODER_CACHE_SIZE`` réseaux les plus
    récemment utilisés ; la construction se fait sous verrou.
    """
    with _DECODERS_LOCK:
        return _cached_decoder(dual)


def decode_syndrome(sigma: StabSyndrome, dual: DualLattice, basis: str = "X") -> PauliOperator:
    """
    Décoder un syndrome : erreur de type ``basis`` dont le syndrome vaut exactement ``sigma``.

    Args:
        sigma: Syndrome indexé par ``dual.stabilizer_vertices``
        dual: Réseau dual
        basis: "X" (syndrome des stabilisateurs Z) ou "Z" (syndrome des stabilisateurs X)
    """
    return get_decoder(dual).decode(sigma, basis)
