"""
Tour complet de correction single-shot du code de couleur de jauge :
extraction bruitée, réparation, décodage et fixation de jauge.
"""

import logging
from typing import Optional, Tuple

import numpy as np

from src.colex_lattice.complex import Colex
from src.colex_lattice.dual import DualLattice, dualize
from src.gauge_color_code.decoder import SyndromeDecoder
from src.gauge_color_code.flux import flux_clusters, gauge_syndrome_bits, stabilizer_syndrome_bits
from src.gauge_color_code.gauge_fixing import GaugeFixer
from src.gauge_color_code.repair import repair_gauge_syndrome
from src.utils.exceptions import NonSyndromeEvent
from src.utils.records import RoundRecord
from src.utils.seeding import SeedLike, make_rng

logger = logging.getLogger(__name__)


class GaugeRound:
    """
    Correction single-shot des erreurs X d'un code de couleur de jauge.

    L'état suivi d'un tour à l'autre est l'ensemble des qubits inversés ; le
    syndrome de jauge en découle. Les structures (réduction, solveur de
    jauge) sont calculées à la construction et partagées entre threads.

    Args:
        colex: Colex simple ou fermé
    """

    def __init__(self, colex: Colex):
        self.colex = colex
        self.dual: DualLattice = dualize(colex)
        self.decoder = SyndromeDecoder(self.dual)
        self.fixer = GaugeFixer(self.dual, self.decoder)
        free = [int(v) for v in np.flatnonzero(self.dual.is_external & ~self.dual.frozen)]
        self.logical_support: Optional[np.ndarray] = None
        if free:
            self.logical_support = self.dual.tetrahedra_contain_any([free[0]])

    @property
    def n_qubits(self) -> int:
        return self.dual.n_qubits

    def logical_flag(self, state: np.ndarray) -> bool:
        """L'état, corrigé avec un syndrome parfait, porte-t-il un X logique ?"""
        if self.logical_support is None:
            return False
        correction = self.decoder.decode_bits(stabilizer_syndrome_bits(state, self.dual))
        corrected = np.asarray(state, dtype=np.uint8) ^ correction
        return bool(corrected[self.logical_support].sum() % 2)

    def run(
        self,
        state: np.ndarray,
        lam: float,
        eta: float,
        seed: SeedLike = None,
        round_index: int = 0,
    ) -> Tuple[np.ndarray, RoundRecord]:
        """
        Un tour de correction.

        Args:
            state: Qubits inversés avant le tour
            lam: Taux d'inversion par qubit
            eta: Taux d'erreur par mesure de plaquette
            seed: Graine ou générateur
            round_index: Indice du tour

        Returns:
            (nouvel état, RoundRecord)
        """
        for name, value in (("lambda", lam), ("eta", eta)):
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} doit appartenir à [0, 1] (reçu {value})")
        rng = make_rng(seed)
        state = np.asarray(state, dtype=np.uint8) ^ (rng.random(self.n_qubits) < lam).astype(np.uint8)
        true_gamma = gauge_syndrome_bits(state, self.dual)
        w = (rng.random(self.dual.n_edges) < eta).astype(np.uint8)
        measured = true_gamma ^ w
        record = RoundRecord(round=round_index, w=int(w.sum()))
        try:
            delta0 = repair_gauge_syndrome(measured, self.dual)
            record.w0 = int(delta0.sum())
            correction, gauge = self.fixer.fix_bits(measured ^ delta0)
        except NonSyndromeEvent as e:
            logger.debug(f"Tour {round_index} interrompu: {e}")
            record.nonsyndrome_flag = True
            return state, record
        state = state ^ correction ^ gauge
        residual = gauge_syndrome_bits(state, self.dual)
        sizes = [int(c.size) for c in flux_clusters(residual, self.dual)]
        record.residual_weight = int(residual.sum())
        record.cluster_sizes = sizes
        record.largest_cluster = max(sizes, default=0)
        try:
            record.logical_flag = self.logical_flag(state)
        except NonSyndromeEvent:
            record.nonsyndrome_flag = True
        return state, record

    def logical_measurement_decode(self, state: np.ndarray, eta: float, seed: SeedLike = None) -> int:
        """
        Mesure transverse Z de chaque qubit (erreur de lecture η), correction
        idéale sur les résultats classiques puis lecture de Z̄.

        Returns:
            Bit logique lu

        Raises:
            ValueError: le code n'a pas de qubit logique
        """
        if self.logical_support is None:
            raise ValueError(f"Le colex '{self.colex.name}' n'encode aucun qubit logique")
        if not 0.0 <= eta <= 1.0:
            raise ValueError(f"eta doit appartenir à [0, 1] (reçu {eta})")
        rng = make_rng(seed)
        outcomes = np.asarray(state, dtype=np.uint8) ^ (rng.random(self.n_qubits) < eta).astype(np.uint8)
        correction = self.decoder.decode_bits(stabilizer_syndrome_bits(outcomes, self.dual))
        return int((outcomes ^ correction)[self.logical_support].sum() % 2)
