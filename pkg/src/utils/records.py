"""
Enregistrement d'un tour de correction, commun aux familles de codes.
"""

from dataclasses import dataclass, field
from typing import List


@dataclass
class RoundRecord:
    """
    Mesures d'un tour de correction « single-shot ».

    Attributes:
        round: Indice du tour (à partir de 0)
        w: Poids des erreurs de mesure |w|
        w0: Poids de la réparation |w₀|
        residual_weight: Poids du syndrome résiduel
        largest_cluster: Taille du plus grand amas du syndrome résiduel
        nonsyndrome_flag: Un événement non-syndrome a interrompu le tour
        logical_flag: L'erreur résiduelle, corrigée idéalement, est logique
        tie_flag: Égalité exacte lors du classement logique
        cluster_sizes: Tailles de tous les amas résiduels (hors CSV)
    """

    round: int
    w: int = 0
    w0: int = 0
    residual_weight: int = 0
    largest_cluster: int = 0
    nonsyndrome_flag: bool = False
    logical_flag: bool = False
    tie_flag: bool = False
    cluster_sizes: List[int] = field(default_factory=list)
