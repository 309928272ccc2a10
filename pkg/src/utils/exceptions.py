"""
Exceptions partagées par l'ensemble des modules de simulation.
"""


class DimensionError(ValueError):
    """Deux objets de Pauli (ou un objet et un code) n'ont pas le même nombre de qubits."""


class IncompleteTableError(KeyError):
    """La table de correction ne contient pas le syndrome demandé."""


class ResourceError(RuntimeError):
    """Une garde combinatoire (énumération, budget d'oracle, nombre de défauts) est dépassée."""


class InfeasibleMatchingError(ValueError):
    """Aucun couplage parfait n'existe (parité incompatible avec les nœuds de bord)."""


class ColorabilityError(ValueError):
    """La taille demandée ne permet pas un 4-coloriage cohérent du réseau."""


class UnsupportedChannelError(ValueError):
    """Opération non disponible pour ce mode de canal (par exemple un canal i.i.d.)."""


class ConfigError(ValueError):
    """
    Document de configuration invalide.

    Le chemin du champ fautif est conservé dans ``field_path``.
    """

    def __init__(self, field_path: str, message: str):
        self.field_path = field_path
        super().__init__(f"{field_path}: {message}")


class NonSyndromeEvent(Exception):
    """
    Violation d'une contrainte globale détectée pendant la correction.

    L'essai concerné est écarté par le harnais et comptabilisé à part.
    """

    def __init__(self, message: str = "", component=None):
        self.component = component
        super().__init__(message or "Événement non-syndrome")
