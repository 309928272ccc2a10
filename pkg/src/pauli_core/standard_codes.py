"""
Petits codes de référence utilisés par les tests et les oracles.
"""

from src.pauli_core.pauli import PauliOperator
from src.pauli_core.subsystem_code import SubsystemCode


def repetition_code(n: int, periodic: bool = False) -> SubsystemCode:
    """
    Code de répétition contre les inversions de bits.

    Contrôles Z_iZ_{i+1} (plus Z_{n-1}Z_0 pour l'anneau), logiques X^{⊗n} et Z_0.

    Args:
        n: Nombre de qubits (≥ 2)
        periodic: Chaîne fermée en anneau

    Returns:
        SubsystemCode de stabilisateurs (G₀ = S₀)
    """
    if n < 2:
        raise ValueError("Un code de répétition demande au moins 2 qubits")
    pairs = [(i, i + 1) for i in range(n - 1)]
    if periodic:
        pairs.append((n - 1, 0))
    checks = [PauliOperator.from_support(n, z=list(p)) for p in pairs]
    logicals = [
        PauliOperator.from_support(n, x=range(n)),
        PauliOperator.from_support(n, z=[0]),
    ]
    kind = "anneau" if periodic else "chaîne"
    return SubsystemCode(n, checks, checks, logicals, css_flag=True, name=f"répétition-{kind}-{n}")
