"""
Opérateurs de Pauli en représentation binaire symplectique (phase ignorée).
"""

import logging
from typing import Iterable, List, Optional

import numpy as np

from src.utils.exceptions import DimensionError

logger = logging.getLogger(__name__)

_LETTERS = {(0, 0): "I", (1, 0): "X", (0, 1): "Z", (1, 1): "Y"}
_BITS = {letter: bits for bits, letter in _LETTERS.items()}


class PauliOperator:
    """
    Erreur de Pauli sur n qubits, décrite par ses parties X et Z.

    Le produit de deux opérateurs est le XOR des deux parties ; chaque
    opérateur est son propre inverse dans cette représentation.
    """

    __slots__ = ("n", "x_bits", "z_bits")

    def __init__(self, x_bits, z_bits=None):
        x = np.asarray(x_bits, dtype=np.uint8) % 2
        z = np.zeros_like(x) if z_bits is None else np.asarray(z_bits, dtype=np.uint8) % 2
        if x.ndim != 1 or z.shape != x.shape:
            raise DimensionError(f"Parties X et Z incompatibles: {x.shape} / {z.shape}")
        self.n = int(x.shape[0])
        self.x_bits = x
        self.z_bits = z
        self.x_bits.setflags(write=False)
        self.z_bits.setflags(write=False)

    # Constructeurs

    @classmethod
    def identity(cls, n: int) -> "PauliOperator":
        return cls(np.zeros(n, dtype=np.uint8))

    @classmethod
    def from_support(
        cls, n: int, x: Optional[Iterable[int]] = None, z: Optional[Iterable[int]] = None
    ) -> "PauliOperator":
        """
        Construire un opérateur à partir des indices de ses supports X et Z.

        Args:
            n: Nombre de qubits
            x: Indices où agit une composante X
            z: Indices où agit une composante Z

        Returns:
            PauliOperator correspondant
        """
        x_bits = np.zeros(n, dtype=np.uint8)
        z_bits = np.zeros(n, dtype=np.uint8)
        for i in x or ():
            x_bits[i] ^= 1
        for i in z or ():
            z_bits[i] ^= 1
        return cls(x_bits, z_bits)

    @classmethod
    def single(cls, n: int, qubit: int, letter: str) -> "PauliOperator":
        """Opérateur X, Y ou Z sur un seul qubit."""
        if letter not in ("X", "Y", "Z"):
            raise ValueError(f"Lettre de Pauli inconnue: {letter}")
        xb, zb = _BITS[letter]
        return cls.from_support(n, x=[qubit] if xb else [], z=[qubit] if zb else [])

    @classmethod
    def from_string(cls, text: str) -> "PauliOperator":
        """Lire une chaîne du type ``"XIZY"``."""
        try:
            bits = [_BITS[c] for c in text.strip().upper()]
        except KeyError as e:
            raise ValueError(f"Caractère invalide dans la chaîne de Pauli: {e}")
        x = np.array([b[0] for b in bits], dtype=np.uint8)
        z = np.array([b[1] for b in bits], dtype=np.uint8)
        return cls(x, z)

    # Algèbre

    def __mul__(self, other: "PauliOperator") -> "PauliOperator":
        _check_same_n(self, other)
        return PauliOperator(self.x_bits ^ other.x_bits, self.z_bits ^ other.z_bits)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PauliOperator):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.x_bits, other.x_bits)
            and np.array_equal(self.z_bits, other.z_bits)
        )

    def __hash__(self) -> int:
        return hash((self.n, self.x_bits.tobytes(), self.z_bits.tobytes()))

    def __repr__(self) -> str:
        return f"PauliOperator('{self.to_string()}')"

    def key(self) -> bytes:
        """Clé compacte, utilisée pour indexer les canaux explicites."""
        return np.packbits(np.concatenate([self.x_bits, self.z_bits])).tobytes() + self.n.to_bytes(4, "little")

    def to_string(self) -> str:
        return "".join(_LETTERS[(int(a), int(b))] for a, b in zip(self.x_bits, self.z_bits))

    def symplectic(self) -> np.ndarray:
        """Vecteur (x | z) de longueur 2n."""
        return np.concatenate([self.x_bits, self.z_bits])

    @classmethod
    def from_symplectic(cls, vector) -> "PauliOperator":
        vec = np.asarray(vector, dtype=np.uint8) % 2
        if vec.shape[0] % 2:
            raise DimensionError("Un vecteur symplectique doit être de longueur paire")
        half = vec.shape[0] // 2
        return cls(vec[:half], vec[half:])

    @property
    def support(self) -> np.ndarray:
        return np.flatnonzero(self.x_bits | self.z_bits)

    @property
    def weight(self) -> int:
        return int(np.count_nonzero(self.x_bits | self.z_bits))

    def is_identity(self) -> bool:
        return not (self.x_bits.any() or self.z_bits.any())

    def x_part(self) -> "PauliOperator":
        return PauliOperator(self.x_bits)

    def z_part(self) -> "PauliOperator":
        return PauliOperator(np.zeros_like(self.z_bits), self.z_bits)


def _check_same_n(p: PauliOperator, q: PauliOperator):
    if p.n != q.n:
        raise DimensionError(f"Nombres de qubits différents: {p.n} et {q.n}")


def symplectic_product(p: PauliOperator, q: PauliOperator) -> int:
    """x_p·z_q + z_p·x_q mod 2."""
    _check_same_n(p, q)
    return int((np.dot(p.x_bits, q.z_bits) + np.dot(p.z_bits, q.x_bits)) % 2)


def commutes(p: PauliOperator, q: PauliOperator) -> bool:
    """
    Tester si deux opérateurs de Pauli commutent.

    Args:
        p: Premier opérateur
        q: Second opérateur

    Returns:
        True si le produit symplectique est nul
    """
    return symplectic_product(p, q) == 0


def product(ops: Iterable[PauliOperator], n: Optional[int] = None) -> PauliOperator:
    """Produit (XOR) d'une famille d'opérateurs ; identité si la famille est vide."""
    ops = list(ops)
    if not ops:
        if n is None:
            raise ValueError("Produit vide sans nombre de qubits")
        return PauliOperator.identity(n)
    x = np.zeros(ops[0].n, dtype=np.uint8)
    z = np.zeros(ops[0].n, dtype=np.uint8)
    for op in ops:
        _check_same_n(ops[0], op)
        x ^= op.x_bits
        z ^= op.z_bits
    return PauliOperator(x, z)


def stack_symplectic(ops: List[PauliOperator], n: int) -> np.ndarray:
    """Matrice dont les lignes sont les vecteurs (x | z) des opérateurs."""
    if not ops:
        return np.zeros((0, 2 * n), dtype=np.uint8)
    for op in ops:
        if op.n != n:
            raise DimensionError(f"Opérateur sur {op.n} qubits pour un code à {n} qubits")
    return np.vstack([op.symplectic() for op in ops])
