"""
Algèbre linéaire sur GF(2) appuyée sur ``galois``.

Les matrices circulent dans le reste du paquet sous forme de tableaux numpy
``uint8`` (0/1) ; la conversion vers ``galois.GF(2)`` est faite ici.
"""

import logging
from typing import Optional, Tuple

import galois
import numpy as np

logger = logging.getLogger(__name__)

GF2 = galois.GF(2)


def as_bits(matrix) -> np.ndarray:
    """Convertir un tableau (bool, int, scipy.sparse) en matrice 0/1 ``uint8``."""
    if hasattr(matrix, "toarray"):
        matrix = matrix.toarray()
    return (np.asarray(matrix) % 2).astype(np.uint8)


def to_field(matrix) -> galois.FieldArray:
    """Matrice 0/1 → tableau ``galois.GF(2)``."""
    return GF2(as_bits(matrix))


def row_reduce(matrix) -> np.ndarray:
    """Forme échelonnée réduite (RREF) d'une matrice sur GF(2)."""
    bits = as_bits(matrix)
    if bits.size == 0:
        return bits
    return np.asarray(to_field(bits).row_reduce(), dtype=np.uint8)


def rank(matrix) -> int:
    """Rang sur GF(2)."""
    bits = as_bits(matrix)
    if bits.size == 0:
        return 0
    return int(np.linalg.matrix_rank(to_field(bits)))


def pivot_columns(rref: np.ndarray) -> np.ndarray:
    """Colonnes pivots d'une matrice déjà réduite (une par ligne non nulle)."""
    nonzero = rref.any(axis=1)
    return np.argmax(rref[nonzero], axis=1)


def null_space(matrix) -> np.ndarray:
    """Base du noyau à droite (les lignes du résultat engendrent {x : A x = 0})."""
    bits = as_bits(matrix)
    if bits.shape[0] == 0:
        return np.eye(bits.shape[1], dtype=np.uint8)
    return np.asarray(to_field(bits).null_space(), dtype=np.uint8)


def mod2_matmul(a, b) -> np.ndarray:
    """Produit matriciel réduit modulo 2 (accepte scipy.sparse à gauche)."""
    if hasattr(a, "dot") and hasattr(a, "toarray"):
        product = a.dot(np.asarray(b, dtype=np.int64))
    else:
        product = np.asarray(a, dtype=np.int64) @ np.asarray(b, dtype=np.int64)
    return (np.asarray(product) % 2).astype(np.uint8)


class GF2Solver:
    """
    Solveur réutilisable de systèmes A x = b sur GF(2).

    La réduction de [A | I] est faite une seule fois : on obtient T inversible
    avec T·A = R en forme échelonnée réduite, puis chaque second membre b se
    résout par y = T·b.
    """

    def __init__(self, matrix):
        bits = as_bits(matrix)
        self.shape = bits.shape
        m, n = bits.shape
        if m == 0:
            self._transform = np.zeros((0, 0), dtype=np.uint8)
            self._reduced = bits
            self._pivot_rows = np.zeros(0, dtype=int)
            self._pivot_cols = np.zeros(0, dtype=int)
            self._zero_rows = np.zeros(0, dtype=int)
            return
        augmented = np.hstack([bits, np.eye(m, dtype=np.uint8)])
        reduced = row_reduce(augmented)
        self._reduced = reduced[:, :n]
        self._transform = reduced[:, n:]
        has_pivot = self._reduced.any(axis=1)
        self._pivot_rows = np.flatnonzero(has_pivot)
        self._pivot_cols = np.argmax(self._reduced[has_pivot], axis=1) if has_pivot.any() else np.zeros(0, dtype=int)
        self._zero_rows = np.flatnonzero(~has_pivot)

    @property
    def rank(self) -> int:
        return int(len(self._pivot_rows))

    def is_consistent(self, rhs) -> bool:
        """Le système A x = rhs admet-il une solution ?"""
        if self.shape[0] == 0:
            return not as_bits(rhs).any()
        y = mod2_matmul(self._transform, as_bits(rhs))
        return not y[self._zero_rows].any()

    def solve(self, rhs) -> Optional[np.ndarray]:
        """
        Résoudre A x = rhs.

        Args:
            rhs: Second membre (longueur égale au nombre de lignes de A)

        Returns:
            Une solution particulière (variables libres à 0), ou None si le
            système est incompatible
        """
        rhs_bits = as_bits(rhs).reshape(-1)
        if rhs_bits.shape[0] != self.shape[0]:
            raise ValueError(
                f"Second membre de longueur {rhs_bits.shape[0]} pour {self.shape[0]} équations"
            )
        solution = np.zeros(self.shape[1], dtype=np.uint8)
        if self.shape[0] == 0:
            return solution
        y = mod2_matmul(self._transform, rhs_bits)
        if y[self._zero_rows].any():
            return None
        solution[self._pivot_cols] = y[self._pivot_rows]
        return solution


def solve(matrix, rhs) -> Optional[np.ndarray]:
    """Résolution ponctuelle de A x = b (voir ``GF2Solver``)."""
    return GF2Solver(matrix).solve(rhs)


def independent_rows(matrix) -> Tuple[np.ndarray, np.ndarray]:
    """
    Sélectionner, dans l'ordre, les lignes qui augmentent le rang.

    Returns:
        (indices retenus, sous-matrice correspondante)
    """
    bits = as_bits(matrix)
    if bits.shape[0] == 0:
        return np.zeros(0, dtype=int), bits
    # Les pivots de la réduction de A^T repèrent les colonnes de A^T (= lignes de A)
    # indépendantes, en privilégiant les plus petits indices.
    pivots = pivot_columns(row_reduce(bits.T))
    kept = np.sort(pivots)
    return kept, bits[kept]
