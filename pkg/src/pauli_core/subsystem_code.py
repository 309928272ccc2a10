"""
Codes de stabilisateurs et de sous-système : syndromes, validité, table de
correction et décomposition canonique des erreurs.
"""

import itertools
import logging
import math
import threading
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from src.pauli_core.gf2 import GF2Solver, as_bits, rank
from src.pauli_core.pauli import PauliOperator, commutes, product, stack_symplectic
from src.utils.exceptions import DimensionError, IncompleteTableError, ResourceError

logger = logging.getLogger(__name__)

ENUMERATION_GUARD = 10 ** 8


class _BitSyndrome:
    """Ensemble de bits indexé par une liste de générateurs ; l'addition est le XOR."""

    __slots__ = ("bits",)

    def __init__(self, bits):
        self.bits = as_bits(bits).reshape(-1)
        self.bits.setflags(write=False)

    @classmethod
    def empty(cls, size: int):
        return cls(np.zeros(size, dtype=np.uint8))

    def __add__(self, other):
        if type(other) is not type(self) or other.bits.shape != self.bits.shape:
            raise DimensionError("Syndromes de tailles ou de natures différentes")
        return type(self)(self.bits ^ other.bits)

    def __eq__(self, other) -> bool:
        return type(other) is type(self) and np.array_equal(self.bits, other.bits)

    def __hash__(self) -> int:
        return hash((type(self).__name__, self.key()))

    def __len__(self) -> int:
        return int(self.bits.shape[0])

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.indices().tolist()})"

    def key(self) -> bytes:
        """Clé compacte : bits regroupés par octets, suivis de la longueur."""
        return np.packbits(self.bits).tobytes() + len(self).to_bytes(4, "little")

    def indices(self) -> np.ndarray:
        return np.flatnonzero(self.bits)

    def is_empty(self) -> bool:
        return not self.bits.any()

    @property
    def weight(self) -> int:
        return int(np.count_nonzero(self.bits))


class StabSyndrome(_BitSyndrome):
    """Syndrome d'erreur σ : sous-ensemble des générateurs de stabilisateurs."""


class GaugeSyndrome(_BitSyndrome):
    """Syndrome de jauge γ : sous-ensemble des générateurs de jauge."""


@dataclass(frozen=True)
class ErrorDecomposition:
    """Décomposition E = F(σ)·G·L d'une erreur."""

    corr: PauliOperator
    gauge_part: PauliOperator
    logical_part: PauliOperator

    def recompose(self) -> PauliOperator:
        return self.corr * self.gauge_part * self.logical_part

    @property
    def is_correctable(self) -> bool:
        return self.logical_part.is_identity()


def _anticommutation_bits(matrix: np.ndarray, n: int, e: PauliOperator) -> np.ndarray:
    """Pour chaque ligne (x | z) de ``matrix`` : 1 si elle anticommute avec ``e``."""
    if matrix.shape[0] == 0:
        return np.zeros(0, dtype=np.uint8)
    x_part = matrix[:, :n].astype(np.int64)
    z_part = matrix[:, n:].astype(np.int64)
    return ((x_part @ e.z_bits + z_part @ e.x_bits) % 2).astype(np.uint8)


class SubsystemCode:
    """
    Code de sous-système décrit par ses générateurs S₀, G₀ et ses
    représentants logiques ℒ.

    Les objets sont immuables après construction ; les matrices symplectiques
    et les solveurs GF(2) associés sont calculés à la demande et mis en cache.
    """

    def __init__(
        self,
        n: int,
        stab_gens: Sequence[PauliOperator],
        gauge_gens: Sequence[PauliOperator],
        logical_reps: Sequence[PauliOperator] = (),
        css_flag: bool = False,
        distance: Optional[int] = None,
        name: str = "",
    ):
        self.n = int(n)
        self.stab_gens = tuple(stab_gens)
        self.gauge_gens = tuple(gauge_gens)
        self.logical_reps = tuple(logical_reps)
        self.css_flag = bool(css_flag)
        self.distance = distance
        self.name = name
        self.stab_matrix = stack_symplectic(list(self.stab_gens), self.n)
        self.gauge_matrix = stack_symplectic(list(self.gauge_gens), self.n)
        self.logical_matrix = stack_symplectic(list(self.logical_reps), self.n)
        for m in (self.stab_matrix, self.gauge_matrix, self.logical_matrix):
            m.setflags(write=False)
        self._lock = threading.Lock()
        self._solvers: Dict[str, GF2Solver] = {}

    def __repr__(self) -> str:
        return (
            f"SubsystemCode(name='{self.name}', n={self.n}, |S0|={len(self.stab_gens)}, "
            f"|G0|={len(self.gauge_gens)}, |L|={len(self.logical_reps)})"
        )

    def _solver(self, kind: str) -> GF2Solver:
        with self._lock:
            if kind not in self._solvers:
                if kind == "syndrome":
                    # Sz·x + Sx·z = σ sur le vecteur (x | z)
                    n = self.n
                    matrix = np.hstack([self.stab_matrix[:, n:], self.stab_matrix[:, :n]])
                elif kind == "gauge_span":
                    matrix = self.gauge_matrix.T
                elif kind == "centralizer_span":
                    matrix = np.vstack([self.gauge_matrix, self.logical_matrix]).T
                elif kind == "stab_span":
                    matrix = self.stab_matrix.T
                else:
                    raise ValueError(f"Solveur inconnu: {kind}")
                self._solvers[kind] = GF2Solver(matrix)
            return self._solvers[kind]

    def check_dimension(self, e: PauliOperator):
        if e.n != self.n:
            raise DimensionError(f"Erreur sur {e.n} qubits pour un code à {self.n} qubits")

    def in_gauge_group(self, e: PauliOperator) -> bool:
        self.check_dimension(e)
        return self._solver("gauge_span").is_consistent(e.symplectic())

    def in_stabilizer_group(self, e: PauliOperator) -> bool:
        self.check_dimension(e)
        return self._solver("stab_span").is_consistent(e.symplectic())

    def check_invariants(self) -> List[str]:
        """
        Vérifier les relations structurelles entre S₀, G₀ et ℒ.

        Returns:
            Liste des violations (vide si le code est cohérent)
        """
        problems = []
        for i, s in enumerate(self.stab_gens):
            for j, g in enumerate(self.gauge_gens):
                if not commutes(s, g):
                    problems.append(f"stabilisateur {i} anticommute avec le générateur de jauge {j}")
            for j, l in enumerate(self.logical_reps):
                if not commutes(s, l):
                    problems.append(f"stabilisateur {i} anticommute avec le logique {j}")
            if not self.in_gauge_group(s):
                problems.append(f"stabilisateur {i} hors du groupe de jauge")
        for j, l in enumerate(self.logical_reps):
            for g_idx, g in enumerate(self.gauge_gens):
                if not commutes(l, g):
                    problems.append(f"logique {j} anticommute avec le générateur de jauge {g_idx}")
        # Paires conjuguées : (2i, 2i+1) anticommutent, toutes les autres paires commutent
        for a, b in itertools.combinations(range(len(self.logical_reps)), 2):
            expected_anti = (a // 2 == b // 2)
            anti = not commutes(self.logical_reps[a], self.logical_reps[b])
            if anti != expected_anti:
                problems.append(f"logiques {a} et {b} ne forment pas des paires conjuguées")
        return problems


def syndrome_of(e: PauliOperator, code: SubsystemCode) -> StabSyndrome:
    """
    Calculer le syndrome d'erreur σ(E).

    Args:
        e: Erreur de Pauli
        code: Code de sous-système

    Returns:
        Bits des générateurs de stabilisateurs qui anticommutent avec e
    """
    code.check_dimension(e)
    return StabSyndrome(_anticommutation_bits(code.stab_matrix, code.n, e))


def gauge_syndrome_of(e: PauliOperator, code: SubsystemCode) -> GaugeSyndrome:
    """Calculer le syndrome de jauge γ(E) sur les générateurs G₀."""
    code.check_dimension(e)
    return GaugeSyndrome(_anticommutation_bits(code.gauge_matrix, code.n, e))


def is_valid_syndrome(s: StabSyndrome, code: SubsystemCode) -> bool:
    """Un syndrome est valide s'il existe une erreur E avec σ(E) = s."""
    if len(s) != len(code.stab_gens):
        raise DimensionError(f"Syndrome de longueur {len(s)} pour {len(code.stab_gens)} stabilisateurs")
    if s.is_empty():
        return True
    return code._solver("syndrome").is_consistent(s.bits)


def error_with_syndrome(s: StabSyndrome, code: SubsystemCode) -> Optional[PauliOperator]:
    """Une erreur quelconque (solution particulière) de syndrome s, ou None."""
    solution = code._solver("syndrome").solve(s.bits)
    if solution is None:
        return None
    return PauliOperator.from_symplectic(solution)


def stabilizer_gauge_expressions(code: SubsystemCode) -> List[List[int]]:
    """
    Exprimer chaque générateur de stabilisateur comme produit de générateurs de jauge.

    Returns:
        Pour chaque s ∈ S₀, la liste des indices de G₀ dont le produit vaut s
    """
    solver = code._solver("gauge_span")
    expressions = []
    for i, s in enumerate(code.stab_gens):
        coeffs = solver.solve(s.symplectic())
        if coeffs is None:
            raise ValueError(f"Le stabilisateur {i} n'appartient pas au groupe de jauge")
        expressions.append(np.flatnonzero(coeffs).tolist())
    return expressions


def logical_count(code: SubsystemCode) -> int:
    """Nombre de qubits logiques k = n − (rang G + rang S)/2."""
    rank_g = rank(code.gauge_matrix)
    rank_s = rank(code.stab_matrix)
    return code.n - (rank_g + rank_s) // 2


class CorrectionTable:
    """
    Table de correction F(σ), remplie paresseusement.

    Les entrées proviennent d'un dictionnaire initial ou d'un solveur
    ``Callable[[StabSyndrome], PauliOperator]``. Chaque entrée est vérifiée
    (σ(F(σ)) = σ) avant d'être mise en cache ; l'accès est protégé par un verrou.
    """

    def __init__(
        self,
        code: SubsystemCode,
        entries: Optional[Dict[StabSyndrome, PauliOperator]] = None,
        solver: Optional[Callable[[StabSyndrome], PauliOperator]] = None,
    ):
        self.code = code
        self._solver = solver
        # Indexées par la clé compacte du syndrome
        self._entries: Dict[bytes, PauliOperator] = {}
        self._lock = threading.Lock()
        for sigma, corr in (entries or {}).items():
            self._store(sigma, corr)

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, sigma: StabSyndrome) -> bool:
        return sigma.key() in self._entries

    def _store(self, sigma: StabSyndrome, corr: PauliOperator):
        if syndrome_of(corr, self.code) != sigma:
            raise ValueError(f"La correction proposée pour {sigma} n'a pas ce syndrome")
        self._entries[sigma.key()] = corr

    def correction(self, sigma: StabSyndrome) -> PauliOperator:
        """
        Renvoyer F(σ).

        Raises:
            IncompleteTableError: si σ est absent et qu'aucun solveur n'est fourni
        """
        with self._lock:
            corr = self._entries.get(sigma.key())
            if corr is not None:
                return corr
            if self._solver is None:
                raise IncompleteTableError(f"Syndrome absent de la table: {sigma}")
            corr = self._solver(sigma)
            self._store(sigma, corr)
            return corr

    __getitem__ = correction

    @classmethod
    def canonical(cls, code: SubsystemCode) -> "CorrectionTable":
        """Table dont les entrées sont les solutions particulières de l'élimination."""

        def solve(sigma: StabSyndrome) -> PauliOperator:
            e = error_with_syndrome(sigma, code)
            if e is None:
                raise IncompleteTableError(f"Syndrome invalide, aucune correction: {sigma}")
            return e

        return cls(code, solver=solve)

    @classmethod
    def minimum_weight(cls, code: SubsystemCode, max_weight: Optional[int] = None, basis: str = "XYZ") -> "CorrectionTable":
        """
        Table de poids minimal obtenue par énumération des erreurs de poids croissant.

        Pour un code de répétition et ``basis="X"``, c'est le vote majoritaire.

        Args:
            code: Code (n petit)
            max_weight: Poids maximal énuméré (par défaut n)
            basis: Lettres de Pauli autorisées

        Returns:
            CorrectionTable complète pour tous les syndromes atteints
        """
        max_weight = code.n if max_weight is None else max_weight
        _check_enumeration_guard(code.n, max_weight, len(basis))
        entries: Dict[StabSyndrome, PauliOperator] = {}
        for e in _enumerate_errors(code.n, max_weight, basis, include_identity=True):
            sigma = syndrome_of(e, code)
            if sigma not in entries:
                entries[sigma] = e
        logger.info(f"Table de poids minimal: {len(entries)} syndromes pour {code!r}")
        return cls(code, entries=entries)


def decompose(e: PauliOperator, code: SubsystemCode, table: CorrectionTable) -> ErrorDecomposition:
    """
    Décomposer E en F(σ(E))·G·L.

    La partie logique L est la combinaison des représentants de ℒ obtenue par
    élimination de Gauss sur [G₀ ; ℒ] (pivots par indice croissant, variables
    libres à zéro).

    Args:
        e: Erreur à décomposer
        code: Code de sous-système
        table: Table de correction fournissant F(σ)

    Returns:
        ErrorDecomposition telle que corr·gauge_part·logical_part = e
    """
    sigma = syndrome_of(e, code)
    corr = table.correction(sigma)
    residual = corr * e
    coeffs = code._solver("centralizer_span").solve(residual.symplectic())
    if coeffs is None:
        raise ValueError(
            "Le reste F(σ)·E n'est pas engendré par G₀ et ℒ : représentants logiques incomplets"
        )
    logical_coeffs = coeffs[len(code.gauge_gens):]
    logical_part = product(
        [code.logical_reps[i] for i in np.flatnonzero(logical_coeffs)], n=code.n
    )
    gauge_part = residual * logical_part
    return ErrorDecomposition(corr=corr, gauge_part=gauge_part, logical_part=logical_part)


def _check_enumeration_guard(n: int, max_weight: int, letters: int):
    total = sum(math.comb(n, w) * letters ** w for w in range(max_weight + 1))
    if total > ENUMERATION_GUARD:
        raise ResourceError(
            f"Énumération trop grande: {total} erreurs (n={n}, poids ≤ {max_weight})"
        )


def _enumerate_errors(
    n: int, max_weight: int, basis: str, include_identity: bool = False
) -> Iterable[PauliOperator]:
    """Erreurs de poids croissant, supports en ordre lexicographique."""
    if include_identity:
        yield PauliOperator.identity(n)
    for w in range(1, max_weight + 1):
        for support in itertools.combinations(range(n), w):
            for letters in itertools.product(basis, repeat=w):
                x = [q for q, c in zip(support, letters) if c in ("X", "Y")]
                z = [q for q, c in zip(support, letters) if c in ("Z", "Y")]
                yield PauliOperator.from_support(n, x=x, z=z)


def code_distance_bruteforce(code: SubsystemCode, max_weight: int, basis: str = "XYZ") -> Optional[int]:
    """
    Distance par force brute : poids minimal d'un élément de C(S) − G.

    Args:
        code: Code de sous-système
        max_weight: Poids maximal examiné
        basis: Lettres de Pauli énumérées ("X" pour les seules inversions de bits)

    Returns:
        La distance si elle est ≤ max_weight, sinon None
    """
    if not set(basis) <= {"X", "Y", "Z"} or not basis:
        raise ValueError(f"Base de Pauli invalide: {basis}")
    _check_enumeration_guard(code.n, max_weight, len(basis))
    for e in _enumerate_errors(code.n, max_weight, basis):
        if syndrome_of(e, code).is_empty() and not code.in_gauge_group(e):
            logger.info(f"Distance {e.weight} atteinte par {e.to_string()}")
            return e.weight
    return None
