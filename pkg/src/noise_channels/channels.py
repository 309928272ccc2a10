"""
Canaux de Pauli : échantillonnage, composition, réduction et probabilité
d'échec de la correction idéale.
"""

import itertools
import logging
import math
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np
from statsmodels.stats.proportion import proportion_confint

from src.pauli_core.pauli import PauliOperator
from src.pauli_core.subsystem_code import (
    CorrectionTable,
    StabSyndrome,
    SubsystemCode,
    decompose,
    syndrome_of,
)
from src.utils.exceptions import DimensionError, ResourceError, UnsupportedChannelError
from src.utils.seeding import SeedLike, make_rng

logger = logging.getLogger(__name__)

TOLERANCE = 1e-12
MAX_EXPANDED_TERMS = 1 << 20

EXPLICIT = "explicit"
IID_FLIP = "iid-flip"
IID_DEPOLARIZING = "iid-depolarizing"
SUPPORT_MODES = (EXPLICIT, IID_FLIP, IID_DEPOLARIZING)


class PauliChannel:
    """
    Canal de Pauli sur n qubits.

    En mode explicite, les termes sont stockés dans un dictionnaire indexé par
    ``PauliOperator.key()`` ; les probabilités d'un même opérateur sont fusionnées.
    """

    def __init__(self, n: int, support_mode: str, entries: Optional[Iterable[Tuple[float, PauliOperator]]] = None, rate: float = 0.0):
        if support_mode not in SUPPORT_MODES:
            raise ValueError(f"Mode de canal inconnu: {support_mode}")
        self.n = int(n)
        self.support_mode = support_mode
        self.rate = float(rate)
        self._terms: Dict[bytes, Tuple[PauliOperator, float]] = {}
        if support_mode == EXPLICIT:
            grouped: Dict[bytes, List[float]] = {}
            ops: Dict[bytes, PauliOperator] = {}
            for prob, op in entries or ():
                if op.n != self.n:
                    raise DimensionError(f"Terme sur {op.n} qubits dans un canal à {self.n} qubits")
                key = op.key()
                ops.setdefault(key, op)
                grouped.setdefault(key, []).append(float(prob))
            self._terms = {key: (ops[key], math.fsum(ps)) for key, ps in grouped.items()}
        elif not 0.0 <= self.rate <= 1.0:
            raise ValueError(f"Taux {self.rate} hors de [0, 1]")

    # Constructeurs

    @classmethod
    def explicit(cls, n: int, entries: Iterable[Tuple[float, PauliOperator]]) -> "PauliChannel":
        return cls(n, EXPLICIT, entries=entries)

    @classmethod
    def identity(cls, n: int) -> "PauliChannel":
        return cls.explicit(n, [(1.0, PauliOperator.identity(n))])

    @classmethod
    def iid_flip(cls, n: int, rate: float) -> "PauliChannel":
        return cls(n, IID_FLIP, rate=rate)

    @classmethod
    def iid_depolarizing(cls, n: int, rate: float) -> "PauliChannel":
        return cls(n, IID_DEPOLARIZING, rate=rate)

    # Accès

    @property
    def is_explicit(self) -> bool:
        return self.support_mode == EXPLICIT

    def terms(self) -> List[Tuple[float, PauliOperator]]:
        """Termes (probabilité, opérateur) du canal explicite, dans l'ordre des clés."""
        self._require_explicit("terms")
        return [(p, op) for key, (op, p) in sorted(self._terms.items())]

    def probability(self, op: PauliOperator) -> float:
        self._require_explicit("probability")
        return self._terms.get(op.key(), (op, 0.0))[1]

    def total_probability(self) -> float:
        self._require_explicit("total_probability")
        return math.fsum(p for _, p in self._terms.values())

    def validate(self):
        """Vérifier la positivité et la normalisation (tolérance 1e-12)."""
        if not self.is_explicit:
            return
        if any(p < -TOLERANCE for _, p in self._terms.values()):
            raise ValueError("Probabilité négative dans le canal")
        total = self.total_probability()
        if abs(total - 1.0) > TOLERANCE:
            raise ValueError(f"Canal non normalisé: somme des probabilités {total}")

    def _require_explicit(self, operation: str):
        if not self.is_explicit:
            raise UnsupportedChannelError(
                f"'{operation}' demande un canal explicite (mode {self.support_mode}); utiliser expand() ou Monte Carlo"
            )

    def expand(self) -> "PauliChannel":
        """
        Développer un canal i.i.d. en canal explicite (n petit uniquement).

        Returns:
            Canal explicite équivalent
        """
        if self.is_explicit:
            return self
        letters = ("X",) if self.support_mode == IID_FLIP else ("X", "Y", "Z")
        size = (len(letters) + 1) ** self.n
        if size > MAX_EXPANDED_TERMS:
            raise ResourceError(f"Développement de {size} termes refusé (n={self.n})")
        per_letter = self.rate if self.support_mode == IID_FLIP else self.rate / 3
        choices = ("I",) + letters
        entries = []
        for word in itertools.product(choices, repeat=self.n):
            active = sum(1 for c in word if c != "I")
            prob = (per_letter ** active) * ((1.0 - self.rate) ** (self.n - active))
            entries.append((prob, PauliOperator.from_string("".join(word))))
        return PauliChannel.explicit(self.n, entries)


@dataclass(frozen=True)
class LocalNoiseSpec:
    """Bruit local d'intensité λ par qubit (classe des canaux λ-bornés)."""

    lam: float

    def __post_init__(self):
        if not 0.0 <= self.lam <= 1.0:
            raise ValueError(f"lambda doit appartenir à [0, 1] (reçu {self.lam})")

    def channel(self, n: int) -> PauliChannel:
        return PauliChannel.iid_flip(n, self.lam)


@dataclass(frozen=True)
class RecoveryModel:
    """Récupération bruitée : chaque résultat de mesure est faux avec probabilité η."""

    eta: float

    def __post_init__(self):
        if not 0.0 <= self.eta <= 1.0:
            raise ValueError(f"eta doit appartenir à [0, 1] (reçu {self.eta})")


@dataclass(frozen=True)
class NoiseClassParams:
    """Paramètres (τ, ε, τ′, δ) d'une classe de bruit ; comptabilité uniquement."""

    tau: float = 0.0
    epsilon: float = 0.0
    tau_prime: float = 0.0
    delta: float = 0.0

    def __post_init__(self):
        for name in ("tau", "epsilon", "tau_prime", "delta"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} doit être positif")
        if self.epsilon > 1:
            raise ValueError("epsilon doit appartenir à [0, 1]")


def sample(channel: PauliChannel, seed: SeedLike = None) -> PauliOperator:
    """
    Tirer une erreur selon le canal.

    Args:
        channel: Canal normalisé
        seed: Graine ou générateur

    Returns:
        PauliOperator tiré
    """
    rng = make_rng(seed)
    n = channel.n
    if channel.support_mode == IID_FLIP:
        return PauliOperator(rng.random(n) < channel.rate)
    if channel.support_mode == IID_DEPOLARIZING:
        hit = rng.random(n) < channel.rate
        letter = rng.integers(0, 3, size=n)  # 0: X, 1: Y, 2: Z
        x = hit & (letter <= 1)
        z = hit & (letter >= 1)
        return PauliOperator(x, z)
    channel.validate()
    terms = channel.terms()
    probs = np.array([p for p, _ in terms])
    idx = rng.choice(len(terms), p=probs / probs.sum())
    return terms[idx][1]


def compose(a: PauliChannel, b: PauliChannel) -> PauliChannel:
    """Composition a∘b : convolution des distributions d'erreurs de Pauli."""
    if a.n != b.n:
        raise DimensionError(f"Canaux sur {a.n} et {b.n} qubits")
    a, b = a.expand(), b.expand()
    entries = [(pa * pb, ea * eb) for pa, ea in a.terms() for pb, eb in b.terms()]
    return PauliChannel.explicit(a.n, entries)


def syndrome_distribution(channel: PauliChannel, code: SubsystemCode) -> Dict[StabSyndrome, float]:
    """Distribution q(σ) des syndromes d'un canal explicite."""
    channel._require_explicit("syndrome_distribution")
    grouped: Dict[StabSyndrome, List[float]] = {}
    for p, e in channel.terms():
        grouped.setdefault(syndrome_of(e, code), []).append(p)
    return {sigma: math.fsum(ps) for sigma, ps in grouped.items()}


def fail_probability_exact(channel: PauliChannel, code: SubsystemCode, table: CorrectionTable) -> float:
    """
    Probabilité d'échec de la correction idéale : somme des p(E) de partie logique non triviale.

    Raises:
        UnsupportedChannelError: pour un canal i.i.d. (voir ``fail_probability_monte_carlo``)
    """
    channel._require_explicit("fail_probability_exact")
    failing = [p for p, e in channel.terms() if not decompose(e, code, table).is_correctable]
    return math.fsum(failing)


def reduce_channel(channel: PauliChannel, code: SubsystemCode, table: CorrectionTable) -> PauliChannel:
    """Canal réduit : chaque erreur E remplacée par F(σ(E))."""
    channel._require_explicit("reduce_channel")
    entries = [(p, table.correction(syndrome_of(e, code))) for p, e in channel.terms()]
    return PauliChannel.explicit(channel.n, entries)


def fail_probability_monte_carlo(
    channel: PauliChannel,
    code: SubsystemCode,
    table: CorrectionTable,
    samples: int,
    seed: SeedLike = None,
    confidence: float = 0.95,
) -> Tuple[float, float, float]:
    """
    Estimer la probabilité d'échec par échantillonnage.

    Returns:
        (estimation, borne basse, borne haute) avec intervalle de Wilson
    """
    if samples <= 0:
        raise ValueError("Le nombre d'échantillons doit être positif")
    rng = make_rng(seed)
    failures = sum(
        1 for _ in range(samples) if not decompose(sample(channel, rng), code, table).is_correctable
    )
    low, high = proportion_confint(failures, samples, alpha=1 - confidence, method="wilson")
    return failures / samples, float(low), float(high)


def channels_equal(a: PauliChannel, b: PauliChannel, tolerance: float = TOLERANCE) -> bool:
    """Égalité terme à terme de deux canaux explicites (termes nuls ignorés)."""
    a, b = a.expand(), b.expand()
    keys = set(a._terms) | set(b._terms)
    return all(
        abs(a._terms.get(k, (None, 0.0))[1] - b._terms.get(k, (None, 0.0))[1]) <= tolerance for k in keys
    )


def composition_lemma_report(
    e: PauliChannel, d: PauliChannel, code: SubsystemCode, table: CorrectionTable
) -> Dict[str, object]:
    """
    Vérifier les relations de composition des canaux sur un couple (E, D).

    - reduce(E∘D) = reduce(reduce(E)∘reduce(D)) ;
    - fail(E∘D) ≤ fail(E) + fail(D) + fail(reduce(E)∘reduce(D)) ;
    - fail(reduce(E)∘reduce(D)) ≤ fail(E) + fail(D) + fail(E∘D).

    Returns:
        Dictionnaire des quantités calculées et des trois verdicts
    """
    ed = compose(e, d)
    re, rd = reduce_channel(e, code, table), reduce_channel(d, code, table)
    red = compose(re, rd)
    fail_e = fail_probability_exact(e, code, table)
    fail_d = fail_probability_exact(d, code, table)
    fail_ed = fail_probability_exact(ed, code, table)
    fail_red = fail_probability_exact(red, code, table)
    return {
        "fail_E": fail_e,
        "fail_D": fail_d,
        "fail_ED": fail_ed,
        "fail_reduced_ED": fail_red,
        "reduce_equality": channels_equal(reduce_channel(ed, code, table), reduce_channel(red, code, table)),
        "first_inequality": fail_ed <= fail_e + fail_d + fail_red + TOLERANCE,
        "second_inequality": fail_red <= fail_e + fail_d + fail_ed + TOLERANCE,
    }


def random_explicit_channel(n: int, terms: int, seed: SeedLike = None, max_weight: Optional[int] = None) -> PauliChannel:
    """Canal explicite aléatoire (tests des relations de composition)."""
    rng = make_rng(seed)
    max_weight = n if max_weight is None else max_weight
    weights = rng.random(terms)
    weights /= weights.sum()
    entries = []
    for p in weights:
        support = rng.choice(n, size=int(rng.integers(0, max_weight + 1)), replace=False)
        letters = rng.integers(1, 4, size=support.size)
        x = [q for q, l in zip(support, letters) if l in (1, 2)]
        z = [q for q, l in zip(support, letters) if l in (2, 3)]
        entries.append((float(p), PauliOperator.from_support(n, x=x, z=z)))
    return PauliChannel.explicit(n, entries)
