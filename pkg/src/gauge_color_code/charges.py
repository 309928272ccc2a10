"""
Calcul des charges de couleur.

Deux groupes Z₂³ interviennent :

- charges de sommet : engendrées par r, g, b, y avec r+g+b+y = 0 ;
- charges d'arête : engendrées par les six paires rg, rb, ..., by avec
  gb+by+gy = rb+by+ry = rg+gy+ry = 0.

Les deux sont codés par des masques 4 bits (bit c = couleur c). Les charges
d'arête sont les masques de poids pair ; les charges de sommet sont les
masques modulo 1111.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List

import numpy as np

from src.colex_lattice.complex import COLOR_NAMES
from src.colex_lattice.dual import DualLattice

logger = logging.getLogger(__name__)

ALL_COLORS_MASK = 0b1111


@dataclass(frozen=True)
class ChargeLabel:
    """Élément d'un des deux groupes de charges (``kind`` = "edge" ou "vertex")."""

    mask: int
    kind: str = "edge"

    def __post_init__(self):
        if self.kind not in ("edge", "vertex"):
            raise ValueError(f"Groupe de charges inconnu: {self.kind}")
        if not 0 <= self.mask <= ALL_COLORS_MASK:
            raise ValueError(f"Masque de charge hors limites: {self.mask}")
        if self.kind == "edge" and bin(self.mask).count("1") % 2:
            raise ValueError(f"Masque {self.mask:04b} impair: pas une charge d'arête")
        if self.kind == "vertex" and self.mask & 0b1000:
            # Représentant canonique sans y, puisque y = r+g+b
            object.__setattr__(self, "mask", self.mask ^ ALL_COLORS_MASK)

    @classmethod
    def of_color(cls, color: int) -> "ChargeLabel":
        return cls(1 << color, "vertex")

    @classmethod
    def zero(cls, kind: str = "edge") -> "ChargeLabel":
        return cls(0, kind)

    def __add__(self, other: "ChargeLabel") -> "ChargeLabel":
        if self.kind != other.kind:
            raise ValueError("Addition de charges de groupes différents")
        return ChargeLabel(self.mask ^ other.mask, self.kind)

    def is_zero(self) -> bool:
        return self.mask == 0

    @property
    def name(self) -> str:
        if self.mask == 0:
            return "0"
        colors = "".join(COLOR_NAMES[c] for c in range(4) if self.mask >> c & 1)
        if self.kind == "edge" and self.mask == ALL_COLORS_MASK:
            return "rg+by"
        return colors if self.kind == "edge" else "+".join(colors)


class ChargeMap:
    """Charges (masques d'arête) portées par les sommets internes."""

    def __init__(self, masks: np.ndarray, dual: DualLattice):
        self.masks = np.asarray(masks, dtype=np.int64)
        self.dual = dual

    def __getitem__(self, vertex: int) -> ChargeLabel:
        return ChargeLabel(int(self.masks[vertex]), "edge")

    def is_zero(self) -> bool:
        internal = ~self.dual.is_external
        return not self.masks[internal].any()

    def defects(self) -> Dict[int, int]:
        """Sommets internes de charge non nulle → masque."""
        internal = ~self.dual.is_external
        return {int(v): int(self.masks[v]) for v in np.flatnonzero((self.masks != 0) & internal)}

    def total(self) -> ChargeLabel:
        """Charge totale des sommets internes."""
        acc = 0
        for v in np.flatnonzero(~self.dual.is_external):
            acc ^= int(self.masks[v])
        return ChargeLabel(acc, "edge")


def charge_of(edges: np.ndarray, dual: DualLattice) -> ChargeMap:
    """
    Charge ∂̃γ(v) : somme des étiquettes des arêtes incidentes à v.

    L'application est linéaire et s'annule sur les sommets internes si et
    seulement si le flux est valide.
    """
    edges = np.asarray(edges, dtype=np.uint8)
    masks = np.zeros(dual.n_vertices, dtype=np.int64)
    for j in np.flatnonzero(edges):
        u, v = dual.edges[j]
        masks[u] ^= dual.edge_masks[j]
        masks[v] ^= dual.edge_masks[j]
    return ChargeMap(masks, dual)


def vertex_charge(vertices: List[int], dual: DualLattice) -> ChargeLabel:
    """Charge totale d'un ensemble de sommets (chaque sommet porte sa couleur)."""
    total = ChargeLabel.zero("vertex")
    for v in vertices:
        total = total + ChargeLabel.of_color(int(dual.vertex_colors[v]))
    return total
