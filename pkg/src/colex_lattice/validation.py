"""
Validation d'un colex et classification de ses régions.
"""

import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from src.colex_lattice.complex import COLORS, Colex, color_name

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Violation:
    kind: str
    message: str
    qubit: Optional[int] = None
    kappa: Optional[str] = None


@dataclass
class ValidationReport:
    """Rapport de ``validate`` : liste ordonnée des violations."""

    colex_name: str
    violations: List[Violation] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def first(self) -> Optional[Violation]:
        return self.violations[0] if self.violations else None

    def summary(self) -> str:
        if self.ok:
            return f"Colex '{self.colex_name}' valide"
        return f"Colex '{self.colex_name}' invalide ({len(self.violations)} violations): {self.first.message}"


@dataclass
class RegionClassification:
    """
    Bordures impaires et statut des régions.

    Attributes:
        border_odd: Pour chaque bordure (paire de sommets externes), parité impaire
        region_status: Pour chaque sommet externe, "free", "frozen" ou "mixed"
    """

    border_odd: Dict[Tuple[int, int], bool]
    region_status: Dict[int, str]

    @property
    def free_regions(self) -> List[int]:
        return sorted(v for v, s in self.region_status.items() if s == "free")

    @property
    def frozen_regions(self) -> List[int]:
        return sorted(v for v, s in self.region_status.items() if s == "frozen")


def classify_regions(colex: Colex) -> RegionClassification:
    """
    Une bordure est impaire si elle contient un nombre impair de sommets du
    colex, c'est-à-dire si l'arête duale correspondante appartient à un nombre
    impair de tétraèdres. Une région est libre si elle a un nombre impair de
    bordures impaires vers chacune des trois autres couleurs, gelée si elle
    n'en a aucune.
    """
    border_odd = {edge: len(colex.edge_qubits[edge]) % 2 == 1 for edge in colex.borders}
    status: Dict[int, str] = {}
    for region in colex.external_vertices.tolist():
        own = int(colex.vertex_colors[region])
        odd_by_color = Counter()
        for (u, v), odd in border_odd.items():
            if odd and region in (u, v):
                other = v if u == region else u
                odd_by_color[int(colex.vertex_colors[other])] += 1
        if not odd_by_color:
            status[region] = "frozen"
        elif all(odd_by_color[c] % 2 == 1 for c in COLORS if c != own):
            status[region] = "free"
        else:
            status[region] = "mixed"
    return RegionClassification(border_odd=border_odd, region_status=status)


def validate(colex: Colex) -> ValidationReport:
    """
    Vérifier la structure de colex.

    - chaque sommet du colex (qubit) appartient à exactement une κ-cellule
      par couleur : son tétraèdre dual a exactement un sommet de chaque couleur ;
    - chaque arête du colex borde exactement deux sommets : un triangle dual
      ayant un sommet interne appartient à deux tétraèdres ;
    - chaque triangle entièrement externe appartient à un seul coin ;
    - aucun tétraèdre n'est entièrement externe.

    Returns:
        ValidationReport (la première violation est celle rencontrée en premier
        dans l'ordre des qubits)
    """
    report = ValidationReport(colex_name=colex.name)
    colors = colex.vertex_colors
    for q, tet in enumerate(colex.tetrahedra):
        counts = Counter(int(colors[v]) for v in tet)
        for c in COLORS:
            if counts[c] > 1:
                report.violations.append(
                    Violation("duplicate_cell", f"Qubit {q}: plus d'une {color_name(c)}-cellule", q, color_name(c))
                )
            elif counts[c] == 0:
                report.violations.append(
                    Violation("missing_cell", f"Qubit {q}: aucune {color_name(c)}-cellule", q, color_name(c))
                )
        if colex.is_external[tet].all():
            report.violations.append(Violation("external_tetrahedron", f"Qubit {q}: tétraèdre entièrement externe", q))

    for tri, qubits in colex.triangle_qubits.items():
        if colex.is_external[list(tri)].all():
            if len(qubits) != 1:
                report.violations.append(
                    Violation("corner", f"Triangle de régions {tri} partagé par {len(qubits)} coins", qubits[0])
                )
        elif len(qubits) != 2:
            report.violations.append(
                Violation("colex_edge", f"Arête du colex {tri}: {len(qubits)} extrémité(s) au lieu de 2", qubits[0])
            )

    for region in colex.external_vertices.tolist():
        if colex.incidence.getrow(region).nnz == 0:
            report.violations.append(Violation("region", f"Région {region} vide"))

    if colex.external_vertices.size and report.ok:
        classification = classify_regions(colex)
        mixed = [v for v, s in classification.region_status.items() if s == "mixed"]
        if mixed:
            report.warnings.append(f"Régions ni libres ni gelées: {mixed}")

    if report.ok:
        logger.debug(report.summary())
    else:
        logger.warning(report.summary())
    return report
