"""
Constructions de 3-colex à partir du réseau cubique centré.

Les points du réseau sont repérés par quatre coordonnées entières
h = (x+y+z, x-y-z, -x+y-z, -x-y+z), de somme nulle et congrues modulo 4 ;
la couleur d'un point est h₁ mod 4. Un tétraèdre est un vecteur m ∈ Z⁴ de
somme -6 dont les résidus modulo 4 forment une permutation de (0, 1, 2, 3) ;
son sommet de couleur c a pour coordonnées hᵢ = mᵢ + ((c - mᵢ) mod 4).

Les colex simples sont obtenus en découpant la région {m ≥ L} puis en
ajoutant des sommets externes par « cônes » successifs sur le bord.
"""

import itertools
import logging
from typing import Dict, Iterable, List, Sequence, Set, Tuple

import numpy as np

from src.colex_lattice.complex import COLORS, Colex
from src.utils.exceptions import ColorabilityError

logger = logging.getLogger(__name__)

TETRAHEDRAL_OFFSETS = (0, -2, -3, -1)
FROZEN_SLAB_OFFSETS = (-1, -1, -4, -2)


def _compositions(total: int, parts: int) -> Iterable[Tuple[int, ...]]:
    """Vecteurs d'entiers positifs de longueur ``parts`` et de somme ``total``."""
    for cuts in itertools.combinations(range(total + parts - 1), parts - 1):
        bounds = (-1,) + cuts + (total + parts - 1,)
        yield tuple(bounds[i + 1] - bounds[i] - 1 for i in range(parts))


def _tetrahedron_vertices(m: Sequence[int]) -> List[Tuple[int, ...]]:
    """Les quatre sommets (coordonnées h, couleur croissante) du tétraèdre m."""
    return [tuple(mi + ((c - mi) % 4) for mi in m) for c in COLORS]


def _region_tetrahedra(offsets: Sequence[int]) -> List[Tuple[int, ...]]:
    """Tétraèdres m ≥ offsets (composante par composante)."""
    slack = -6 - sum(offsets)
    if slack < 0:
        raise ValueError(f"Décalages {tuple(offsets)} trop grands: aucune place pour un tétraèdre")
    found = []
    for n in _compositions(slack, 4):
        m = tuple(o + k for o, k in zip(offsets, n))
        if sorted(x % 4 for x in m) == [0, 1, 2, 3]:
            found.append(m)
    return sorted(found)


class _ComplexBuilder:
    """Accumulateur de sommets (dédupliqués par clé) et de tétraèdres."""

    def __init__(self):
        self.index: Dict[object, int] = {}
        self.colors: List[int] = []
        self.external: List[bool] = []
        self.coords: List[Tuple[float, ...]] = []
        self.tetrahedra: Set[Tuple[int, ...]] = set()

    def vertex(self, key, color: int, external: bool = False, coords=None) -> int:
        if key not in self.index:
            self.index[key] = len(self.colors)
            self.colors.append(color)
            self.external.append(external)
            self.coords.append(tuple(coords) if coords is not None else (np.nan,) * 4)
        return self.index[key]

    def add(self, vertices: Iterable[int]):
        tet = tuple(sorted(vertices))
        if len(set(tet)) != 4:
            raise ColorabilityError(f"Tétraèdre dégénéré {tet}")
        self.tetrahedra.add(tet)

    def build(self, name: str) -> Colex:
        return Colex(
            self.colors,
            self.external,
            sorted(self.tetrahedra),
            name=name,
            coordinates=np.array(self.coords, dtype=float),
        )


def _lattice_builder(offsets: Sequence[int]) -> _ComplexBuilder:
    builder = _ComplexBuilder()
    for m in _region_tetrahedra(offsets):
        verts = [builder.vertex(h, c, coords=h) for c, h in enumerate(_tetrahedron_vertices(m))]
        builder.add(verts)
    # Ordre lexicographique des sommets internes en coordonnées h
    order = sorted(builder.index, key=lambda key: key)
    remap = {builder.index[key]: i for i, key in enumerate(order)}
    relabeled = _ComplexBuilder()
    for key in order:
        old = builder.index[key]
        relabeled.vertex(key, builder.colors[old], coords=builder.coords[old])
    for tet in builder.tetrahedra:
        relabeled.add(remap[v] for v in tet)
    return relabeled


def _cone_boundary(builder: _ComplexBuilder):
    """
    Ajouter les sommets externes par cônes successifs.

    À l'étape k (k = 0, 1, 2), chaque triangle comportant exactement k
    sommets externes et n'appartenant qu'à un seul tétraèdre est complété par
    le sommet externe de la couleur qui lui manque.
    """
    externals: Dict[int, int] = {}

    def external_of(color: int) -> int:
        if color not in externals:
            externals[color] = builder.vertex(("region", color), color, external=True)
        return externals[color]

    for k in range(3):
        counts: Dict[Tuple[int, ...], int] = {}
        for tet in builder.tetrahedra:
            for tri in itertools.combinations(tet, 3):
                counts[tri] = counts.get(tri, 0) + 1
        cones = set()
        for tri, count in counts.items():
            if count != 1 or sum(builder.external[v] for v in tri) != k:
                continue
            present = {builder.colors[v] for v in tri}
            missing = [c for c in COLORS if c not in present]
            if len(missing) != 1:
                raise ColorabilityError(f"Triangle de bord {tri} mal coloré")
            cones.add(tuple(sorted(tri + (external_of(missing[0]),))))
        for tet in sorted(cones):
            builder.add(tet)
        logger.debug(f"Cônes de niveau {k}: {len(cones)} tétraèdres ajoutés")


def build_tetrahedral(d: int) -> Colex:
    """
    Colex tétraédrique libre de distance d.

    Args:
        d: Distance, entier impair ≥ 3

    Returns:
        Colex à quatre régions triangulaires, n = (d³ + d)/2 qubits
    """
    if d < 3 or d % 2 == 0:
        raise ValueError(f"La distance d'un colex tétraédrique doit être impaire et ≥ 3 (reçu {d})")
    t = (d - 3) // 2
    offsets = [o - t for o in TETRAHEDRAL_OFFSETS]
    builder = _lattice_builder(offsets)
    _cone_boundary(builder)
    colex = builder.build(f"tetrahedral-d{d}")
    expected = (d ** 3 + d) // 2
    if colex.n_qubits != expected:
        raise RuntimeError(f"Construction tétraédrique: {colex.n_qubits} qubits au lieu de {expected}")
    logger.info(f"Colex tétraédrique d={d} construit ({colex.n_qubits} qubits)")
    return colex


def build_frozen_slab(t: int = 0) -> Colex:
    """
    Colex simple gelé à trois régions.

    Deux faces du domaine découpé portent la même couleur manquante et se
    fondent en une seule région ; les deux coins restants sont de la
    quatrième couleur. Pour t = 0 le colex compte 24 qubits.
    """
    if t < 0:
        raise ValueError("t doit être positif")
    offsets = [o - t for o in FROZEN_SLAB_OFFSETS]
    builder = _lattice_builder(offsets)
    _cone_boundary(builder)
    colex = builder.build(f"frozen-slab-t{t}")
    logger.info(f"Colex gelé t={t} construit ({colex.n_qubits} qubits, {len(colex.external_vertices)} régions)")
    return colex


def build_closed_3torus(L: int) -> Colex:
    """
    Colex fermé sur le 3-tore : réseau cubique centré de période 2L.

    Chaque arête second-voisin a → a + 2eᵢ entre points « pairs » porte
    quatre tétraèdres, formés avec les paires consécutives des quatre points
    impairs m ± eⱼ ± eₖ (m milieu de l'arête).

    Args:
        L: Demi-période, paire et ≥ 4

    Returns:
        Colex sans région, 12·L³ qubits
    """
    if L % 2:
        raise ColorabilityError(f"Le 3-tore n'est 4-coloriable que pour L pair (reçu {L})")
    if L < 4:
        raise ValueError(f"L doit être ≥ 4 pour éviter les tétraèdres repliés (reçu {L})")
    period = 2 * L
    builder = _ComplexBuilder()
    points = sorted(
        p for p in itertools.product(range(period), repeat=3) if len({x % 2 for x in p}) == 1
    )
    for p in points:
        builder.vertex(p, sum(p) % 4, coords=p + (np.nan,))

    def wrap(point) -> int:
        return builder.index[tuple(x % period for x in point)]

    cycle = ((1, 1), (1, -1), (-1, -1), (-1, 1))
    for a in points:
        if a[0] % 2:
            continue
        for i in range(3):
            j, k = [axis for axis in range(3) if axis != i]
            mid = list(a)
            mid[i] += 1
            far = list(a)
            far[i] += 2
            ring = []
            for sj, sk in cycle:
                c = list(mid)
                c[j] += sj
                c[k] += sk
                ring.append(wrap(c))
            for idx in range(4):
                builder.add((wrap(a), wrap(far), ring[idx], ring[(idx + 1) % 4]))
    colex = builder.build(f"3torus-L{L}")
    logger.info(f"3-tore L={L} construit ({colex.n_qubits} qubits)")
    return colex


def glue(colex: Colex) -> Colex:
    """
    Recoller un colex simple avec sa copie le long des régions.

    Les sommets externes deviennent internes et sont partagés ; le complexe
    obtenu est fermé.
    """
    n_vertices = colex.n_vertices
    internal = colex.internal_vertices
    mirror = {int(v): n_vertices + i for i, v in enumerate(internal)}
    colors = np.concatenate([colex.vertex_colors, colex.vertex_colors[internal]])
    tets = [tuple(int(v) for v in tet) for tet in colex.tetrahedra]
    mirrored = [tuple(mirror.get(int(v), int(v)) for v in tet) for tet in colex.tetrahedra]
    glued = Colex(
        colors,
        np.zeros(colors.shape[0], dtype=bool),
        tets + mirrored,
        name=f"{colex.name}-glued",
    )
    logger.info(f"Recollement de '{colex.name}': {glued.n_qubits} qubits")
    return glued
