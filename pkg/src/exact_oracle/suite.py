"""
Suite de validation croisée : chaque chemin de calcul rapide est comparé à
un oracle exhaustif sur de petites instances.
"""

import itertools
import logging
import math
from dataclasses import asdict, dataclass
from typing import Dict, List, Optional

import numpy as np

from src.colex_lattice.builders import build_tetrahedral
from src.colex_lattice.codes import derive_code
from src.colex_lattice.dual import dualize
from src.exact_oracle.oracles import (
    OracleBudget,
    brute_force_matching_weight,
    coset_check,
    enumerate_minimal_repair,
    exhaustive_fail,
    reachable_syndromes,
    repetition_fail_closed_form,
    torus_graph,
)
from src.gauge_color_code.decoder import SyndromeDecoder
from src.gauge_color_code.flux import stabilizer_syndrome_bits
from src.matching.mwpm import MatchGraph, mwpm
from src.noise_channels.channels import PauliChannel
from src.pauli_core.pauli import PauliOperator
from src.pauli_core.standard_codes import repetition_code
from src.pauli_core.subsystem_code import CorrectionTable, StabSyndrome, is_valid_syndrome
from src.repetition_2d.decoder import close_pseudo_syndrome
from src.repetition_2d.torus import TorusLattice
from src.utils.exceptions import InfeasibleMatchingError
from src.utils.seeding import SeedLike, make_rng

logger = logging.getLogger(__name__)


@dataclass
class OracleCheck:
    name: str
    ok: bool
    cases: int
    detail: str = ""


def check_repetition_fail(lam: float = 0.1) -> OracleCheck:
    """Échec exhaustif du vote majoritaire à 3 qubits contre la forme close."""
    code = repetition_code(3)
    table = CorrectionTable.minimum_weight(code, basis="X")
    exhaustive = exhaustive_fail(PauliChannel.iid_flip(3, lam), code, table)
    expected = repetition_fail_closed_form(lam, 3)
    return OracleCheck(
        "repetition_fail", abs(exhaustive - expected) <= 1e-12, 1, f"exhaustif={exhaustive:.12g}, forme close={expected:.12g}"
    )


def _random_match_graph(rng: np.random.Generator, n_nodes: int) -> MatchGraph:
    graph = MatchGraph()
    for i in range(n_nodes):
        graph.add_node(i, boundary=bool(rng.random() < 0.2))
    for u, v in itertools.combinations(range(n_nodes), 2):
        if rng.random() < 0.6:
            graph.add_edge(u, v, int(rng.integers(0, 10)))
    return graph


def check_matching(rng: np.random.Generator, cases: int = 30) -> OracleCheck:
    """Couplage de poids minimum contre l'énumération de toutes les paires."""
    mismatches = []
    for case in range(cases):
        graph = _random_match_graph(rng, int(rng.integers(2, 11)))
        expected = brute_force_matching_weight(graph)
        try:
            weight = mwpm(graph).weight
        except InfeasibleMatchingError:
            weight = math.inf
        if weight != expected:
            mismatches.append((case, weight, expected))
    return OracleCheck("mwpm_bruteforce", not mismatches, cases, f"écarts: {mismatches}" if mismatches else "")


def check_ising_repair(rng: np.random.Generator, L: int = 4, eta: float = 0.1, cases: int = 20, budget: Optional[OracleBudget] = None) -> OracleCheck:
    """Réparation du pseudo-syndrome d'Ising contre la recherche arborescente."""
    lattice = TorusLattice(L)
    graph = torus_graph(lattice)
    mismatches = []
    for case in range(cases):
        w = (rng.random(lattice.n_edges) < eta).astype(np.uint8)
        repair = close_pseudo_syndrome(lattice, w)
        optimum = enumerate_minimal_repair(lattice.odd_vertices(w).tolist(), graph, budget=budget)
        if int(repair.sum()) != len(optimum):
            mismatches.append((case, int(repair.sum()), len(optimum)))
    return OracleCheck("ising_repair", not mismatches, cases, f"écarts: {mismatches}" if mismatches else "")


def check_gauge_decoder(rng: np.random.Generator, cases: int = 40, budget: Optional[OracleBudget] = None) -> OracleCheck:
    """
    Décodeur du code de couleur de jauge (d = 3) contre le classement par
    cosets : le résidu n'a jamais de syndrome, et une erreur d'un qubit
    n'est jamais changée en erreur logique.
    """
    colex = build_tetrahedral(3)
    code = derive_code(colex)
    dual = dualize(colex)
    decoder = SyndromeDecoder(dual)
    failures = []
    for case in range(cases):
        weight = 1 if case < dual.n_qubits else int(rng.integers(1, 4))
        bits = np.zeros(dual.n_qubits, dtype=np.uint8)
        if weight == 1:
            bits[case] = 1
        else:
            bits[rng.choice(dual.n_qubits, size=weight, replace=False)] = 1
        correction = decoder.decode_bits(stabilizer_syndrome_bits(bits, dual))
        verdict = coset_check(PauliOperator(bits ^ correction), code, budget)
        if verdict == "detectable" or (weight == 1 and verdict == "logical"):
            failures.append((case, weight, verdict))
    return OracleCheck("gauge_decoder_cosets", not failures, cases, f"échecs: {failures}" if failures else "")


def check_reachability(n: int = 5) -> OracleCheck:
    """Syndromes atteignables contre le critère de validité par élimination."""
    code = repetition_code(n)
    reachable = reachable_syndromes(code)
    m = code.stab_matrix.shape[0]
    valid = set()
    for bits in itertools.product((0, 1), repeat=m):
        sigma = StabSyndrome(np.array(bits, dtype=np.uint8))
        if is_valid_syndrome(sigma, code):
            valid.add(sigma)
    return OracleCheck("reachable_syndromes", reachable == valid, 2 ** m, f"{len(reachable)} atteignables, {len(valid)} valides")


def run_oracle_suite(seed: SeedLike = 0, budget: Optional[OracleBudget] = None) -> List[OracleCheck]:
    """
    Exécuter toutes les vérifications croisées.

    Returns:
        Liste des résultats, dans un ordre fixe
    """
    rng = make_rng(seed)
    checks = [
        check_repetition_fail(),
        check_matching(rng),
        check_ising_repair(rng, budget=budget),
        check_gauge_decoder(rng, budget=budget),
        check_reachability(),
    ]
    for check in checks:
        if check.ok:
            logger.info(f"Oracle {check.name}: OK ({check.cases} cas)")
        else:
            logger.warning(f"Oracle {check.name}: ÉCHEC {check.detail}")
    return checks


def suite_report(checks: List[OracleCheck]) -> Dict:
    return {"ok": all(c.ok for c in checks), "checks": [asdict(c) for c in checks]}
