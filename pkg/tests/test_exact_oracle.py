"""
Tests unitaires pour les oracles exacts et la suite de vérifications croisées.
"""

import unittest
import os
import sys
import networkx as nx
import numpy as np

# Ajouter le répertoire parent au chemin de recherche des modules
parent_dir = os.path.abspath(os.path.join(os.path.dirname(__file__), ".."))
sys.path.append(parent_dir)

# Importer les modules à tester
from src.exact_oracle.oracles import (
    OracleBudget,
    brute_force_matching_weight,
    coset_check,
    enumerate_minimal_repair,
    exhaustive_fail,
    minimal_repair_ratio,
    reachable_syndromes,
    repetition_fail_closed_form,
)
from src.exact_oracle.suite import run_oracle_suite, suite_report
from src.colex_lattice.builders import build_tetrahedral
from src.colex_lattice.codes import derive_code, plaquette_operator
from src.matching.mwpm import MatchGraph
from src.noise_channels.channels import PauliChannel, fail_probability_exact, random_explicit_channel
from src.pauli_core.pauli import PauliOperator
from src.pauli_core.standard_codes import repetition_code
from src.pauli_core.subsystem_code import CorrectionTable
from src.utils.exceptions import ResourceError


class TestFailOracles(unittest.TestCase):
    """
    Tests pour la probabilité d'échec exhaustive et le classement par cosets.
    """

    def setUp(self):
        """
        Préparer le code de répétition à 3 qubits.
        """
        self.rng = np.random.default_rng(42)
        self.code = repetition_code(3)
        self.table = CorrectionTable.minimum_weight(self.code, basis="X")

    def test_closed_form(self):
        """
        À λ = 0.1, la forme close vaut 0.028 ; n pair est refusé.
        """
        self.assertAlmostEqual(repetition_fail_closed_form(0.1), 0.028, places=12)
        with self.assertRaises(ValueError):
            repetition_fail_closed_form(0.1, 4)

    def test_exhaustive_matches_closed_form(self):
        """
        L'énumération du canal i.i.d. reproduit la forme close.
        """
        fail = exhaustive_fail(PauliChannel.iid_flip(3, 0.1), self.code, self.table)
        self.assertAlmostEqual(fail, 0.028, places=12)

    def test_exhaustive_matches_decomposition(self):
        """
        Le test de rang et la décomposition E = F·G·L donnent le même échec.
        """
        for _ in range(5):
            channel = random_explicit_channel(3, 10, seed=self.rng)
            self.assertAlmostEqual(
                exhaustive_fail(channel, self.code, self.table),
                fail_probability_exact(channel, self.code, self.table),
                places=12,
            )

    def test_budget_refuses_large_enumeration(self):
        """
        Un budget trop petit lève ResourceError avant l'énumération.
        """
        with self.assertRaises(ResourceError):
            exhaustive_fail(PauliChannel.iid_flip(3, 0.1), self.code, self.table, OracleBudget(max_enumeration=4))

    def test_coset_categories(self):
        """
        Classement des opérateurs du code de répétition et d'une plaquette du code de couleur.
        """
        self.assertEqual(coset_check(PauliOperator.from_string("XII"), self.code), "detectable")
        self.assertEqual(coset_check(PauliOperator.from_string("ZZI"), self.code), "stabilizer")
        self.assertEqual(coset_check(PauliOperator.identity(3), self.code), "stabilizer")
        self.assertEqual(coset_check(PauliOperator.from_string("XXX"), self.code), "logical")
        colex = build_tetrahedral(3)
        plaquette = plaquette_operator(colex, colex.plaquettes[0], "X")
        self.assertEqual(coset_check(plaquette, derive_code(colex)), "gauge")
        with self.assertRaises(ResourceError):
            coset_check(PauliOperator.identity(3), self.code, OracleBudget(max_qubits=2))


class TestSearchOracles(unittest.TestCase):
    """
    Tests pour la réparation minimale et les syndromes atteignables.
    """

    def test_minimal_repair_on_path(self):
        """
        Sur un chemin 0-…-4, relier 0 et 4 coûte 4 arêtes ; un absorbant voisin coûte 1.
        """
        path = nx.path_graph(5)
        self.assertEqual(len(enumerate_minimal_repair([0, 4], path)), 4)
        self.assertEqual(enumerate_minimal_repair([4], path, absorbers=[3]), {frozenset((3, 4))})
        self.assertEqual(enumerate_minimal_repair([], path), set())

    def test_minimal_repair_uses_short_side(self):
        """
        Sur un cycle de 6 sommets, deux défauts opposés coûtent 3 arêtes, voisins 1.
        """
        cycle = nx.cycle_graph(6)
        self.assertEqual(len(enumerate_minimal_repair([0, 3], cycle)), 3)
        self.assertEqual(len(enumerate_minimal_repair([0, 5], cycle)), 1)

    def test_repair_ratio(self):
        """
        Faire le grand tour d'un cycle pour relier deux voisins donne un rapport 5.
        """
        cycle = nx.cycle_graph(6)
        long_way = [frozenset((i, i + 1)) for i in range(1, 5)] + [frozenset((5, 0))]
        self.assertEqual(minimal_repair_ratio(long_way, cycle), 5.0)

    def test_repair_budget(self):
        """
        Une recherche qui dépasse son budget lève ResourceError.
        """
        grid = nx.grid_2d_graph(4, 4)
        with self.assertRaises(ResourceError):
            enumerate_minimal_repair([(0, 0), (3, 3)], grid, budget=OracleBudget(max_enumeration=2))

    def test_reachable_syndromes(self):
        """
        Sur un anneau de 4 qubits, les syndromes atteignables sont les 8 de poids pair.
        """
        reachable = reachable_syndromes(repetition_code(4, periodic=True))
        self.assertEqual(len(reachable), 8)
        self.assertTrue(all(sigma.weight % 2 == 0 for sigma in reachable))
        with self.assertRaises(ResourceError):
            reachable_syndromes(repetition_code(13))

    def test_brute_force_limit(self):
        """
        L'énumération des couplages refuse plus de 14 nœuds.
        """
        graph = MatchGraph()
        for i in range(15):
            graph.add_node(i)
        with self.assertRaises(ResourceError):
            brute_force_matching_weight(graph)


class TestOracleSuite(unittest.TestCase):
    """
    Tests pour la suite complète.
    """

    def test_suite_passes(self):
        """
        Toutes les vérifications croisées passent, dans un ordre fixe.
        """
        checks = run_oracle_suite(seed=0)
        report = suite_report(checks)
        self.assertTrue(report["ok"], report)
        self.assertEqual(
            [c["name"] for c in report["checks"]],
            ["repetition_fail", "mwpm_bruteforce", "ising_repair", "gauge_decoder_cosets", "reachable_syndromes"],
        )


if __name__ == '__main__':
    unittest.main()
