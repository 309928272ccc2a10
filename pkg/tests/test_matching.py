"""
Tests unitaires pour le couplage parfait de poids minimum et les T-joins.
"""

import unittest
import os
import sys
import itertools
import networkx as nx
import numpy as np

# Ajouter le répertoire parent au chemin de recherche des modules
parent_dir = os.path.abspath(os.path.join(os.path.dirname(__file__), ".."))
sys.path.append(parent_dir)

# Importer les modules à tester
from src.matching.mwpm import MatchGraph, greedy_matching_weight, mwpm
from src.matching.tjoin import odd_vertices, t_join, torus_distance, torus_path_edges, torus_t_join
from src.exact_oracle.oracles import brute_force_matching_weight
from src.utils.exceptions import InfeasibleMatchingError


class TestMWPM(unittest.TestCase):
    """
    Tests pour ``mwpm``.
    """

    def setUp(self):
        """
        Initialiser le générateur aléatoire.
        """
        self.rng = np.random.default_rng(42)

    def test_empty_graph(self):
        """
        Un graphe sans nœud ordinaire donne un couplage vide de poids nul.
        """
        matching = mwpm(MatchGraph())
        self.assertEqual(matching.pairs, [])
        self.assertEqual(matching.weight, 0)

    def test_square(self):
        """
        Sur un carré de poids (1, 5, 1, 5), les deux arêtes légères sont retenues.
        """
        graph = MatchGraph()
        graph.add_edge("a", "b", 1)
        graph.add_edge("b", "c", 5)
        graph.add_edge("c", "d", 1)
        graph.add_edge("d", "a", 5)
        matching = mwpm(graph)
        self.assertEqual(matching.weight, 2)
        self.assertEqual(matching.partner()["a"], "b")

    def test_boundary_absorbs_odd_node(self):
        """
        Un nœud de bord absorbe le nœud restant d'un nombre impair de défauts.
        """
        graph = MatchGraph()
        graph.add_edge(0, 1, 1)
        graph.add_edge(1, 2, 1)
        graph.add_node("bord", boundary=True)
        graph.add_edge(2, "bord", 3)
        graph.add_edge(0, "bord", 2)
        self.assertEqual(mwpm(graph).weight, 3)

    def test_infeasible(self):
        """
        Trois nœuds sans bord n'admettent aucun couplage parfait.
        """
        graph = MatchGraph()
        graph.add_edge(0, 1, 1)
        graph.add_node(2)
        with self.assertRaises(InfeasibleMatchingError):
            mwpm(graph)

    def test_against_brute_force(self):
        """
        Sur de petits graphes aléatoires, le poids coïncide avec l'énumération exhaustive
        et ne dépasse jamais le couplage glouton.
        """
        for _ in range(25):
            n = int(self.rng.integers(2, 9))
            graph = MatchGraph()
            for i in range(n):
                graph.add_node(i, boundary=bool(self.rng.random() < 0.25))
            for u, v in itertools.combinations(range(n), 2):
                if self.rng.random() < 0.7:
                    graph.add_edge(u, v, int(self.rng.integers(0, 8)))
            expected = brute_force_matching_weight(graph)
            try:
                weight = mwpm(graph).weight
            except InfeasibleMatchingError:
                weight = float("inf")
            self.assertEqual(weight, expected)
            self.assertLessEqual(weight, greedy_matching_weight(graph))

    def test_relabeling_invariance(self):
        """
        Renommer et réordonner les nœuds ne change ni le poids ni la faisabilité.
        """
        for _ in range(25):
            n = int(self.rng.integers(2, 11))
            boundary = {i for i in range(n) if self.rng.random() < 0.2}
            edges = [
                (u, v, int(self.rng.integers(0, 8)))
                for u, v in itertools.combinations(range(n), 2)
                if self.rng.random() < 0.6
            ]
            perm = self.rng.permutation(n)
            graph, renamed = MatchGraph(), MatchGraph()
            for i in range(n):
                graph.add_node(i, boundary=i in boundary)
            for i in self.rng.permutation(n):
                renamed.add_node(f"q{perm[i]}", boundary=int(i) in boundary)
            for u, v, w in edges:
                graph.add_edge(u, v, w)
            for k in self.rng.permutation(len(edges)):
                u, v, w = edges[int(k)]
                renamed.add_edge(f"q{perm[v]}", f"q{perm[u]}", w)
            try:
                weight = mwpm(graph).weight
            except InfeasibleMatchingError:
                weight = None
            try:
                relabeled = mwpm(renamed).weight
            except InfeasibleMatchingError:
                relabeled = None
            self.assertEqual(weight, relabeled)


class TestTJoin(unittest.TestCase):
    """
    Tests pour les T-joins.
    """

    def test_path_graph(self):
        """
        Sur un chemin 0-1-2-3, le T-join de {0, 3} est le chemin entier.
        """
        graph = nx.path_graph(4)
        result = t_join(graph, [0, 3])
        self.assertEqual(len(result), 3)
        self.assertEqual(odd_vertices(tuple(e) for e in result), {0, 3})

    def test_absorber(self):
        """
        Un terminal isolé de parité impaire rejoint le sommet absorbant le plus proche.
        """
        graph = nx.path_graph(5)
        result = t_join(graph, [1], absorbers=[0, 4])
        self.assertEqual(result, {frozenset((0, 1))})

    def test_odd_without_absorber(self):
        """
        Un nombre impair de terminaux sans absorbeur est infaisable.
        """
        with self.assertRaises(InfeasibleMatchingError):
            t_join(nx.path_graph(3), [0, 1, 2])

    def test_torus_geometry(self):
        """
        Distance avec repliement et chemin canonique de la bonne longueur sur le tore.
        """
        L = 5
        self.assertEqual(torus_distance(L, 0, 4), 1)
        self.assertEqual(torus_distance(L, 0, 12), 4)
        for a, b in [(0, 12), (3, 21), (7, 7)]:
            self.assertEqual(len(torus_path_edges(L, a, b)), torus_distance(L, a, b))

    def test_torus_t_join_parity(self):
        """
        Les sommets impairs du T-join sur le tore sont exactement les terminaux.
        """
        L = 6
        terminals = [0, 8, 14, 33]
        edges = torus_t_join(L, terminals)
        degree = np.zeros(L * L, dtype=int)
        for j in edges:
            if j < L * L:
                r, c = divmod(j, L)
                u, v = r * L + c, r * L + (c + 1) % L
            else:
                r, c = divmod(j - L * L, L)
                u, v = r * L + c, ((r + 1) % L) * L + c
            degree[u] += 1
            degree[v] += 1
        self.assertEqual(sorted(np.flatnonzero(degree % 2).tolist()), terminals)


if __name__ == '__main__':
    unittest.main()
