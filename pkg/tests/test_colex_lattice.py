"""
Tests unitaires pour la construction, la validation et le dual des 3-colex.
"""

import unittest
import os
import sys
import tempfile
import numpy as np

# Ajouter le répertoire parent au chemin de recherche des modules
parent_dir = os.path.abspath(os.path.join(os.path.dirname(__file__), ".."))
sys.path.append(parent_dir)

# Importer les modules à tester
from src.colex_lattice.builders import build_closed_3torus, build_frozen_slab, build_tetrahedral, glue
from src.colex_lattice.codes import cell_decomposition, cell_operator, derive_code, plaquette_operator, redundant_region_relation
from src.colex_lattice.colex_io import load_colex, save_colex
from src.colex_lattice.complex import Colex
from src.colex_lattice.dual import dualize
from src.colex_lattice.validation import classify_regions, validate
from src.pauli_core.pauli import product
from src.pauli_core.subsystem_code import logical_count
from src.utils.exceptions import ColorabilityError


class TestBuilders(unittest.TestCase):
    """
    Tests pour les familles de colex.
    """

    def setUp(self):
        """
        Construire le colex tétraédrique de distance 3.
        """
        self.tetrahedral = build_tetrahedral(3)

    def test_tetrahedral_d3(self):
        """
        d = 3 : 15 qubits, quatre régions libres, un qubit logique.
        """
        self.assertEqual(self.tetrahedral.n_qubits, 15)
        self.assertTrue(validate(self.tetrahedral).ok)
        classification = classify_regions(self.tetrahedral)
        self.assertEqual(len(classification.free_regions), 4)
        self.assertEqual(logical_count(derive_code(self.tetrahedral)), 1)

    def test_tetrahedral_d5(self):
        """
        d = 5 : (d³ + d)/2 = 65 qubits.
        """
        colex = build_tetrahedral(5)
        self.assertEqual(colex.n_qubits, 65)
        self.assertTrue(validate(colex).ok)

    def test_tetrahedral_even_distance(self):
        """
        Une distance paire est refusée.
        """
        with self.assertRaises(ValueError):
            build_tetrahedral(4)

    def test_frozen_slab(self):
        """
        t = 0 : 24 qubits, trois régions toutes gelées, aucun qubit logique.
        """
        colex = build_frozen_slab(0)
        self.assertEqual(colex.n_qubits, 24)
        self.assertTrue(validate(colex).ok)
        classification = classify_regions(colex)
        self.assertEqual(len(colex.external_vertices), 3)
        self.assertEqual(len(classification.frozen_regions), 3)
        self.assertEqual(logical_count(derive_code(colex)), 0)

    def test_closed_3torus(self):
        """
        L = 4 : 12·L³ = 768 qubits et aucune région ; L impair n'est pas 4-coloriable.
        """
        colex = build_closed_3torus(4)
        self.assertEqual(colex.n_qubits, 768)
        self.assertEqual(len(colex.external_vertices), 0)
        self.assertTrue(validate(colex).ok)
        with self.assertRaises(ColorabilityError):
            build_closed_3torus(5)
        with self.assertRaises(ValueError):
            build_closed_3torus(2)

    def test_glue(self):
        """
        Le recollement double les qubits et donne un colex fermé valide.
        """
        glued = glue(self.tetrahedral)
        self.assertEqual(glued.n_qubits, 30)
        self.assertEqual(len(glued.external_vertices), 0)
        self.assertTrue(validate(glued).ok)


class TestValidationAndCodes(unittest.TestCase):
    """
    Tests pour la validation et les opérateurs dérivés.
    """

    def test_invalid_coloring(self):
        """
        Un tétraèdre à deux sommets de même couleur est signalé.
        """
        colex = Colex([0, 0, 1, 2], [False] * 4, [(0, 1, 2, 3)], name="mauvais")
        report = validate(colex)
        self.assertFalse(report.ok)
        self.assertEqual(report.first.kind, "duplicate_cell")
        with self.assertRaises(ValueError):
            dualize(colex)
        with self.assertRaises(ValueError):
            derive_code(colex)

    def test_redundant_region_relation(self):
        """
        Pour chaque paire de couleurs, produit des cellules = produit des régions.
        """
        for colex in (build_tetrahedral(3), build_frozen_slab(0)):
            for colors in [(0, 1), (1, 2), (2, 3), (0, 3)]:
                cells, regions = redundant_region_relation(colex, colors)
                self.assertEqual(cells, regions)

    def test_cell_decomposition(self):
        """
        Le produit des plaquettes vers les voisins d'une couleur redonne la cellule.
        """
        colex = build_tetrahedral(3)
        for vertex in colex.internal_vertices.tolist():
            own = int(colex.vertex_colors[vertex])
            for color in range(4):
                if color == own:
                    with self.assertRaises(ValueError):
                        cell_decomposition(colex, vertex, color)
                    continue
                plaquettes = [plaquette_operator(colex, e) for e in cell_decomposition(colex, vertex, color)]
                self.assertEqual(product(plaquettes, colex.n_qubits), cell_operator(colex, vertex))

    def test_code_invariants(self):
        """
        Le code dérivé vérifie les relations de commutation d'un code de sous-système.
        """
        code = derive_code(build_tetrahedral(3))
        self.assertEqual(code.check_invariants(), [])
        self.assertTrue(code.css_flag)


class TestDualAndIO(unittest.TestCase):
    """
    Tests pour le réseau dual et le format JSON.
    """

    def setUp(self):
        """
        Construire le colex tétraédrique de distance 3.
        """
        self.colex = build_tetrahedral(3)

    def test_dual_color_rule(self):
        """
        Une arête d'étiquette rg relie deux sommets de couleurs b et y.
        """
        dual = dualize(self.colex)
        self.assertEqual(dual.check_color_rule(), [])
        self.assertEqual(dual.n_qubits, 15)
        np.testing.assert_array_equal(dual.to_colex().tetrahedra, self.colex.tetrahedra)

    def test_save_and_load(self):
        """
        Un colex sauvegardé puis rechargé garde ses sommets et ses tétraèdres.
        """
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "colex", "tetra.json")
            save_colex(self.colex, path)
            loaded = load_colex(path)
        np.testing.assert_array_equal(loaded.tetrahedra, self.colex.tetrahedra)
        np.testing.assert_array_equal(loaded.vertex_colors, self.colex.vertex_colors)
        np.testing.assert_array_equal(loaded.is_external, self.colex.is_external)
        self.assertEqual(loaded.name, "tetrahedral-d3")


if __name__ == '__main__':
    unittest.main()
