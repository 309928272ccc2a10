"""
Tests unitaires pour les canaux de Pauli et les classes de bruit.
"""

import unittest
import os
import sys
import tempfile
import networkx as nx
import numpy as np

# Ajouter le répertoire parent au chemin de recherche des modules
parent_dir = os.path.abspath(os.path.join(os.path.dirname(__file__), ".."))
sys.path.append(parent_dir)

# Importer les modules à tester
from src.noise_channels.channels import (
    LocalNoiseSpec,
    NoiseClassParams,
    PauliChannel,
    RecoveryModel,
    channels_equal,
    compose,
    composition_lemma_report,
    fail_probability_exact,
    fail_probability_monte_carlo,
    random_explicit_channel,
    reduce_channel,
    sample,
    syndrome_distribution,
)
from src.noise_channels.bounded import check_alpha_bounded, connected_subsets
from src.noise_channels.recovery import (
    effective_channel,
    effective_recovery_channel,
    empirical_distribution,
    in_noise_class,
    recovery_output_channel,
)
from src.noise_channels.channel_io import load_channel, save_channel
from src.pauli_core.pauli import PauliOperator
from src.pauli_core.standard_codes import repetition_code
from src.pauli_core.subsystem_code import CorrectionTable, StabSyndrome, syndrome_of
from src.utils.exceptions import UnsupportedChannelError


class TestPauliChannel(unittest.TestCase):
    """
    Tests pour les canaux, leur réduction et leur probabilité d'échec.
    """

    def setUp(self):
        """
        Préparer le code de répétition à 3 qubits et sa table de vote majoritaire.
        """
        self.rng = np.random.default_rng(42)
        self.code = repetition_code(3)
        self.table = CorrectionTable.minimum_weight(self.code, basis="X")

    def test_expand_is_normalized(self):
        """
        Le développement d'un canal i.i.d. est normalisé.
        """
        for channel in (PauliChannel.iid_flip(4, 0.2), PauliChannel.iid_depolarizing(3, 0.1)):
            self.assertAlmostEqual(channel.expand().total_probability(), 1.0, places=12)

    def test_majority_vote_fail(self):
        """
        Vote majoritaire à λ = 0.1 : échec 3λ²(1−λ) + λ³ = 0.028.
        """
        channel = PauliChannel.iid_flip(3, 0.1).expand()
        self.assertAlmostEqual(fail_probability_exact(channel, self.code, self.table), 0.028, places=12)

    def test_iid_channel_requires_expansion(self):
        """
        Les opérations exactes sur un canal i.i.d. lèvent UnsupportedChannelError.
        """
        with self.assertRaises(UnsupportedChannelError):
            fail_probability_exact(PauliChannel.iid_flip(3, 0.1), self.code, self.table)

    def test_reduce_properties(self):
        """
        La réduction est idempotente, conserve la distribution des syndromes et n'échoue jamais.
        """
        channel = random_explicit_channel(3, 8, seed=self.rng)
        reduced = reduce_channel(channel, self.code, self.table)
        self.assertTrue(channels_equal(reduce_channel(reduced, self.code, self.table), reduced))
        original = syndrome_distribution(channel, self.code)
        after = syndrome_distribution(reduced, self.code)
        self.assertEqual(set(original), set(after))
        for sigma, p in original.items():
            self.assertAlmostEqual(p, after[sigma], places=12)
        self.assertEqual(fail_probability_exact(reduced, self.code, self.table), 0.0)

    def test_composition_lemma(self):
        """
        Les relations de composition tiennent pour des couples de canaux aléatoires.
        """
        for _ in range(5):
            e = random_explicit_channel(3, 5, seed=self.rng)
            d = random_explicit_channel(3, 5, seed=self.rng)
            report = composition_lemma_report(e, d, self.code, self.table)
            self.assertTrue(report["reduce_equality"])
            self.assertTrue(report["first_inequality"])
            self.assertTrue(report["second_inequality"])

    def test_iid_composition(self):
        """
        Composer deux canaux d'inversion donne un canal d'inversion de taux λ + λ′ − 2λλ′.
        """
        combined = compose(PauliChannel.iid_flip(2, 0.1), PauliChannel.iid_flip(2, 0.2))
        expected = PauliChannel.iid_flip(2, 0.1 + 0.2 - 2 * 0.1 * 0.2)
        self.assertTrue(channels_equal(combined, expected))

    def test_sampling_rate(self):
        """
        Le taux empirique d'inversion est proche de λ.
        """
        channel = PauliChannel.iid_flip(50, 0.1)
        flips = np.mean([sample(channel, self.rng).weight for _ in range(200)]) / 50
        self.assertAlmostEqual(flips, 0.1, delta=0.02)

    def test_monte_carlo_interval(self):
        """
        L'intervalle de Wilson à 99,9 % du Monte Carlo contient la valeur exacte.
        """
        estimate, low, high = fail_probability_monte_carlo(
            PauliChannel.iid_flip(3, 0.1), self.code, self.table, samples=4000, seed=self.rng, confidence=0.999
        )
        self.assertLessEqual(low, 0.028)
        self.assertGreaterEqual(high, 0.028)

    def test_parameter_validation(self):
        """
        Les taux hors de [0, 1] sont refusés.
        """
        with self.assertRaises(ValueError):
            LocalNoiseSpec(1.2)
        with self.assertRaises(ValueError):
            RecoveryModel(-0.1)
        with self.assertRaises(ValueError):
            PauliChannel.iid_flip(3, 2.0)
        self.assertEqual(NoiseClassParams(tau=0.1, epsilon=0.5).tau_prime, 0.0)
        with self.assertRaises(ValueError):
            NoiseClassParams(tau=-0.1)
        with self.assertRaises(ValueError):
            NoiseClassParams(epsilon=1.5)

    def test_channel_file(self):
        """
        Un canal explicite écrit sur disque se relit à l'identique.
        """
        channel = PauliChannel.iid_flip(2, 0.25).expand()
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "canal.txt")
            save_channel(channel, path)
            loaded = load_channel(path)
        self.assertTrue(channels_equal(channel, loaded, tolerance=0.0))


class TestNoiseClasses(unittest.TestCase):
    """
    Tests pour les distributions bornées et la récupération bruitée.
    """

    def setUp(self):
        """
        Préparer un cycle de 10 sites et le code de répétition à 3 qubits.
        """
        self.rng = np.random.default_rng(42)
        self.cycle = nx.cycle_graph(10)
        self.code = repetition_code(3)
        self.table = CorrectionTable.minimum_weight(self.code, basis="X")

    def test_connected_subsets(self):
        """
        Un cycle de 10 sites a 10 sous-ensembles connexes de chaque taille 1 à 3.
        """
        subsets = connected_subsets(self.cycle, 3)
        self.assertEqual(len(subsets), 30)
        rooted = connected_subsets(self.cycle, 3, roots=[0])
        self.assertEqual(len(rooted), 1 + 2 + 3)

    def test_iid_flip_is_alpha_bounded(self):
        """
        Des tirages i.i.d. de taux λ sont λ-bornés.
        """
        samples = (self.rng.random((3000, 10)) < 0.1).astype(np.uint8)
        report = check_alpha_bounded(samples, 0.1, 3, self.cycle)
        self.assertTrue(report.ok)
        self.assertEqual(report.subsets_checked, 30)

    def test_composed_samplers_are_bounded(self):
        """
        La composition de deux échantillonneurs de taux λ et λ′ est (λ + λ′)-bornée.
        """
        a = self.rng.random((3000, 10)) < 0.05
        b = self.rng.random((3000, 10)) < 0.08
        report = check_alpha_bounded((a ^ b).astype(np.uint8), 0.13, 3, self.cycle)
        self.assertTrue(report.ok)

    def test_dense_samples_violate_bound(self):
        """
        Des supports toujours pleins violent une borne faible.
        """
        samples = np.ones((500, 10), dtype=np.uint8)
        self.assertFalse(check_alpha_bounded(samples, 0.1, 2, self.cycle).ok)

    def test_recovery_output_channel(self):
        """
        Le canal de sortie d'une correction bruitée se réduit au canal effectif
        et échoue comme le canal effectif composé au canal d'erreur.
        """
        q_r = {
            StabSyndrome(np.array([0, 0], dtype=np.uint8)): 0.9,
            syndrome_of(PauliOperator.single(3, 0, "X"), self.code): 0.1,
        }
        errors = PauliChannel.iid_flip(3, 0.05)
        output = recovery_output_channel(q_r, errors, self.code, self.table)
        eff = effective_channel(q_r, self.code, self.table)
        self.assertTrue(channels_equal(reduce_channel(output, self.code, self.table), eff))
        self.assertAlmostEqual(
            fail_probability_exact(output, self.code, self.table),
            fail_probability_exact(compose(eff, errors), self.code, self.table),
            places=12,
        )

    def test_effective_recovery_samples(self):
        """
        Avec une réparation exacte, les syndromes faux effectifs sont tous vides.
        """
        samples = effective_recovery_channel(RecoveryModel(0.2), 4, lambda w: w, 100, seed=self.rng)
        self.assertFalse(samples.any())
        distribution = empirical_distribution(samples, 4)
        self.assertEqual(list(distribution.values()), [1.0])
        self.assertTrue(in_noise_class(0.0, samples, 0.0, 0.01, nx.path_graph(4)))
        self.assertFalse(in_noise_class(0.5, samples, 0.1, 0.01, nx.path_graph(4)))


if __name__ == '__main__':
    unittest.main()
