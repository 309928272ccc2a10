"""
Tests unitaires pour le code de couleur de jauge : flux, réparation,
décodage, fixation de jauge et tour single-shot.
"""

import unittest
import os
import sys
import numpy as np

# Ajouter le répertoire parent au chemin de recherche des modules
parent_dir = os.path.abspath(os.path.join(os.path.dirname(__file__), ".."))
sys.path.append(parent_dir)

# Importer les modules à tester
from src.colex_lattice.builders import build_tetrahedral
from src.colex_lattice.codes import derive_code
from src.colex_lattice.dual import dualize
from src.exact_oracle.oracles import dual_charge_graph, enumerate_minimal_repair, minimal_repair_ratio
from src.gauge_color_code.charges import charge_of
from src.gauge_color_code.confinement import confinement_constant, k_confinement_witness, neutralization_check
from src.gauge_color_code.decoder import DECODER_CACHE_SIZE, SyndromeDecoder, _cached_decoder, decode_syndrome, get_decoder
from src.gauge_color_code.flux import (
    err_of,
    extract_gauge_syndrome,
    flux_clusters,
    gauge_syndrome_bits,
    is_valid_flux,
    label_parity,
    stabilizer_syndrome_bits,
)
from src.gauge_color_code.gauge_fixing import GaugeFixer, gauge_fix
from src.gauge_color_code.reduction import LOCAL_RADII, REPAIR_GENERATORS, RepairReduction, SyndromeReduction, mask_name
from src.gauge_color_code.repair import get_repair_reduction, repair_gauge_syndrome, simplified_flux_repair
from src.pauli_core.pauli import PauliOperator
from src.pauli_core.subsystem_code import StabSyndrome, syndrome_of
from src.gauge_color_code.round import GaugeRound
from src.utils.exceptions import NonSyndromeEvent


def random_flips(rng, n, rate):
    return (rng.random(n) < rate).astype(np.uint8)


class TestFlux(unittest.TestCase):
    """
    Tests pour les syndromes de jauge et leur syndrome d'erreur.
    """

    def setUp(self):
        """
        Préparer le dual du colex tétraédrique d = 3.
        """
        self.rng = np.random.default_rng(42)
        self.dual = dualize(build_tetrahedral(3))

    def test_single_flip_is_valid(self):
        """
        Le syndrome de jauge d'une inversion isolée est valide et son err coïncide
        avec le syndrome de stabilisateur.
        """
        for q in range(self.dual.n_qubits):
            bits = np.zeros(self.dual.n_qubits, dtype=np.uint8)
            bits[q] = 1
            flux = gauge_syndrome_bits(bits, self.dual)
            self.assertTrue(is_valid_flux(flux, self.dual))
            np.testing.assert_array_equal(err_of(flux, self.dual).bits, stabilizer_syndrome_bits(bits, self.dual))

    def test_err_of_random_errors(self):
        """
        err(γ(E)) = σ(E) pour des erreurs aléatoires.
        """
        for _ in range(20):
            bits = random_flips(self.rng, self.dual.n_qubits, 0.2)
            flux = gauge_syndrome_bits(bits, self.dual)
            np.testing.assert_array_equal(err_of(flux, self.dual).bits, stabilizer_syndrome_bits(bits, self.dual))

    def test_extract_from_operator(self):
        """
        Le flux d'un opérateur X coïncide avec celui de ses bits ; une erreur Z est refusée.
        """
        code = derive_code(build_tetrahedral(3))
        bits = random_flips(self.rng, self.dual.n_qubits, 0.2)
        np.testing.assert_array_equal(
            extract_gauge_syndrome(PauliOperator(bits), code, self.dual),
            gauge_syndrome_bits(bits, self.dual),
        )
        with self.assertRaises(ValueError):
            extract_gauge_syndrome(PauliOperator.single(self.dual.n_qubits, 0, "Z"), code, self.dual)
        with self.assertRaises(ValueError):
            extract_gauge_syndrome(PauliOperator.single(self.dual.n_qubits, 0, "X"), code, self.dual, basis="Z")

    def test_mirror_sectors(self):
        """
        Symétrie X ↔ Z : une erreur Z donne sur les X_p le flux que l'erreur X de
        même support donne sur les Z_p, et la correction Z est la transposée de
        la correction X.
        """
        code = derive_code(build_tetrahedral(3))
        zeros = np.zeros(self.dual.n_qubits, dtype=np.uint8)
        for _ in range(10):
            bits = random_flips(self.rng, self.dual.n_qubits, 0.2)
            flux_x = extract_gauge_syndrome(PauliOperator(bits), code, self.dual)
            flux_z = extract_gauge_syndrome(PauliOperator(zeros, bits), code, self.dual, basis="Z")
            np.testing.assert_array_equal(flux_x, flux_z)
            sigma = StabSyndrome(stabilizer_syndrome_bits(bits, self.dual))
            correction_x = decode_syndrome(sigma, self.dual)
            correction_z = decode_syndrome(sigma, self.dual, basis="Z")
            np.testing.assert_array_equal(correction_z.z_bits, correction_x.x_bits)
            self.assertFalse(correction_z.x_bits.any())
            residual = PauliOperator(zeros, bits ^ correction_z.z_bits)
            self.assertTrue(syndrome_of(residual, code).is_empty())

    def test_err_of_rejects_invalid_flux(self):
        """
        Une arête isolée porte une charge : err_of la refuse.
        """
        flux = np.zeros(self.dual.n_edges, dtype=np.uint8)
        flux[0] = 1
        self.assertFalse(is_valid_flux(flux, self.dual))
        with self.assertRaises(ValueError):
            err_of(flux, self.dual)

    def test_clusters_partition_flux(self):
        """
        Les amas couvrent exactement les arêtes du flux.
        """
        bits = random_flips(self.rng, self.dual.n_qubits, 0.3)
        flux = gauge_syndrome_bits(bits, self.dual)
        clusters = flux_clusters(flux, self.dual)
        covered = np.concatenate(clusters) if clusters else np.array([], dtype=np.int64)
        self.assertEqual(sorted(covered.tolist()), np.flatnonzero(flux).tolist())


class TestRepairAndDecoding(unittest.TestCase):
    """
    Tests pour la réparation, le décodeur et la fixation de jauge.
    """

    def setUp(self):
        """
        Préparer le dual, le décodeur et le fixateur de jauge pour d = 3.
        """
        self.rng = np.random.default_rng(42)
        self.dual = dualize(build_tetrahedral(3))
        self.decoder = SyndromeDecoder(self.dual)
        self.fixer = GaugeFixer(self.dual, self.decoder)

    def test_repair_makes_flux_valid(self):
        """
        Le syndrome réparé est valide et la réparation ne dépend que des erreurs de mesure.
        """
        repaired = 0
        for _ in range(30):
            gamma = gauge_syndrome_bits(random_flips(self.rng, self.dual.n_qubits, 0.2), self.dual)
            w = random_flips(self.rng, self.dual.n_edges, 0.05)
            try:
                delta0 = repair_gauge_syndrome(gamma ^ w, self.dual)
            except NonSyndromeEvent:
                continue
            repaired += 1
            self.assertTrue(is_valid_flux(gamma ^ w ^ delta0, self.dual))
            np.testing.assert_array_equal(delta0, repair_gauge_syndrome(w, self.dual))
        self.assertGreater(repaired, 0)

    def test_simplified_repair_per_label(self):
        """
        Sans point de branchement, la réparation étiquette par étiquette rend
        chaque étiquette de degré pair aux sommets internes.
        """
        self.assertFalse(simplified_flux_repair(np.zeros(self.dual.n_edges, dtype=np.uint8), self.dual).any())
        internal = [v for v in range(len(self.dual.is_external)) if not self.dual.is_external[v]]
        checked = 0
        for j, (u, v) in enumerate(self.dual.edges):
            if self.dual.is_external[u] or self.dual.is_external[v]:
                continue
            w = np.zeros(self.dual.n_edges, dtype=np.uint8)
            w[j] = 1
            repaired = w ^ simplified_flux_repair(w, self.dual)
            mask = int(self.dual.edge_masks[j])
            for vertex in internal:
                self.assertEqual(label_parity(repaired, self.dual, vertex, mask), 0)
            checked += 1
            if checked == 10:
                break
        self.assertGreater(checked, 0)

    def test_simplified_agrees_without_branching(self):
        """
        Sans point de branchement (une seule mesure fausse entre deux cellules),
        la réparation simplifiée rend l'arête elle-même et la réparation complète
        neutralise les mêmes charges, à un flux valide près et dans la borne a·b.
        """
        bound = get_repair_reduction(self.dual).reduction.ratio_bound
        checked = 0
        for j, (u, v) in enumerate(self.dual.edges):
            if self.dual.is_external[u] or self.dual.is_external[v]:
                continue
            w = np.zeros(self.dual.n_edges, dtype=np.uint8)
            w[j] = 1
            simple = simplified_flux_repair(w, self.dual)
            full = repair_gauge_syndrome(w, self.dual)
            np.testing.assert_array_equal(simple, w)
            self.assertTrue(is_valid_flux(simple ^ full, self.dual))
            self.assertLessEqual(int(full.sum()), bound)
            checked += 1
        self.assertGreater(checked, 0)

    def test_repair_reduction_contract(self):
        """
        La réduction de réparation respecte le contrat de relèvement, ses nœuds
        transformés portent une charge de {rg, gb, by} et son export porte son
        nom et ses constantes.
        """
        reduction = RepairReduction(self.dual)
        matching = reduction.reduction
        self.assertEqual(reduction.check_contract(), [])
        self.assertEqual(reduction.size, 2 * int((~self.dual.is_external).sum()))
        self.assertGreaterEqual(matching.a, 1)
        self.assertGreaterEqual(matching.b, 1)
        self.assertEqual(matching.ratio_bound, matching.a * matching.b)
        for pos in range(reduction.size):
            self.assertIn(reduction._charge(reduction.transform(reduction._indicator([pos]))), REPAIR_GENERATORS)
            self.assertTrue(matching.nodes[pos].endswith(mask_name(int(reduction.node_masks[pos]))))
        for j in range(self.dual.n_edges):
            w = np.zeros(self.dual.n_edges, dtype=np.uint8)
            w[j] = 1
            np.testing.assert_array_equal(reduction.node_bits(charge_of(w, self.dual)), reduction.check_matrix[:, j])
        text = matching.to_text()
        self.assertTrue(text.startswith(f"# reduction repair:{self.dual.name} a={matching.a} b={matching.b}"))

    def test_repair_ratio_against_oracle(self):
        """
        Flux valide aléatoire plus une mesure fausse : chaque composante de δ₀
        pèse au plus c = a·b fois la réparation minimale exhaustive de ses charges.
        """
        bound = get_repair_reduction(self.dual).reduction.ratio_bound
        graph = dual_charge_graph(self.dual)
        regions = np.flatnonzero(self.dual.is_external).tolist()
        charged = [
            j for j, (u, v) in enumerate(self.dual.edges)
            if not (self.dual.is_external[u] and self.dual.is_external[v])
        ]
        for j in charged[:8]:
            measured = gauge_syndrome_bits(random_flips(self.rng, self.dual.n_qubits, 0.2), self.dual)
            measured[j] ^= 1
            delta0 = repair_gauge_syndrome(measured, self.dual)
            self.assertTrue(is_valid_flux(measured ^ delta0, self.dual))
            optimum = enumerate_minimal_repair(charge_of(measured, self.dual).defects(), graph, absorbers=regions)
            self.assertEqual(len(optimum), 1)
            self.assertLessEqual(int(delta0.sum()), bound * len(optimum))
            self.assertLessEqual(minimal_repair_ratio(np.flatnonzero(delta0).tolist(), graph, absorbers=regions), bound)

    def test_shared_instances_are_cached(self):
        """
        Décodeur et réduction de réparation sont partagés par réseau dual, dans un cache borné.
        """
        decoder = get_decoder(self.dual)
        self.assertIs(get_decoder(self.dual), decoder)
        self.assertIs(get_repair_reduction(self.dual), get_repair_reduction(self.dual))
        info = _cached_decoder.cache_info()
        self.assertEqual(info.maxsize, DECODER_CACHE_SIZE)
        self.assertLessEqual(info.currsize, DECODER_CACHE_SIZE)

    def test_valid_flux_needs_no_repair(self):
        """
        Un flux valide a une carte de charges nulle et une réparation vide.
        """
        gamma = gauge_syndrome_bits(random_flips(self.rng, self.dual.n_qubits, 0.3), self.dual)
        self.assertTrue(charge_of(gamma, self.dual).is_zero())
        self.assertFalse(repair_gauge_syndrome(gamma, self.dual).any())

    def test_decoder_reproduces_syndrome(self):
        """
        La correction renvoyée a exactement le syndrome demandé.
        """
        for _ in range(30):
            bits = random_flips(self.rng, self.dual.n_qubits, 0.2)
            sigma = stabilizer_syndrome_bits(bits, self.dual)
            correction = self.decoder.decode_bits(sigma)
            np.testing.assert_array_equal(stabilizer_syndrome_bits(correction, self.dual), sigma)

    def test_decode_syndrome_operator(self):
        """
        La version opérateur du décodeur a le même syndrome que la version binaire.
        """
        bits = random_flips(self.rng, self.dual.n_qubits, 0.2)
        sigma = StabSyndrome(stabilizer_syndrome_bits(bits, self.dual))
        correction = decode_syndrome(sigma, self.dual)
        np.testing.assert_array_equal(stabilizer_syndrome_bits(correction.x_bits, self.dual), sigma.bits)
        self.assertFalse(correction.z_bits.any())

    def test_reduction_contract(self):
        """
        Chaque arête dérivée respecte le contrat de relèvement et l'export texte a ses sections.
        """
        reduction = SyndromeReduction(self.dual)
        self.assertEqual(reduction.check_contract(), [])
        self.assertGreaterEqual(self.decoder.a, 1)
        self.assertGreaterEqual(self.decoder.b, 1)
        text = reduction.reduction.to_text()
        self.assertTrue(text.startswith("# reduction"))
        for section in ("[NODE]", "[EDGE]", "[LIFT]"):
            self.assertIn(section, text)

    def test_single_errors_are_corrected(self):
        """
        Une erreur d'un seul qubit est corrigée à un stabilisateur près.
        """
        round_ = GaugeRound(build_tetrahedral(3))
        for q in range(self.dual.n_qubits):
            bits = np.zeros(self.dual.n_qubits, dtype=np.uint8)
            bits[q] = 1
            self.assertFalse(round_.logical_flag(bits))

    def test_gauge_fix_leaves_requested_residual(self):
        """
        Après correction et fixation sur γ_eff, le syndrome de jauge restant vaut γ + γ_eff.
        """
        for _ in range(20):
            errors = random_flips(self.rng, self.dual.n_qubits, 0.2)
            other = random_flips(self.rng, self.dual.n_qubits, 0.1)
            gamma = gauge_syndrome_bits(errors, self.dual)
            gamma_eff = gauge_syndrome_bits(errors ^ other, self.dual)
            correction, gauge = self.fixer.fix_bits(gamma_eff)
            residual = gauge_syndrome_bits(errors ^ correction ^ gauge, self.dual)
            np.testing.assert_array_equal(residual, gamma ^ gamma_eff)
            correction_op, gauge_op = gauge_fix(gamma_eff, self.dual, self.fixer)
            np.testing.assert_array_equal(correction_op.x_bits, correction)
            np.testing.assert_array_equal(gauge_op.x_bits, gauge)


class TestConfinement(unittest.TestCase):
    """
    Tests pour les témoins de confinement et la neutralité des composantes.
    """

    def setUp(self):
        """
        Préparer le dual du colex tétraédrique d = 3.
        """
        self.rng = np.random.default_rng(42)
        self.dual = dualize(build_tetrahedral(3))

    def test_witness_ratio_bounded(self):
        """
        Le témoin a le bon syndrome et un rapport |supp E| / |γ| au plus K.
        """
        K = confinement_constant(self.dual)
        self.assertGreater(K, 0)
        for _ in range(20):
            flux = gauge_syndrome_bits(random_flips(self.rng, self.dual.n_qubits, 0.15), self.dual)
            witness, ratio = k_confinement_witness(flux, self.dual)
            np.testing.assert_array_equal(
                stabilizer_syndrome_bits(witness.x_bits, self.dual), err_of(flux, self.dual).bits
            )
            self.assertLessEqual(ratio, K)

    def test_interior_components_are_neutral(self):
        """
        Une composante qui ne touche aucune région a une charge totale nulle.
        """
        flux = gauge_syndrome_bits(random_flips(self.rng, self.dual.n_qubits, 0.2), self.dual)
        for component in neutralization_check(flux, self.dual):
            if not component.touches_region:
                self.assertTrue(component.neutral)


class TestLargerDistance(unittest.TestCase):
    """
    Tests des réductions et du confinement aux distances 3 et 5.
    """

    @classmethod
    def setUpClass(cls):
        """
        Construire une seule fois les duaux et les réductions des deux tailles.
        """
        cls.duals = {d: dualize(build_tetrahedral(d)) for d in (3, 5)}
        cls.reductions = {
            d: (SyndromeReduction(dual), RepairReduction(dual)) for d, dual in cls.duals.items()
        }

    def setUp(self):
        """
        Initialiser le générateur aléatoire.
        """
        self.rng = np.random.default_rng(42)

    def test_contracts_at_d5(self):
        """
        À d = 5, décodage et réparation respectent le contrat de relèvement.
        """
        for reduction in self.reductions[5]:
            self.assertEqual(reduction.check_contract(), [])
            self.assertGreaterEqual(reduction.reduction.a, 1)
            self.assertGreaterEqual(reduction.reduction.b, 1)

    def test_constants_bounded_across_sizes(self):
        """
        Aux deux tailles, a ne dépasse pas six nœuds transformés par erreur
        élémentaire et chaque relèvement reste dans la boule de rayon maximal
        de son bloc : a et b ne croissent pas avec d.
        """
        for d in (3, 5):
            for reduction in self.reductions[d]:
                matching = reduction.reduction
                widths = [
                    int(reduction.transform(reduction.check_matrix[:, col]).sum())
                    for col in range(reduction.n_errors)
                ]
                self.assertLessEqual(matching.a, max(widths))
                self.assertLessEqual(max(widths), 6)
                for (u, v), lift in zip(matching.edges, matching.lifts):
                    block = (u,) if v is None else (u, v)
                    target = reduction.transform(reduction._indicator(block))
                    ball = set(reduction._ball_columns(target, LOCAL_RADII[-1]).tolist())
                    self.assertTrue(set(lift) <= ball, f"d={d}, bloc {block}")

    def test_witness_at_d5(self):
        """
        À d = 5, le témoin de confinement a le bon syndrome et un rapport au plus K.
        """
        dual = self.duals[5]
        K = confinement_constant(dual)
        for _ in range(5):
            flux = gauge_syndrome_bits(random_flips(self.rng, dual.n_qubits, 0.1), dual)
            witness, ratio = k_confinement_witness(flux, dual)
            np.testing.assert_array_equal(stabilizer_syndrome_bits(witness.x_bits, dual), err_of(flux, dual).bits)
            self.assertLessEqual(ratio, K)

    def test_repair_at_d5(self):
        """
        À d = 5, la réparation rend valide un flux bruité et ne dépend que des erreurs de mesure.
        """
        dual = self.duals[5]
        for _ in range(5):
            gamma = gauge_syndrome_bits(random_flips(self.rng, dual.n_qubits, 0.1), dual)
            w = random_flips(self.rng, dual.n_edges, 0.02)
            delta0 = repair_gauge_syndrome(gamma ^ w, dual)
            self.assertTrue(is_valid_flux(gamma ^ w ^ delta0, dual))
            np.testing.assert_array_equal(delta0, repair_gauge_syndrome(w, dual))


class TestGaugeRound(unittest.TestCase):
    """
    Tests pour le tour single-shot complet.
    """

    def setUp(self):
        """
        Préparer un tour sur le colex tétraédrique d = 3.
        """
        self.round = GaugeRound(build_tetrahedral(3))
        self.empty = np.zeros(self.round.n_qubits, dtype=np.uint8)

    def test_noiseless_round(self):
        """
        λ = η = 0 : rien ne change.
        """
        state, record = self.round.run(self.empty, 0.0, 0.0, seed=42)
        self.assertFalse(state.any())
        self.assertEqual((record.w, record.w0, record.residual_weight), (0, 0, 0))
        self.assertFalse(record.logical_flag)
        self.assertFalse(record.nonsyndrome_flag)

    def test_perfect_measurements_clear_residual(self):
        """
        Avec η = 0, le syndrome de jauge résiduel est vide après chaque tour.
        """
        state = self.empty
        for r in range(5):
            state, record = self.round.run(state, 0.03, 0.0, seed=100 + r, round_index=r)
            if not record.nonsyndrome_flag:
                self.assertEqual(record.residual_weight, 0)
                self.assertEqual(record.w0, 0)

    def test_logical_readout(self):
        """
        L'opérateur de région libre se lit comme un X logique ; l'état vide se lit 0.
        """
        logical = self.round.logical_support.astype(np.uint8)
        self.assertTrue(self.round.logical_flag(logical))
        self.assertEqual(self.round.logical_measurement_decode(logical, 0.0, seed=1), 1)
        self.assertEqual(self.round.logical_measurement_decode(self.empty, 0.0, seed=1), 0)

    def test_rate_validation(self):
        """
        Un taux hors de [0, 1] est refusé.
        """
        with self.assertRaises(ValueError):
            self.round.run(self.empty, 0.0, 1.5)


if __name__ == '__main__':
    unittest.main()
