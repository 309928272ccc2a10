"""
Tests unitaires pour le moteur de simulation : configuration, amas,
statistiques, exécution parallèle et interface en ligne de commande.
"""

import unittest
import os
import sys
import json
import tempfile
from collections import Counter
import networkx as nx
import numpy as np
import pandas as pd
from scipy import sparse

# Ajouter le répertoire parent au chemin de recherche des modules
parent_dir = os.path.abspath(os.path.join(os.path.dirname(__file__), ".."))
sys.path.append(parent_dir)
sys.path.append(os.path.join(parent_dir, "scripts"))

# Importer les modules à tester
from src.sim_harness.clusters import ClusterStats, cluster_decompose, stats_by_point
from src.sim_harness.config import ExperimentConfig, load_config, save_config
from src.sim_harness.runner import TRIAL_COLUMNS, build_model, run, run_trial, write_outputs
from src.sim_harness.stats import (
    connectivity_growth,
    fit_confinement,
    per_round_failure,
    sustainability_report,
    wilson_interval,
)
from src.utils.exceptions import ConfigError
import qec_cli


def small_config(**overrides):
    data = {
        "name": "test",
        "family": "ising",
        "sizes": [4],
        "lambdas": [0.02],
        "etas": [0.02],
        "rounds": 3,
        "trials": 4,
        "seed": 11,
        "plots": False,
    }
    data.update(overrides)
    return ExperimentConfig(**data)


class TestExperimentConfig(unittest.TestCase):
    """
    Tests pour la configuration des expériences.
    """

    def test_invalid_fields(self):
        """
        Chaque champ invalide est signalé avec son chemin.
        """
        cases = [
            ({"family": "surface"}, "family"),
            ({"sizes": []}, "sizes"),
            ({"sizes": [4, 1]}, "sizes[1]"),
            ({"family": "gauge", "sizes": [4]}, "sizes[0]"),
            ({"lambdas": [0.1, 1.5]}, "lambdas[1]"),
            ({"etas": [-0.1]}, "etas[0]"),
            ({"rounds": 0}, "rounds"),
            ({"threads": 0}, "threads"),
        ]
        for overrides, path in cases:
            with self.assertRaises(ConfigError) as ctx:
                small_config(**overrides)
            self.assertEqual(ctx.exception.field_path, path)

    def test_unknown_field(self):
        """
        Un champ inconnu ou un document non objet est refusé.
        """
        with self.assertRaises(ConfigError) as ctx:
            ExperimentConfig.from_dict({"family": "ising", "temperature": 1})
        self.assertEqual(ctx.exception.field_path, "temperature")
        with self.assertRaises(ConfigError):
            ExperimentConfig.from_dict([1, 2])

    def test_grid_order(self):
        """
        La grille parcourt les tailles, puis λ, puis η.
        """
        config = small_config(sizes=[4, 6], lambdas=[0.01, 0.02], etas=[0.03])
        grid = config.grid()
        self.assertEqual(len(grid), 4)
        self.assertEqual(grid[1], {"size": 4, "lambda": 0.02, "eta": 0.03})
        self.assertEqual(grid[2]["size"], 6)

    def test_predefined_and_files(self):
        """
        Une expérience prédéfinie se sauvegarde et se recharge à l'identique.
        """
        config = ExperimentConfig.predefined("gauge_smoke", trials=5)
        self.assertEqual(config.family, "gauge")
        self.assertEqual(config.trials, 5)
        with self.assertRaises(ValueError):
            ExperimentConfig.predefined("inconnue")
        with tempfile.TemporaryDirectory() as tmp:
            path = save_config(config, os.path.join(tmp, "conf", "smoke.json"))
            self.assertEqual(load_config(path), config)

    def test_shipped_configs(self):
        """
        Les documents du répertoire config/ sont valides.
        """
        for name in ("ising_crossing.json", "gauge_smoke.json"):
            config = load_config(os.path.join(parent_dir, "config", name))
            self.assertTrue(config.grid())


class TestClusters(unittest.TestCase):
    """
    Tests pour la décomposition en amas et les histogrammes.
    """

    def test_empty(self):
        """
        Aucun défaut : aucun amas.
        """
        self.assertEqual(cluster_decompose(np.zeros(5, dtype=np.uint8), nx.path_graph(5)), [])

    def test_sparse_adjacency(self):
        """
        Sur un chemin, deux défauts voisins forment un amas et un défaut éloigné un autre.
        """
        adjacency = sparse.diags([1, 1], [-1, 1], shape=(6, 6))
        clusters = cluster_decompose(np.array([1, 1, 0, 0, 1, 0], dtype=np.uint8), adjacency)
        self.assertEqual([c.tolist() for c in clusters], [[0, 1], [4]])

    def test_graph_with_missing_nodes(self):
        """
        Un indice absent du graphe forme un amas isolé.
        """
        clusters = cluster_decompose([5, 0], nx.path_graph(3))
        self.assertEqual([c.tolist() for c in clusters], [[0], [5]])

    def test_histogram_frame_round_trip(self):
        """
        Un histogramme écrit en tableau puis regroupé par point redonne les mêmes effectifs.
        """
        stats = ClusterStats()
        stats.add([1, 1, 2])
        stats.add([])
        stats.add([3, 1])
        self.assertEqual(stats.histogram, Counter({1: 3, 2: 1, 3: 1}))
        self.assertEqual(stats.largest, [2, 0, 3])
        self.assertEqual(stats.total_size, 8)
        frame = stats.to_frame("ising", 8, 0.01, 0.02)
        regrouped = stats_by_point(frame)
        self.assertEqual(regrouped[("ising", 8, 0.01, 0.02)].histogram, stats.histogram)
        with self.assertRaises(ValueError):
            stats_by_point(frame.drop(columns=["count"]))


class TestStatistics(unittest.TestCase):
    """
    Tests pour les intervalles, l'ajustement du confinement et le test de dérive.
    """

    def test_wilson_interval(self):
        """
        L'intervalle contient le taux observé ; n = 0 donne [0, 1].
        """
        rate, low, high = wilson_interval(5, 100)
        self.assertEqual(rate, 0.05)
        self.assertLess(low, 0.05)
        self.assertGreater(high, 0.05)
        self.assertEqual(wilson_interval(0, 0), (0.0, 0.0, 1.0))
        with self.assertRaises(ValueError):
            wilson_interval(3, 2)

    def test_per_round_failure(self):
        """
        1 − (1 − p)^T redonne le taux par essai.
        """
        p = per_round_failure(0.19, 2)
        self.assertAlmostEqual(1 - (1 - p) ** 2, 0.19, places=12)
        self.assertEqual(per_round_failure(1.0, 5), 1.0)
        self.assertEqual(per_round_failure(0.0, 5), 0.0)

    def test_exponential_decay_fit(self):
        """
        Des effectifs proportionnels à 0.3^s donnent υ = 0.3 et un statut confiné.
        """
        histogram = {1: 50}
        histogram.update({s: int(round(10 ** 6 * 0.3 ** s)) for s in range(2, 7)})
        stats = ClusterStats.from_histogram(histogram)
        fit = fit_confinement(stats, eta=0.01)
        self.assertAlmostEqual(fit.upsilon, 0.3, places=3)
        self.assertEqual(fit.status, "confined")
        self.assertEqual(fit.bins, 5)
        self.assertTrue(stats.confined)
        self.assertEqual(fit_confinement(ClusterStats.from_histogram(histogram), eta=0.0).status, "baseline")

    def test_insufficient_bins(self):
        """
        Moins de trois classes de taille ≥ 2 : pas d'ajustement, même avec deux classes
        qui fixeraient une pente sans degré de liberté résiduel.
        """
        fit = fit_confinement(ClusterStats.from_histogram({1: 40, 2: 3}), eta=0.01)
        self.assertIsNone(fit.upsilon)
        self.assertEqual(fit.status, "insufficient")
        stats = ClusterStats.from_histogram({1: 40, 2: 10, 3: 3})
        fit = fit_confinement(stats, eta=0.01)
        self.assertEqual(fit.bins, 2)
        self.assertEqual(fit.status, "insufficient")
        self.assertIsNone(fit.upsilon)
        self.assertIsNone(fit.ci)
        self.assertIsNone(stats.confined)
        fit = fit_confinement(ClusterStats.from_histogram({2: 80, 3: 20, 4: 6}), eta=0.01)
        self.assertEqual(fit.bins, 3)
        self.assertIsNotNone(fit.ci)
        self.assertLessEqual(fit.ci[0], fit.upsilon)
        self.assertLessEqual(fit.upsilon, fit.ci[1])

    def test_wilson_coverage(self):
        """
        Sur 10³ flux de Bernoulli simulés, l'intervalle à 95 % couvre le vrai taux
        dans 93 % à 97 % des cas.
        """
        rng = np.random.default_rng(42)
        p, n, replications = 0.3, 200, 1000
        covered = 0
        for successes in rng.binomial(n, p, size=replications):
            _, low, high = wilson_interval(int(successes), n)
            covered += low <= p <= high
        self.assertGreaterEqual(covered / replications, 0.93)
        self.assertLessEqual(covered / replications, 0.97)

    def test_sustainability(self):
        """
        Une série constante ne dérive pas ; une série croissante dérive à la hausse.
        """
        flat = sustainability_report(np.full(25, 3.0))
        self.assertFalse(flat.drift)
        self.assertEqual(flat.direction, "stable")
        rising = sustainability_report(np.arange(25, dtype=float))
        self.assertTrue(rising.drift)
        self.assertEqual(rising.direction, "hausse")
        with self.assertRaises(ValueError):
            sustainability_report(np.zeros(10))

    def test_connectivity_growth(self):
        """
        Sur un cycle, C_s = s ensembles connexes contiennent la racine : max s^(1/s) = 3^(1/3).
        """
        self.assertAlmostEqual(connectivity_growth(nx.cycle_graph(10)), 3 ** (1 / 3), places=12)
        self.assertEqual(connectivity_growth(nx.Graph()), 0.0)


class TestRunner(unittest.TestCase):
    """
    Tests pour l'exécution des essais et l'écriture des résultats.
    """

    def test_trial_is_reproducible(self):
        """
        Un essai ne dépend que de (graine, indice d'essai, point de grille).
        """
        model = build_model("ising", 4)
        a = run_trial(model, 0.05, 0.05, 5, base_seed=3, trial=2, stream=0)
        b = run_trial(model, 0.05, 0.05, 5, base_seed=3, trial=2, stream=0)
        self.assertEqual(a.to_rows(), b.to_rows())
        with self.assertRaises(ValueError):
            build_model("surface", 4)

    def test_zero_trials(self):
        """
        Aucun essai : tableaux vides et taux nuls.
        """
        result = run(small_config(trials=0))
        self.assertTrue(result.trials.empty)
        self.assertEqual(list(result.trials.columns), TRIAL_COLUMNS)
        point = result.summary["points"][0]
        self.assertEqual(point["trials"], 0)
        self.assertEqual(point["failure_rate"], 0.0)
        self.assertEqual(point["confinement"]["status"], "insufficient")

    def test_thread_count_does_not_change_results(self):
        """
        1 ou 2 threads produisent des fichiers identiques.
        """
        config = small_config(lambdas=[0.02, 0.05])
        with tempfile.TemporaryDirectory() as tmp:
            contents = []
            for threads in (1, 2):
                out_dir = os.path.join(tmp, f"t{threads}")
                write_outputs(run(config, threads=threads), out_dir, plots=False)
                files = {}
                for name in ("trials.csv", "clusters.csv", "summary.json"):
                    with open(os.path.join(out_dir, name), "rb") as f:
                        files[name] = f.read()
                contents.append(files)
        self.assertEqual(contents[0], contents[1])

    def test_write_outputs_and_fit_command(self):
        """
        Les résultats et graphiques sont écrits, puis ré-analysés par la commande fit.
        """
        config = small_config(lambdas=[0.01], etas=[0.01], rounds=20, trials=3)
        result = run(config)
        self.assertEqual(len(result.summary["points"]), 1)
        self.assertIsNotNone(result.summary["points"][0]["sustainability"])
        with tempfile.TemporaryDirectory() as tmp:
            paths = write_outputs(result, tmp, plots=True)
            for key in ("trials", "clusters", "summary", "plot_failure", "plot_residual", "plot_clusters"):
                self.assertTrue(os.path.exists(paths[key]), key)
            trials = pd.read_csv(paths["trials"])
            self.assertEqual(list(trials.columns), TRIAL_COLUMNS)
            self.assertEqual(qec_cli.main(["fit", "--input-dir", tmp]), 0)
            with open(os.path.join(tmp, "fit.json")) as f:
                fits = json.load(f)
        self.assertIn("points", fits)

    def test_gauge_family(self):
        """
        La famille de jauge s'exécute sur le colex tétraédrique d = 3.
        """
        result = run(small_config(family="gauge", sizes=[3], rounds=2, trials=2))
        self.assertFalse(result.trials.empty)
        self.assertTrue((result.trials["family"] == "gauge").all())


class TestMonteCarloAcceptance(unittest.TestCase):
    """
    Comportements qualitatifs du code d'Ising single-shot sur des expériences graines.
    """

    def test_confinement_lost_at_maximal_measurement_noise(self):
        """
        Sous bruit de mesure modéré l'histogramme des amas décroît (υ < 1) ; à η = 0.5
        la décroissance s'affaiblit et les amas résiduels grossissent.
        """
        config = small_config(sizes=[6], lambdas=[0.0], etas=[0.1, 0.5], rounds=1, trials=400, seed=5)
        result = run(config)
        moderate, maximal = result.summary["points"]
        self.assertEqual(moderate["confinement"]["status"], "confined")
        self.assertLess(moderate["confinement"]["upsilon"], 1.0)
        self.assertNotEqual(maximal["confinement"]["status"], "insufficient")
        self.assertGreater(maximal["confinement"]["upsilon"], moderate["confinement"]["upsilon"])
        kept = result.trials[result.trials["nonsyndrome_flag"] == 0]
        largest = kept.groupby("eta")["largest_cluster"].mean()
        self.assertGreater(largest[0.5], 2 * largest[0.1])

    def test_failures_decrease_with_size(self):
        """
        Sous le seuil, 10³ essais par taille : les échecs (logiques ou non-syndrome)
        diminuent de L = 4 à L = 8 avec des intervalles de Wilson séparés.
        """
        config = small_config(sizes=[4, 8], lambdas=[0.05], etas=[0.05], rounds=4, trials=1000, seed=7)
        result = run(config)
        intervals = {}
        for point in result.summary["points"]:
            self.assertEqual(point["trials"], 1000)
            _, low, high = wilson_interval(point["failures"] + point["discarded"], point["trials"])
            intervals[point["size"]] = (low, high)
        self.assertLess(intervals[8][1], intervals[4][0])

    def test_residual_weight_is_stationary(self):
        """
        À faible bruit, le poids résiduel moyen par tour ne dérive pas sur 25 tours.
        """
        config = small_config(sizes=[8], lambdas=[0.01], etas=[0.01], rounds=25, trials=20, seed=3)
        result = run(config)
        self.assertIsNotNone(result.summary["points"][0]["sustainability"])
        kept = result.trials[result.trials["nonsyndrome_flag"] == 0]
        series = kept.groupby("round")["residual_weight"].mean().sort_index()
        self.assertEqual(len(series), 25)
        report = sustainability_report(series.to_numpy(), alpha=0.01)
        self.assertFalse(report.drift)


class TestCommandLine(unittest.TestCase):
    """
    Tests pour l'interface en ligne de commande.
    """

    def test_build_and_validate(self):
        """
        Un colex construit par la commande est validé avec le code de sortie 0.
        """
        with tempfile.TemporaryDirectory() as tmp:
            code = qec_cli.main(["build-code", "--kind", "tetrahedral", "--size", "3", "--with-code", "--out-dir", tmp])
            self.assertEqual(code, 0)
            colex_path = os.path.join(tmp, "tetrahedral-d3.json")
            self.assertTrue(os.path.exists(os.path.join(tmp, "tetrahedral-d3.txt")))
            with open(os.path.join(tmp, "tetrahedral-d3.reduction.txt")) as f:
                self.assertIn("[LIFT]", f.read())
            with open(os.path.join(tmp, "tetrahedral-d3.repair_reduction.txt")) as f:
                text = f.read()
            self.assertTrue(text.startswith("# reduction repair:tetrahedral-d3"))
            self.assertIn("[EDGE]", text)
            self.assertEqual(qec_cli.main(["validate-colex", "--input", colex_path]), 0)

    def test_read_bits(self):
        """
        Les bits se lisent avec ou sans séparateurs ; un autre caractère est refusé.
        """
        np.testing.assert_array_equal(qec_cli.read_bits("1,0 1"), [1, 0, 1])
        self.assertEqual(qec_cli.format_bits([1, 0, 1]), "101")
        with self.assertRaises(ValueError):
            qec_cli.read_bits("102")

    def test_decode_ising(self):
        """
        Un syndrome vide se décode sans correction.
        """
        self.assertEqual(qec_cli.main(["decode", "--ising", "4", "--syndrome", "0" * 32]), 0)


if __name__ == '__main__':
    unittest.main()
