"""
Moteur Monte Carlo : exécution de la grille d'essais, agrégation et
écriture des fichiers de résultats.
"""

import itertools
import json
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple

import networkx as nx
import numpy as np
import pandas as pd

from src.colex_lattice.builders import build_tetrahedral
from src.gauge_color_code.round import GaugeRound
from src.repetition_2d.decoder import single_shot_round
from src.repetition_2d.torus import TorusLattice
from src.sim_harness.clusters import ClusterStats
from src.sim_harness.config import ExperimentConfig
from src.sim_harness.plots import save_experiment_plots
from src.sim_harness.stats import (
    MIN_SUSTAINABILITY_ROUNDS,
    connectivity_growth,
    fit_confinement,
    per_round_failure,
    sustainability_report,
    wilson_interval,
)
from src.utils.records import RoundRecord
from src.utils.seeding import trial_rng

logger = logging.getLogger(__name__)

TRIAL_COLUMNS = [
    "family",
    "size",
    "lambda",
    "eta",
    "trial",
    "round",
    "w",
    "w0",
    "residual_weight",
    "largest_cluster",
    "nonsyndrome_flag",
    "logical_flag",
]


@dataclass
class TrialRecord:
    """
    Tours successifs d'un essai ; on ne fait qu'y ajouter des tours.

    Un essai interrompu par un événement non-syndrome s'arrête à ce tour et
    est écarté des taux d'échec.
    """

    family: str
    size: int
    lam: float
    eta: float
    trial: int
    rounds: List[RoundRecord] = field(default_factory=list)

    def append(self, record: RoundRecord):
        self.rounds.append(record)

    @property
    def discarded(self) -> bool:
        return any(r.nonsyndrome_flag for r in self.rounds)

    @property
    def failed(self) -> bool:
        return bool(self.rounds) and not self.discarded and self.rounds[-1].logical_flag

    def to_rows(self) -> List[Dict[str, Any]]:
        base = {"family": self.family, "size": self.size, "lambda": self.lam, "eta": self.eta, "trial": self.trial}
        return [
            {
                **base,
                "round": r.round,
                "w": r.w,
                "w0": r.w0,
                "residual_weight": r.residual_weight,
                "largest_cluster": r.largest_cluster,
                "nonsyndrome_flag": int(r.nonsyndrome_flag),
                "logical_flag": int(r.logical_flag),
            }
            for r in self.rounds
        ]


@dataclass
class FamilyModel:
    """Un code d'une famille, prêt à exécuter des tours ; partagé entre threads."""

    family: str
    size: int
    n_qubits: int
    step: Callable[[np.ndarray, float, float, np.random.Generator, int], Tuple[np.ndarray, RoundRecord]]
    locality: nx.Graph


def build_model(family: str, size: int) -> FamilyModel:
    """
    Construire le code d'une famille et son graphe de localité.

    Args:
        family: "ising" (tore L×L) ou "gauge" (colex tétraédrique de distance d)
        size: L ou d
    """
    if family == "ising":
        lattice = TorusLattice(size)
        locality = nx.from_scipy_sparse_array(lattice.edge_adjacency)
        locality.remove_edges_from(list(nx.selfloop_edges(locality)))

        def step(state, lam, eta, rng, r):
            return single_shot_round(lattice, state, lam, eta, rng, r)

        return FamilyModel(family, size, lattice.n_faces, step, locality)
    if family == "gauge":
        gauge_round = GaugeRound(build_tetrahedral(size))
        dual = gauge_round.dual
        locality = nx.Graph()
        locality.add_nodes_from(range(dual.n_edges))
        # Deux arêtes sont voisines si elles partagent un sommet interne
        for v in np.flatnonzero(~dual.is_external):
            locality.add_edges_from(itertools.combinations(dual.incident_edges[int(v)], 2))
        return FamilyModel(family, size, gauge_round.n_qubits, gauge_round.run, locality)
    raise ValueError(f"Famille inconnue: {family}")


def run_trial(model: FamilyModel, lam: float, eta: float, rounds: int, base_seed: int, trial: int, stream: int) -> TrialRecord:
    """
    Exécuter un essai de ``rounds`` tours à partir d'un état sans erreur.

    Le générateur dépend uniquement de (graine de base, indice d'essai, point de grille).
    """
    rng = trial_rng(base_seed, trial, stream)
    record = TrialRecord(model.family, model.size, lam, eta, trial)
    state = np.zeros(model.n_qubits, dtype=np.uint8)
    for r in range(rounds):
        state, round_record = model.step(state, lam, eta, rng, r)
        record.append(round_record)
        if round_record.nonsyndrome_flag:
            break
    return record


@dataclass
class ExperimentResult:
    """Résultats d'une expérience : tableaux d'essais et d'amas, résumé."""

    config: ExperimentConfig
    trials: pd.DataFrame
    clusters: pd.DataFrame
    summary: Dict[str, Any]
    cluster_stats: Dict[Tuple, ClusterStats] = field(default_factory=dict)


def _point_summary(config: ExperimentConfig, point: Dict[str, Any], records: List[TrialRecord], stats: ClusterStats, growth: float) -> Dict[str, Any]:
    kept = [t for t in records if not t.discarded]
    failures = sum(t.failed for t in kept)
    rate, low, high = wilson_interval(failures, len(kept))
    fit = fit_confinement(stats, point["eta"])
    stats.growth_constant = growth
    summary = {
        "family": config.family,
        "size": point["size"],
        "lambda": point["lambda"],
        "eta": point["eta"],
        "trials": len(records),
        "discarded": len(records) - len(kept),
        "discard_rate": (len(records) - len(kept)) / len(records) if records else 0.0,
        "failures": int(failures),
        "failure_rate": rate,
        "failure_ci": [low, high],
        "failure_rate_per_round": per_round_failure(rate, config.rounds),
        "confinement": {**stats.summary(), "status": fit.status},
        "sustainability": None,
    }
    if kept and config.rounds >= MIN_SUSTAINABILITY_ROUNDS:
        weights = np.array([[r.residual_weight for r in t.rounds] for t in kept], dtype=float)
        report = sustainability_report(weights.mean(axis=0))
        summary["sustainability"] = {
            "tau": report.tau,
            "p_value": report.p_value,
            "drift": report.drift,
            "direction": report.direction,
            "mean_residual_weight": report.mean,
        }
    return summary


def run(config: ExperimentConfig, threads: Optional[int] = None) -> ExperimentResult:
    """
    Exécuter toute la grille d'essais.

    Les essais sont répartis sur un pool de threads puis fusionnés dans
    l'ordre (point de grille, indice d'essai) : le résultat ne dépend pas du
    nombre de threads.

    Args:
        config: Configuration validée
        threads: Remplace ``config.threads`` si fourni

    Returns:
        ExperimentResult
    """
    config.validate()
    workers = threads or config.threads
    grid = config.grid()
    logger.info(f"Simulation '{config.name}': {len(grid)} point(s), {config.trials} essai(s), {workers} thread(s)")

    models: Dict[int, FamilyModel] = {}
    growth: Dict[int, float] = {}
    for size in config.sizes:
        if size not in models:
            models[size] = build_model(config.family, size)
            growth[size] = connectivity_growth(models[size].locality)

    tasks = [(stream, trial) for stream in range(len(grid)) for trial in range(config.trials)]

    def execute(task):
        stream, trial = task
        point = grid[stream]
        return run_trial(models[point["size"]], point["lambda"], point["eta"], config.rounds, config.seed, trial, stream)

    with ThreadPoolExecutor(max_workers=workers) as executor:
        records = list(executor.map(execute, tasks))

    by_point: Dict[int, List[TrialRecord]] = {i: [] for i in range(len(grid))}
    for (stream, _), record in zip(tasks, records):
        by_point[stream].append(record)

    rows, cluster_frames, points, all_stats = [], [], [], {}
    for stream, point in enumerate(grid):
        stats = ClusterStats()
        for record in by_point[stream]:
            rows.extend(record.to_rows())
            for r in record.rounds:
                if not r.nonsyndrome_flag:
                    stats.add(r.cluster_sizes)
        points.append(_point_summary(config, point, by_point[stream], stats, growth[point["size"]]))
        cluster_frames.append(stats.to_frame(config.family, point["size"], point["lambda"], point["eta"]))
        all_stats[(config.family, point["size"], point["lambda"], point["eta"])] = stats

    trials = pd.DataFrame(rows, columns=TRIAL_COLUMNS)
    clusters = pd.concat(cluster_frames, ignore_index=True) if cluster_frames else pd.DataFrame()
    summary = {
        "experiment": config.name,
        "family": config.family,
        "seed": config.seed,
        "rounds": config.rounds,
        "trials_per_point": config.trials,
        "points": points,
    }
    logger.info(f"Simulation terminée: {len(records)} essai(s), {len(rows)} tour(s) enregistrés")
    return ExperimentResult(config, trials, clusters, summary, all_stats)


def write_outputs(result: ExperimentResult, out_dir: str, plots: Optional[bool] = None) -> Dict[str, str]:
    """
    Écrire ``trials.csv``, ``clusters.csv``, ``summary.json`` et les graphiques.

    Returns:
        Nom logique -> chemin du fichier écrit
    """
    os.makedirs(out_dir, exist_ok=True)
    paths = {
        "trials": os.path.join(out_dir, "trials.csv"),
        "clusters": os.path.join(out_dir, "clusters.csv"),
        "summary": os.path.join(out_dir, "summary.json"),
    }
    try:
        result.trials.to_csv(paths["trials"], index=False)
        result.clusters.to_csv(paths["clusters"], index=False)
        with open(paths["summary"], "w") as f:
            json.dump(result.summary, f, indent=4)
    except Exception as e:
        logger.error(f"Erreur lors de l'écriture des résultats: {e}")
        raise
    logger.info(f"Résultats sauvegardés dans {out_dir}")
    if result.config.plots if plots is None else plots:
        paths.update(save_experiment_plots(result.trials, result.summary, os.path.join(out_dir, "plots"), result.clusters))
    return paths
