"""
Graphiques SVG des expériences (courbes de croisement, histogrammes d'amas,
poids résiduel par tour).
"""

import logging
import os
from typing import Any, Dict

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import pandas as pd  # noqa: E402

logger = logging.getLogger(__name__)

# Pas de date dans les SVG : deux exécutions identiques produisent les mêmes octets
SVG_METADATA = {"Date": None}
matplotlib.rcParams["svg.hashsalt"] = "single-shot-qec"


def _save(fig, path: str) -> str:
    try:
        fig.savefig(path, format="svg", metadata=SVG_METADATA)
    except Exception as e:
        logger.error(f"Erreur lors de l'écriture du graphique {path}: {e}")
        raise
    finally:
        plt.close(fig)
    return path


def plot_failure_crossing(summary: Dict[str, Any], path: str) -> str:
    """Taux d'échec logique contre λ, une courbe par taille (barres : IC de Wilson)."""
    points = pd.DataFrame(summary["points"])
    fig, ax = plt.subplots(figsize=(6, 4))
    for (size, eta), group in points.groupby(["size", "eta"], sort=True):
        group = group.sort_values("lambda")
        low = group["failure_rate"] - group["failure_ci"].str[0]
        high = group["failure_ci"].str[1] - group["failure_rate"]
        ax.errorbar(group["lambda"], group["failure_rate"], yerr=[low, high], marker="o", capsize=3, label=f"taille={size}, η={eta}")
    ax.set_xlabel("λ")
    ax.set_ylabel("Taux d'échec logique")
    ax.set_title(f"{summary['experiment']} ({summary['family']})")
    ax.grid(True, ls="--")
    if len(points):
        ax.legend()
    return _save(fig, path)


def plot_cluster_histogram(summary: Dict[str, Any], clusters: pd.DataFrame, path: str) -> str:
    """Nombre d'amas résiduels par taille, échelle logarithmique."""
    fig, ax = plt.subplots(figsize=(6, 4))
    for key, group in clusters.groupby(["size", "lambda", "eta"], sort=True):
        size, lam, eta = key
        ax.plot(group["cluster_size"], group["count"], marker="s", label=f"taille={size}, λ={lam}, η={eta}")
    ax.set_yscale("log")
    ax.set_xlabel("Taille d'amas")
    ax.set_ylabel("Nombre d'amas")
    ax.set_title(f"Confinement: {summary['experiment']}")
    ax.grid(True, which="both", ls="--")
    if len(clusters):
        ax.legend()
    return _save(fig, path)


def plot_residual_weight(trials: pd.DataFrame, path: str) -> str:
    """Poids résiduel moyen par tour, une courbe par point de grille."""
    fig, ax = plt.subplots(figsize=(6, 4))
    valid = trials[trials["nonsyndrome_flag"] == 0]
    for key, group in valid.groupby(["size", "lambda", "eta"], sort=True):
        size, lam, eta = key
        mean = group.groupby("round")["residual_weight"].mean()
        ax.plot(mean.index, mean.values, label=f"taille={size}, λ={lam}, η={eta}")
    ax.set_xlabel("Tour")
    ax.set_ylabel("Poids résiduel moyen")
    ax.grid(True, ls="--")
    if len(valid):
        ax.legend()
    return _save(fig, path)


def save_experiment_plots(trials: pd.DataFrame, summary: Dict[str, Any], plots_dir: str, clusters: pd.DataFrame = None) -> Dict[str, str]:
    """
    Écrire les graphiques d'une expérience dans ``plots_dir``.

    Returns:
        Nom du graphique -> chemin du fichier SVG
    """
    os.makedirs(plots_dir, exist_ok=True)
    paths = {
        "plot_failure": plot_failure_crossing(summary, os.path.join(plots_dir, "failure_crossing.svg")),
        "plot_residual": plot_residual_weight(trials, os.path.join(plots_dir, "residual_weight.svg")),
    }
    if clusters is not None:
        paths["plot_clusters"] = plot_cluster_histogram(summary, clusters, os.path.join(plots_dir, "cluster_histogram.svg"))
    logger.info(f"Graphiques sauvegardés dans {plots_dir}")
    return paths
