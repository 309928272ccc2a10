"""
Export et import JSON des colex.
"""

import json
import logging
import os
from typing import Any, Dict

from src.colex_lattice.complex import COLOR_NAMES, Colex, label_name
from src.colex_lattice.validation import classify_regions

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1


def colex_to_dict(colex: Colex) -> Dict[str, Any]:
    """
    Représentation JSON d'un colex.

    Seuls ``vertices`` et ``tetrahedra`` sont relus ; les autres sections
    (plaquettes, cellules, régions) sont fournies pour inspection.
    """
    classification = classify_regions(colex)
    return {
        "schema_version": SCHEMA_VERSION,
        "name": colex.name,
        "vertices": [
            {"id": v, "color": COLOR_NAMES[int(c)], "external": bool(colex.is_external[v])}
            for v, c in enumerate(colex.vertex_colors)
        ],
        "tetrahedra": colex.tetrahedra.tolist(),
        "qubit_kappa": ["".join(COLOR_NAMES[c] for c in colex.qubit_kappa(q)) for q in range(colex.n_qubits)],
        "plaquettes": [
            {"edge": list(e), "label": label_name(colex.plaquette_label(e)), "qubits": colex.edge_qubits[e]}
            for e in colex.plaquettes
        ],
        "cells": [
            {"vertex": int(v), "color": COLOR_NAMES[int(colex.vertex_colors[v])], "qubits": colex.vertex_qubits(v).tolist()}
            for v in colex.internal_vertices
        ],
        "regions": [
            {
                "vertex": int(v),
                "color": COLOR_NAMES[int(colex.vertex_colors[v])],
                "status": classification.region_status[int(v)],
            }
            for v in colex.external_vertices
        ],
        "borders": [
            {"edge": list(e), "odd": classification.border_odd[e]} for e in colex.borders
        ],
    }


def colex_from_dict(data: Dict[str, Any]) -> Colex:
    version = data.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ValueError(f"Version de schéma non supportée: {version}")
    vertices = sorted(data["vertices"], key=lambda item: item["id"])
    colors = [COLOR_NAMES.index(item["color"]) for item in vertices]
    external = [bool(item["external"]) for item in vertices]
    return Colex(colors, external, data["tetrahedra"], name=data.get("name", ""))


def save_colex(colex: Colex, filepath: str):
    """Sauvegarder un colex au format JSON."""
    try:
        directory = os.path.dirname(filepath)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(filepath, "w", encoding="utf-8") as f:
            json.dump(colex_to_dict(colex), f, indent=4)
        logger.info(f"Colex sauvegardé dans {filepath}")
    except OSError as e:
        logger.error(f"Erreur lors de la sauvegarde du colex: {e}")
        raise


def load_colex(filepath: str) -> Colex:
    """Charger un colex depuis un fichier JSON."""
    try:
        with open(filepath, "r", encoding="utf-8") as f:
            data = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        logger.error(f"Erreur lors du chargement du colex {filepath}: {e}")
        raise
    colex = colex_from_dict(data)
    logger.info(f"Colex chargé depuis {filepath}: {colex}")
    return colex
