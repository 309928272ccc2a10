"""
Format texte des canaux explicites : même syntaxe d'opérateurs que les
codes, précédée d'une colonne de probabilité.

    3
    [CHANNEL]
    0.729 X:;Z:
    0.081 X:0;Z:
"""

import logging
import os

from src.noise_channels.channels import PauliChannel
from src.pauli_core.code_io import format_operator, parse_operator, split_sections

logger = logging.getLogger(__name__)


def channel_to_text(channel: PauliChannel) -> str:
    """Sérialiser un canal explicite (``repr`` des probabilités, sans perte)."""
    lines = [str(channel.n), "[CHANNEL]"]
    lines.extend(f"{p!r} {format_operator(op)}" for p, op in channel.terms())
    return "\n".join(lines) + "\n"


def channel_from_text(text: str) -> PauliChannel:
    """
    Lire un canal explicite.

    Raises:
        ValueError: document mal formé ou canal non normalisé
    """
    sections = split_sections(text)
    if not sections or sections[0][0] != "" or len(sections[0][1]) != 1:
        raise ValueError("En-tête invalide: le document doit commencer par le nombre de qubits")
    n = int(sections[0][1][0])
    body = [lines for name, lines in sections[1:] if name == "[CHANNEL]"]
    if len(body) != 1:
        raise ValueError("Le document doit contenir exactement une section [CHANNEL]")
    entries = []
    for ln in body[0]:
        prob, _, op = ln.partition(" ")
        entries.append((float(prob), parse_operator(op, n)))
    channel = PauliChannel.explicit(n, entries)
    channel.validate()
    return channel


def save_channel(channel: PauliChannel, filepath: str):
    """Sauvegarder un canal explicite au format texte."""
    try:
        directory = os.path.dirname(filepath)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(filepath, "w") as f:
            f.write(channel_to_text(channel))
        logger.info(f"Canal sauvegardé dans {filepath}")
    except OSError as e:
        logger.error(f"Erreur lors de la sauvegarde du canal: {e}")
        raise


def load_channel(filepath: str) -> PauliChannel:
    """Charger un canal explicite depuis un fichier texte."""
    try:
        with open(filepath, "r") as f:
            text = f.read()
    except OSError as e:
        logger.error(f"Erreur lors du chargement du canal {filepath}: {e}")
        raise
    return channel_from_text(text)
