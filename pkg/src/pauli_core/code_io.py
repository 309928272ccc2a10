"""
Format texte ligne à ligne des codes de sous-système.

    15 1
    [STAB]
    X:0,1,2,3;Z:
    [GAUGE]
    ...
    [LOGICAL]
    ...

Les lignes vides et celles qui commencent par ``#`` sont ignorées.
"""

import logging
import os
from typing import List, Tuple

from src.pauli_core.pauli import PauliOperator
from src.pauli_core.subsystem_code import SubsystemCode, logical_count

logger = logging.getLogger(__name__)

SECTIONS = ("[STAB]", "[GAUGE]", "[LOGICAL]")


def format_operator(op: PauliOperator) -> str:
    """``X:<indices>;Z:<indices>``."""
    x = ",".join(str(i) for i in op.x_bits.nonzero()[0])
    z = ",".join(str(i) for i in op.z_bits.nonzero()[0])
    return f"X:{x};Z:{z}"


def parse_operator(text: str, n: int) -> PauliOperator:
    """Lire un opérateur au format ``X:<indices>;Z:<indices>``."""
    parts = {}
    for chunk in text.strip().split(";"):
        if ":" not in chunk:
            raise ValueError(f"Opérateur mal formé: '{text}'")
        letter, indices = chunk.split(":", 1)
        letter = letter.strip().upper()
        if letter not in ("X", "Z") or letter in parts:
            raise ValueError(f"Opérateur mal formé: '{text}'")
        parts[letter] = [int(i) for i in indices.split(",") if i.strip()]
    for idx in parts.get("X", []) + parts.get("Z", []):
        if not 0 <= idx < n:
            raise ValueError(f"Indice de qubit {idx} hors de [0, {n})")
    return PauliOperator.from_support(n, x=parts.get("X", []), z=parts.get("Z", []))


def _is_css(ops) -> bool:
    return all(not (op.x_bits.any() and op.z_bits.any()) for op in ops)


def code_to_text(code: SubsystemCode) -> str:
    """Sérialiser un code (en-tête ``n k`` puis les trois sections)."""
    lines = [f"{code.n} {logical_count(code)}"]
    for header, ops in zip(SECTIONS, (code.stab_gens, code.gauge_gens, code.logical_reps)):
        lines.append(header)
        lines.extend(format_operator(op) for op in ops)
    return "\n".join(lines) + "\n"


def code_from_text(text: str, name: str = "") -> SubsystemCode:
    """
    Reconstruire un code à partir de sa forme texte.

    Args:
        text: Contenu au format décrit en tête de module
        name: Nom attribué au code

    Returns:
        SubsystemCode
    """
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise ValueError("Document de code vide")
    header = lines[0].split()
    if len(header) != 2:
        raise ValueError(f"En-tête invalide: '{lines[0]}' (attendu 'n k')")
    n, k = int(header[0]), int(header[1])
    sections = {s: [] for s in SECTIONS}
    current = None
    for ln in lines[1:]:
        if ln.upper() in sections:
            current = ln.upper()
            continue
        if current is None:
            raise ValueError(f"Ligne hors section: '{ln}'")
        sections[current].append(parse_operator(ln, n))
    gauge = sections["[GAUGE]"]
    code = SubsystemCode(
        n,
        sections["[STAB]"],
        gauge,
        sections["[LOGICAL]"],
        css_flag=_is_css(gauge) and _is_css(sections["[STAB]"]),
        name=name,
    )
    if logical_count(code) != k:
        logger.warning(f"En-tête k={k} différent du nombre calculé {logical_count(code)}")
    return code


def save_code(code: SubsystemCode, filepath: str):
    """Sauvegarder un code au format texte."""
    try:
        directory = os.path.dirname(filepath)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(filepath, "w") as f:
            f.write(code_to_text(code))
        logger.info(f"Code sauvegardé dans {filepath}")
    except OSError as e:
        logger.error(f"Erreur lors de la sauvegarde du code: {e}")
        raise


def load_code(filepath: str) -> SubsystemCode:
    """Charger un code depuis un fichier texte."""
    try:
        with open(filepath, "r") as f:
            text = f.read()
    except OSError as e:
        logger.error(f"Erreur lors du chargement du code: {e}")
        raise
    code = code_from_text(text, name=filepath)
    logger.info(f"Code chargé depuis {filepath}: {code!r}")
    return code


def split_sections(text: str) -> List[Tuple[str, List[str]]]:
    """Découper un document en sections ``[NOM]`` (utilisé par les formats dérivés)."""
    result: List[Tuple[str, List[str]]] = []
    for ln in text.splitlines():
        ln = ln.strip()
        if not ln or ln.startswith("#"):
            continue
        if ln.startswith("[") and ln.endswith("]"):
            result.append((ln.upper(), []))
        elif result:
            result[-1][1].append(ln)
        else:
            result.append(("", [ln]))
    return result
