"""
Document de configuration d'une expérience Monte Carlo.
"""

import copy
import json
import logging
import os
from dataclasses import asdict, dataclass, field, fields
from typing import Any, Dict, List

from src.utils.exceptions import ConfigError

logger = logging.getLogger(__name__)

FAMILIES = ("ising", "gauge")


@dataclass
class ExperimentConfig:
    """
    Grille d'essais d'une expérience.

    Attributes:
        name: Nom de l'expérience
        family: Famille de codes ("ising" ou "gauge")
        sizes: Tailles (L du tore pour "ising", distance impaire d pour "gauge")
        lambdas: Taux d'inversion par qubit
        etas: Taux d'erreur de mesure
        rounds: Nombre de tours T par essai
        trials: Nombre d'essais par point de grille
        seed: Graine de base
        threads: Nombre de threads du pool
        out_dir: Répertoire de sortie
        plots: Produire les graphiques SVG
        description: Texte libre
    """

    name: str = "experience"
    family: str = "ising"
    sizes: List[int] = field(default_factory=lambda: [8])
    lambdas: List[float] = field(default_factory=lambda: [0.01])
    etas: List[float] = field(default_factory=lambda: [0.01])
    rounds: int = 20
    trials: int = 100
    seed: int = 0
    threads: int = 1
    out_dir: str = "data/results"
    plots: bool = True
    description: str = ""

    # Expériences prédéfinies
    PREDEFINED_EXPERIMENTS = {
        "ising_crossing": {
            "description": "Taux d'échec logique du code d'Ising pour plusieurs tailles sous le seuil",
            "family": "ising",
            "sizes": [8, 16, 24],
            "lambdas": [0.005],
            "etas": [0.005],
            "rounds": 50,
            "trials": 200,
        },
        "ising_confinement": {
            "description": "Confinement du syndrome résiduel : bruit de mesure faible contre maximal",
            "family": "ising",
            "sizes": [24],
            "lambdas": [0.005],
            "etas": [0.005, 0.5],
            "rounds": 20,
            "trials": 50,
        },
        "gauge_smoke": {
            "description": "Code de couleur de jauge à 15 qubits, bruit faible",
            "family": "gauge",
            "sizes": [3],
            "lambdas": [0.01],
            "etas": [0.01],
            "rounds": 20,
            "trials": 20,
        },
    }

    def __post_init__(self):
        self.validate()

    def validate(self):
        """
        Vérifier chaque champ.

        Raises:
            ConfigError: premier champ invalide, avec son chemin
        """
        if self.family not in FAMILIES:
            raise ConfigError("family", f"famille inconnue '{self.family}' (attendu: {', '.join(FAMILIES)})")
        for key in ("sizes", "lambdas", "etas"):
            if not isinstance(getattr(self, key), list) or not getattr(self, key):
                raise ConfigError(key, "doit être une liste non vide")
        for i, size in enumerate(self.sizes):
            if not isinstance(size, int) or isinstance(size, bool):
                raise ConfigError(f"sizes[{i}]", f"doit être un entier (reçu {size!r})")
            if self.family == "ising" and size < 2:
                raise ConfigError(f"sizes[{i}]", "le tore doit avoir L >= 2")
            if self.family == "gauge" and (size < 3 or size % 2 == 0):
                raise ConfigError(f"sizes[{i}]", "la distance doit être impaire et >= 3")
        for key in ("lambdas", "etas"):
            for i, rate in enumerate(getattr(self, key)):
                if not isinstance(rate, (int, float)) or isinstance(rate, bool) or not 0.0 <= rate <= 1.0:
                    raise ConfigError(f"{key}[{i}]", f"doit appartenir à [0, 1] (reçu {rate!r})")
        if self.rounds < 1:
            raise ConfigError("rounds", "doit être >= 1")
        if self.trials < 0:
            raise ConfigError("trials", "doit être >= 0")
        if self.seed < 0:
            raise ConfigError("seed", "doit être >= 0")
        if self.threads < 1:
            raise ConfigError("threads", "doit être >= 1")

    def grid(self) -> List[Dict[str, Any]]:
        """Points de grille (taille, λ, η) dans un ordre fixe ; l'indice sert de flux de graines."""
        points = []
        for size in self.sizes:
            for lam in self.lambdas:
                for eta in self.etas:
                    points.append({"size": size, "lambda": float(lam), "eta": float(eta)})
        return points

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ExperimentConfig":
        """
        Construire une configuration à partir d'un document JSON.

        Raises:
            ConfigError: champ inconnu ou valeur invalide
        """
        if not isinstance(data, dict):
            raise ConfigError("<racine>", "le document doit être un objet JSON")
        known = {f.name for f in fields(cls)}
        for key in data:
            if key not in known:
                raise ConfigError(key, "champ inconnu")
        return cls(**data)

    @classmethod
    def predefined(cls, name: str, **overrides) -> "ExperimentConfig":
        """
        Récupérer une expérience prédéfinie, éventuellement modifiée.

        Args:
            name: Nom de l'expérience prédéfinie
            **overrides: Champs à remplacer

        Returns:
            ExperimentConfig
        """
        if name not in cls.PREDEFINED_EXPERIMENTS:
            raise ValueError(f"Expérience prédéfinie inconnue: {name}")
        data = copy.deepcopy(cls.PREDEFINED_EXPERIMENTS[name])
        data["name"] = name
        data.update(overrides)
        return cls.from_dict(data)


def load_config(file_path: str) -> ExperimentConfig:
    """
    Charger une configuration depuis un fichier JSON.

    Args:
        file_path: Chemin du document

    Returns:
        ExperimentConfig validée
    """
    try:
        with open(file_path, "r") as f:
            data = json.load(f)
    except Exception as e:
        logger.error(f"Erreur lors du chargement de la configuration {file_path}: {e}")
        raise
    return ExperimentConfig.from_dict(data)


def save_config(config: ExperimentConfig, file_path: str) -> str:
    """
    Sauvegarder une configuration au format JSON.

    Returns:
        Chemin du fichier écrit
    """
    directory = os.path.dirname(file_path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    try:
        with open(file_path, "w") as f:
            json.dump(config.to_dict(), f, indent=4)
    except Exception as e:
        logger.error(f"Erreur lors de la sauvegarde de la configuration: {e}")
        raise
    logger.info(f"Configuration sauvegardée dans {file_path}")
    return file_path
