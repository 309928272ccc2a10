#!/usr/bin/env python
"""
Interface en ligne de commande : construction de codes, validation de
colexes, décodage ponctuel, simulations Monte Carlo, ré-analyse et oracles.
"""

import sys
import os
import argparse
import logging
import json

import numpy as np
import pandas as pd

# Ajouter le répertoire parent au chemin d'importation
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

# Importer les modules du projet
from src.colex_lattice.builders import build_closed_3torus, build_frozen_slab, build_tetrahedral
from src.colex_lattice.codes import derive_code
from src.colex_lattice.colex_io import load_colex, save_colex
from src.colex_lattice.dual import dualize
from src.colex_lattice.validation import validate
from src.exact_oracle.oracles import OracleBudget
from src.exact_oracle.suite import run_oracle_suite, suite_report
from src.gauge_color_code.decoder import SyndromeDecoder
from src.gauge_color_code.gauge_fixing import GaugeFixer
from src.gauge_color_code.reduction import RepairReduction, SyndromeReduction
from src.gauge_color_code.repair import repair_gauge_syndrome
from src.pauli_core.code_io import save_code
from src.repetition_2d.decoder import close_pseudo_syndrome, decode
from src.repetition_2d.torus import TorusLattice
from src.sim_harness.clusters import stats_by_point
from src.sim_harness.config import ExperimentConfig, load_config
from src.sim_harness.runner import TRIAL_COLUMNS, run, write_outputs
from src.sim_harness.stats import MIN_SUSTAINABILITY_ROUNDS, fit_confinement, sustainability_report

# Configuration du logging
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)

# Définir les chemins des données
PROJECT_DIR = os.path.abspath(os.path.join(os.path.dirname(__file__), ".."))
DATA_DIR = os.path.join(PROJECT_DIR, "data")
OUTPUT_DIR = os.path.join(DATA_DIR, "results")
CODES_DIR = os.path.join(DATA_DIR, "codes")

COLEX_BUILDERS = {
    "tetrahedral": build_tetrahedral,
    "frozen-slab": build_frozen_slab,
    "torus3": build_closed_3torus,
}


def parse_arguments(argv=None):
    """
    Parser les arguments de ligne de commande.
    """
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="Graine de base (remplace celle de la configuration)")
    common.add_argument("--threads", type=int, default=None, help="Nombre de threads du pool d'essais")
    common.add_argument("--out-dir", type=str, default=None, help="Répertoire de sortie")

    parser = argparse.ArgumentParser(description="Simulation de correction d'erreurs quantiques single-shot")
    sub = parser.add_subparsers(dest="command", required=True)

    build = sub.add_parser("build-code", parents=[common], help="Construire un colex ou un code et l'écrire sur disque")
    build.add_argument("--kind", choices=sorted(COLEX_BUILDERS) + ["ising"], default="tetrahedral", help="Famille de réseau")
    build.add_argument("--size", type=int, default=3, help="Distance d, paramètre t ou taille L")
    build.add_argument("--with-code", action="store_true", help="Écrire aussi le code et la réduction du décodeur au format texte")

    check = sub.add_parser("validate-colex", parents=[common], help="Valider un colex JSON")
    check.add_argument("--input", type=str, required=True, help="Chemin du colex")

    dec = sub.add_parser("decode", parents=[common], help="Décoder un syndrome unique")
    source = dec.add_mutually_exclusive_group(required=True)
    source.add_argument("--colex", type=str, help="Colex JSON (code de couleur de jauge)")
    source.add_argument("--ising", type=int, metavar="L", help="Tore d'Ising de taille L")
    dec.add_argument("--syndrome", type=str, required=True, help="Bits 0/1 du syndrome, ou fichier les contenant")
    dec.add_argument("--gauge", action="store_true", help="Le syndrome est un syndrome de jauge bruité (colex seulement)")

    sim = sub.add_parser("simulate", parents=[common], help="Exécuter une grille d'essais Monte Carlo")
    origin = sim.add_mutually_exclusive_group(required=True)
    origin.add_argument("--config", type=str, help="Document de configuration JSON")
    origin.add_argument("--experiment", choices=sorted(ExperimentConfig.PREDEFINED_EXPERIMENTS), help="Expérience prédéfinie")
    sim.add_argument("--trials", type=int, default=None, help="Nombre d'essais par point")
    sim.add_argument("--no-plots", action="store_true", help="Ne pas produire les graphiques SVG")

    fit = sub.add_parser("fit", parents=[common], help="Ré-analyser les fichiers d'une simulation")
    fit.add_argument("--input-dir", type=str, required=True, help="Répertoire contenant trials.csv et clusters.csv")

    oracle = sub.add_parser("oracle-check", parents=[common], help="Comparer les décodeurs aux oracles exhaustifs")
    oracle.add_argument("--time-ceiling", type=float, default=60.0, help="Durée maximale par oracle (secondes)")

    return parser.parse_args(argv)


def read_bits(text):
    """
    Lire un vecteur de bits depuis une chaîne de 0/1 ou un fichier.
    """
    if os.path.isfile(text):
        with open(text, "r") as f:
            text = f.read()
    digits = "".join(ch for ch in text if not ch.isspace() and ch != ",")
    if not digits or set(digits) - {"0", "1"}:
        raise ValueError("Le syndrome doit être une suite de 0 et de 1")
    return np.array([int(ch) for ch in digits], dtype=np.uint8)


def format_bits(bits):
    return "".join(str(int(b)) for b in bits)


def command_build_code(args, out_dir):
    """
    Construire un réseau et l'écrire dans le répertoire des codes.
    """
    if args.kind == "ising":
        lattice = TorusLattice(args.size)
        path = os.path.join(out_dir, f"ising_L{args.size}.txt")
        save_code(lattice.to_subsystem_code(), path)
        return {"code": path}

    logger.info(f"Construction du colex {args.kind} (taille {args.size})")
    colex = COLEX_BUILDERS[args.kind](args.size)
    paths = {"colex": os.path.join(out_dir, f"{colex.name}.json")}
    save_colex(colex, paths["colex"])
    if args.with_code:
        paths["code"] = os.path.join(out_dir, f"{colex.name}.txt")
        save_code(derive_code(colex), paths["code"])
        dual = dualize(colex)
        for key, reduction_class in (("reduction", SyndromeReduction), ("repair_reduction", RepairReduction)):
            paths[key] = os.path.join(out_dir, f"{colex.name}.{key}.txt")
            with open(paths[key], "w") as f:
                f.write(reduction_class(dual).reduction.to_text())
    return paths


def command_validate(args):
    """
    Valider un colex ; le code de sortie vaut 1 s'il est invalide.
    """
    report = validate(load_colex(args.input))
    print(report.summary())
    for violation in report.violations:
        print(f"  [{violation.kind}] {violation.message}")
    for warning in report.warnings:
        print(f"  (avertissement) {warning}")
    return 0 if report.ok else 1


def command_decode(args):
    """
    Décoder un syndrome et afficher les qubits à corriger.
    """
    bits = read_bits(args.syndrome)
    if args.ising is not None:
        lattice = TorusLattice(args.ising)
        if bits.size != lattice.n_edges:
            raise ValueError(f"Le syndrome doit compter {lattice.n_edges} bits (reçu {bits.size})")
        repair = close_pseudo_syndrome(lattice, bits)
        flips = decode(lattice, bits ^ repair)
        result = {"repair": format_bits(repair), "correction": format_bits(flips)}
    else:
        dual = dualize(load_colex(args.colex))
        if args.gauge:
            if bits.size != dual.n_edges:
                raise ValueError(f"Le syndrome de jauge doit compter {dual.n_edges} bits (reçu {bits.size})")
            delta0 = repair_gauge_syndrome(bits, dual)
            correction, gauge = GaugeFixer(dual).fix_bits(bits ^ delta0)
            result = {"repair": format_bits(delta0), "correction": format_bits(correction), "gauge": format_bits(gauge)}
        else:
            correction = SyndromeDecoder(dual).decode_bits(bits)
            result = {"correction": format_bits(correction)}
    print(json.dumps(result, indent=4))
    return 0


def command_simulate(args):
    """
    Charger la configuration, appliquer les drapeaux puis lancer la simulation.
    """
    if args.config:
        logger.info(f"Chargement de la configuration depuis {args.config}")
        config = load_config(args.config)
    else:
        config = ExperimentConfig.predefined(args.experiment)
    overrides = {
        "seed": args.seed,
        "threads": args.threads,
        "out_dir": args.out_dir,
        "trials": args.trials,
    }
    for key, value in overrides.items():
        if value is not None:
            setattr(config, key, value)
    if args.no_plots:
        config.plots = False
    config.validate()
    out_dir = config.out_dir if os.path.isabs(config.out_dir) else os.path.join(PROJECT_DIR, config.out_dir)
    result = run(config)
    paths = write_outputs(result, out_dir)
    for point in result.summary["points"]:
        logger.info(
            f"taille={point['size']} λ={point['lambda']} η={point['eta']}: "
            f"échec={point['failure_rate']:.4f} [{point['failure_ci'][0]:.4f}, {point['failure_ci'][1]:.4f}], "
            f"écartés={point['discarded']}"
        )
    return paths


def command_fit(args, out_dir):
    """
    Recalculer les ajustements de confinement et les tests de dérive.
    """
    try:
        clusters = pd.read_csv(os.path.join(args.input_dir, "clusters.csv"))
        trials = pd.read_csv(os.path.join(args.input_dir, "trials.csv"))
    except Exception as e:
        logger.error(f"Erreur lors du chargement des résultats: {e}")
        raise
    missing = [c for c in TRIAL_COLUMNS if c not in trials.columns]
    if missing:
        raise ValueError(f"Colonnes manquantes dans trials.csv: {missing}")

    fits = []
    for key, stats in stats_by_point(clusters).items():
        family, size, lam, eta = key
        fit = fit_confinement(stats, eta)
        entry = {
            "family": family,
            "size": int(size),
            "lambda": float(lam),
            "eta": float(eta),
            "upsilon": fit.upsilon,
            "upsilon_ci": list(fit.ci) if fit.ci else None,
            "status": fit.status,
            "sustainability": None,
        }
        point = trials[(trials["size"] == size) & (trials["lambda"] == lam) & (trials["eta"] == eta)]
        kept = point.groupby("trial").filter(lambda g: g["nonsyndrome_flag"].sum() == 0)
        series = kept.groupby("round")["residual_weight"].mean()
        if len(series) >= MIN_SUSTAINABILITY_ROUNDS:
            report = sustainability_report(series.values)
            entry["sustainability"] = {"tau": report.tau, "p_value": report.p_value, "drift": report.drift}
        fits.append(entry)

    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, "fit.json")
    with open(path, "w") as f:
        json.dump({"points": fits}, f, indent=4)
    logger.info(f"Ajustements sauvegardés dans {path}")
    return path


def command_oracle_check(args, out_dir):
    """
    Exécuter la suite de validation croisée ; code de sortie 1 en cas d'écart.
    """
    budget = OracleBudget(time_ceiling=args.time_ceiling)
    report = suite_report(run_oracle_suite(args.seed or 0, budget))
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, "oracle_report.json")
    with open(path, "w") as f:
        json.dump(report, f, indent=4)
    logger.info(f"Rapport des oracles sauvegardé dans {path}")
    return 0 if report["ok"] else 1


def main(argv=None):
    """
    Fonction principale.
    """
    args = parse_arguments(argv)
    if args.command == "build-code":
        command_build_code(args, args.out_dir or CODES_DIR)
        return 0
    if args.command == "validate-colex":
        return command_validate(args)
    if args.command == "decode":
        return command_decode(args)
    if args.command == "simulate":
        command_simulate(args)
        return 0
    if args.command == "fit":
        command_fit(args, args.out_dir or args.input_dir)
        return 0
    if args.command == "oracle-check":
        return command_oracle_check(args, args.out_dir or OUTPUT_DIR)
    raise ValueError(f"Sous-commande inconnue: {args.command}")


if __name__ == "__main__":
    try:
        sys.exit(main())
    except Exception as e:
        logger.error(f"Erreur lors de l'exécution: {e}", exc_info=True)
        sys.exit(1)
