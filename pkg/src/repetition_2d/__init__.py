# Code de répétition 2D sur tore (modèle d'Ising)
