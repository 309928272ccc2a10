# Oracles exacts pour la validation croisée
