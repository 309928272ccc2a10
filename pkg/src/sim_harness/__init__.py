# Harnais Monte Carlo et statistiques de confinement
