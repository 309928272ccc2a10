# Couplage parfait de poids minimum et T-joins
