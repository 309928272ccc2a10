# Utilitaires transverses : exceptions et graines
