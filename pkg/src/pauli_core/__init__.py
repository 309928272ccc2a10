# Algèbre de Pauli et codes de sous-système
