# Canaux de Pauli et classes de bruit
