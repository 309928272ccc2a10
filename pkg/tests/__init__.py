# Tests unitaires et d'intégration