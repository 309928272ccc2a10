# Fichier d'initialisation du package src
