# Codes de couleur de jauge 3D : flux, charges, décodage
