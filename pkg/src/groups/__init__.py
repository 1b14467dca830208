"""Grupo G, parabolico P, toro y generadores unipotentes."""
