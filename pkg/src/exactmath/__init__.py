"""Aritmetica exacta: anillos y polinomios monicos."""
