"""Representacion: W, W_0, inv, lambda, Z y la seccion."""
