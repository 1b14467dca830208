"""Constantes arquimedianas y asintoticas predichas."""
