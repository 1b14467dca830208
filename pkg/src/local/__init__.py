"""Densidades p-adicas y conteos locales de orbitas."""
