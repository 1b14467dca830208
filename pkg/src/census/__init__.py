"""Censo global por productos de conteos locales."""
