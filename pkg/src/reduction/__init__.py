"""Teoria de reduccion de P sobre W_0."""
