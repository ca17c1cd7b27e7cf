"""Domination in permutation prisms."""
