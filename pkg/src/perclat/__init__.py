"""Generalized percolation lattices."""
