"""Computational toolkit for Baxter TQ relations, q-characters, transfer-matrix
eigenvalues and Bethe ansatz equations of untwisted quantum affine algebras."""

__version__ = "0.1.0"
