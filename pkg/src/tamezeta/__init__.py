"""Eigenspace-wise rigid cohomology, Frobenius matrices and zeta functions of
tame cyclic covers of the punctured projective line, with brute-force oracles."""

__version__ = "0.1.0"
