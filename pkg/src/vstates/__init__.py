"""Rotating vortex-patch equilibria of the generalized SQG equation.

Spectral dispersion relations, bifurcation points, and pseudo-spectral
Newton solvers for simply- and doubly-connected patch boundaries, with
branch sweeping and fold continuation on top.
"""

__version__ = "0.1.0"
