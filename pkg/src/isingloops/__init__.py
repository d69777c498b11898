"""Exact combinatorial series engine for Ising lattices.

The package solves the zero-field Ising model on the plane-triangular (PT)
lattice by non-backtracking loop counting, extends the same propagator with
direction tags to drive a simple-cubic (SC) series pipeline, implements a
direct spin-polynomial high-temperature expansion, and validates everything
against brute-force oracles (exhaustive spin sums and even-subgraph
enumeration).

Submodules
----------
ring          exact cyclotomic numbers, tagged Laurent polynomials, x-series
walker        directions, propagator matrices, loop enumeration, Whitney checks
pt_solver     PT determinant, free energy, critical point, specific heat
sc_series     tagged SC determinant, sqrt/log series, filtering actions
ht_expansion  spin-polynomial high-temperature expansion on SQ/SC windows
oracle        exhaustive partition sums and even-subgraph counting
report        machine-readable series reports
cli           command-line interface
"""

__version__ = "0.1.0"
