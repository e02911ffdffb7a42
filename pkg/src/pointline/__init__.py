"""Computational laboratory for point-to-line last passage percolation
and the log-gamma polymer: exact finite-size laws, their Whittaker and
Fredholm representations, and Monte Carlo cross-checks."""

__version__ = "0.1.0"
