"""Exact verification toolkit for free-field representations of differential-operator
superalgebras with zeta-regularized normal ordering."""

__version__ = "0.1.0"
