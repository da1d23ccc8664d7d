"""Lyapunov quantities, center certificates and crossing limit cycles for
planar piecewise Kolmogorov (Filippov) systems."""

__version__ = "0.1.0"
