"""Polar-map discretization of polynomial vector fields."""

__version__ = "0.1.0"
