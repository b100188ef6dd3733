"""Shock formation laboratory: exact characteristics, a radial finite-volume
solver with time-decaying damping, dual-method foliation density, and
closed-form lifespan prediction."""

__version__ = "0.1.0"
