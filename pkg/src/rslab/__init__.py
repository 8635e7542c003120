"""rslab: numerical laboratory for the time-fractional Rayleigh-Stokes problem."""

__version__ = "0.1.0"

__all__ = ["__version__"]
