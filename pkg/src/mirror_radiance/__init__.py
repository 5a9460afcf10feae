"""Radiation from asymptotically static accelerated charges and their moving-mirror analogs."""

__version__ = "0.1.0"
