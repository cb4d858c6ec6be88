"""Levitated dielectric spheres in optical cavities: trapping, noise, cooling and quantum-state transfer."""

__version__ = "0.1.0"
