"""Numerical core for blimp altitude control - simulation and training only, NO CLI."""

__all__ = []
