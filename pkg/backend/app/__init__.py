"""
Blimp altitude control toolkit: CLI, configuration and artifact services
"""

__version__ = "1.0.0"
