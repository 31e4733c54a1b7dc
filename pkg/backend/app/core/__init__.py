"""
Core infrastructure: configuration, logging, exceptions, error handling and
deterministic random streams
"""
