"""Finite loop toolkit: tables, mappings, properties, identities and model search."""

__version__ = "0.1.0"
