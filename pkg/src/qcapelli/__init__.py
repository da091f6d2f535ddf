"""Exact verification engine for matrix Capelli identities over
reflection equation algebras with Hecke-type braidings."""

__version__ = "0.1.0"
