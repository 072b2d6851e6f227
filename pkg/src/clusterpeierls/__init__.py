"""Measurement-based quantum computation on cluster states next to the
classical Ising model, with the bookkeeping that maps one onto the other."""

__version__ = "0.1.0"
