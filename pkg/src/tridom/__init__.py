"""Perfect and quasiperfect domination on the triangular lattice and its tori."""

__version__ = "0.1.0"
