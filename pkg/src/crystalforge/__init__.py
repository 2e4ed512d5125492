"""crystalforge: exact integer tensor crystals, shadow systems, and
lift-and-project relaxation hierarchies on digraphs."""

__version__ = "0.1.0"
