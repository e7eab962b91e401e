"""arborlim: exact homotopy limits of dg-category diagrams on surface graphs."""

__version__ = "0.1.0"
