"""Weight-filtration computations for surface groups."""

__version__ = "0.1.0"
