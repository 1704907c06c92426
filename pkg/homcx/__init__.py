"""homcx - Hom complexes, projectivities and chromatic lower bounds."""

__version__ = "0.1.0"
