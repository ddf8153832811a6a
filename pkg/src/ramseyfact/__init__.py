"""ramseyfact: rigid surjections, exact echelon factorizations over prime
fields, desk-scale Ramsey-style coloring verification, and exact rational
polyhedral normed-space geometry."""

__version__ = "0.1.0"
