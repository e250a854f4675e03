"""catsolve: exact solver for systems of discrete differential equations
with one catalytic variable."""

__version__ = "0.1.0"
