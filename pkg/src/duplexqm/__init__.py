"""Quantum mechanics over two-dimensional unital algebras and low-dimensional
Clifford algebras: complex vs duplex (hyperbolic) Schrodinger systems."""

__version__ = "0.1.0"
