"""Numerical laboratory for Burgess-type bounds on short mixed character sums."""

from ._accel import BACKEND
from .modular import DirichletCharacter, PrimeModulus, char_eval, char_order, find_primitive_root, prime_modulus
from .sums import RealPolynomial, SumValue, complete_sum, mixed_sum, plain_sum
from .vinogradov import TupleAssignment, count_J_bruteforce, count_J_mitm

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "DirichletCharacter",
    "PrimeModulus",
    "RealPolynomial",
    "SumValue",
    "TupleAssignment",
    "char_eval",
    "char_order",
    "complete_sum",
    "count_J_bruteforce",
    "count_J_mitm",
    "find_primitive_root",
    "mixed_sum",
    "plain_sum",
    "prime_modulus",
]
