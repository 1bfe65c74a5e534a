"""Arithmetic modulo a prime: primitive roots, discrete logs, characters.

A character mod q is stored as its index ``j`` against the smallest
primitive root ``g``: chi(g**k) = e(j*k/(q-1)).  Character algebra stays in
integer exponents; complex values appear only through :func:`char_eval`
and :meth:`DirichletCharacter.root_of_unity`.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

__all__ = [
    "DLOG_LIMIT",
    "DirichletCharacter",
    "PrimeModulus",
    "char_eval",
    "char_order",
    "factorize",
    "find_primitive_root",
    "is_prime",
    "prime_modulus",
]

# O(q) memory for the log table; desk scale only.
DLOG_LIMIT = 50_000_000

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for all n < 3.3e24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def factorize(n: int) -> dict[int, int]:
    """Trial-division factorization; fine for n up to ~1e12."""
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def find_primitive_root(q: int) -> int:
    """Smallest generator of (Z/qZ)^*, with the convention g = 1 for q = 2."""
    if not is_prime(q):
        raise ValueError(f"{q} is not prime")
    if q == 2:
        return 1
    cofactors = [(q - 1) // p for p in factorize(q - 1)]
    for g in range(2, q):
        if all(pow(g, c, q) != 1 for c in cofactors):
            return g
    raise AssertionError("unreachable: every prime has a primitive root")


@dataclass(frozen=True, eq=False)
class PrimeModulus:
    """A prime q with its smallest primitive root and full log table.

    ``dlog[u]`` is the k in [0, q-2] with g**k = u (mod q); ``dlog[0]`` is -1.
    ``powers[k]`` is g**k mod q.
    """

    q: int
    g: int = field(init=False)
    dlog: np.ndarray = field(init=False, repr=False)
    powers: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        q = self.q
        if not isinstance(q, (int, np.integer)) or q < 3:
            raise ValueError(f"modulus must be a prime >= 3, got {q!r}")
        if q > DLOG_LIMIT:
            raise ValueError(f"q={q} exceeds the log-table limit {DLOG_LIMIT}")
        g = find_primitive_root(int(q))
        powers = np.empty(q - 1, dtype=np.int64)
        v = 1
        for k in range(q - 1):
            powers[k] = v
            v = v * g % q
        dlog = np.full(q, -1, dtype=np.int64)
        dlog[powers] = np.arange(q - 1, dtype=np.int64)
        powers.flags.writeable = False
        dlog.flags.writeable = False
        object.__setattr__(self, "q", int(q))
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "powers", powers)
        object.__setattr__(self, "dlog", dlog)

    def log(self, n: int) -> int:
        u = n % self.q
        if u == 0:
            raise ValueError(f"{n} is not a unit mod {self.q}")
        return int(self.dlog[u])

    def character(self, j: int) -> DirichletCharacter:
        return DirichletCharacter(self, j)

    def characters(self, include_principal: bool = False):
        start = 0 if include_principal else 1
        return [DirichletCharacter(self, j) for j in range(start, self.q - 1)]

    def __hash__(self):
        return hash(self.q)

    def __eq__(self, other):
        return isinstance(other, PrimeModulus) and other.q == self.q


@lru_cache(maxsize=64)
def prime_modulus(q: int) -> PrimeModulus:
    """Cached :class:`PrimeModulus` constructor."""
    return PrimeModulus(q)


@dataclass(frozen=True)
class DirichletCharacter:
    modulus: PrimeModulus
    index: int

    def __post_init__(self):
        if not 0 <= self.index < self.modulus.q - 1:
            raise ValueError(f"character index must lie in [0, {self.modulus.q - 2}]")

    @property
    def q(self) -> int:
        return self.modulus.q

    @property
    def order(self) -> int:
        return char_order(self)

    @property
    def is_principal(self) -> bool:
        return self.index == 0

    def exponent(self, n: int) -> int | None:
        """k with chi(n) = e(k/(q-1)), or None when q | n."""
        u = n % self.q
        if u == 0:
            return None
        return self.index * int(self.modulus.dlog[u]) % (self.q - 1)

    def root_of_unity(self, k: int) -> complex:
        return cmath.exp(2j * math.pi * (k % (self.q - 1)) / (self.q - 1))

    def __call__(self, n: int) -> complex:
        return char_eval(self, n)


def char_eval(chi: DirichletCharacter, n: int) -> complex:
    k = chi.exponent(n)
    if k is None:
        return 0j
    return chi.root_of_unity(k)


def char_order(chi: DirichletCharacter) -> int:
    qm1 = chi.q - 1
    return qm1 // math.gcd(chi.index, qm1)
