"""Short mixed sums, complete sums of chi(F_x(m)), and the Weil check."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational, Real
from typing import Sequence

import numpy as np

from . import _kernels
from .modular import DirichletCharacter, char_order

__all__ = [
    "BurgessPolynomial",
    "RealPolynomial",
    "SumValue",
    "WeilReport",
    "build_Fx",
    "complete_sum",
    "is_perfect_power",
    "mixed_sum",
    "plain_sum",
    "weil_report",
]

# Largest common denominator handled in exact mode; keeps L**2 inside int64.
MAX_EXACT_DENOMINATOR = 1 << 31
# Largest |n| reached by a sum.  Float mode needs n exactly representable.
MAX_N = 1 << 52


@dataclass(frozen=True)
class RealPolynomial:
    """f(X) = sum coeffs[k] X**k with a declared degree.

    Coefficients are ``Fraction`` (exact) or ``float``.  The degree is what
    the caller says, even if the top coefficient is an integer and so
    vanishes mod 1.
    """

    coeffs: tuple
    degree: int

    def __init__(self, coeffs: Sequence, degree: int | None = None):
        cs = []
        for c in coeffs:
            if isinstance(c, (int, np.integer, Rational)):
                cs.append(Fraction(c))
            elif isinstance(c, str):
                cs.append(Fraction(c))
            elif isinstance(c, Real):
                cs.append(float(c))
            else:
                raise TypeError(f"unsupported coefficient {c!r}")
        if degree is None:
            degree = max(len(cs) - 1, 0)
        if degree < 0:
            raise ValueError("degree must be >= 0")
        if len(cs) > degree + 1:
            raise ValueError(f"{len(cs)} coefficients exceed declared degree {degree}")
        cs += [Fraction(0)] * (degree + 1 - len(cs))
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "degree", degree)

    @classmethod
    def zero(cls, degree: int = 0) -> RealPolynomial:
        return cls([0], degree)

    @property
    def is_exact(self) -> bool:
        return all(isinstance(c, Fraction) for c in self.coeffs)

    def reduced(self) -> RealPolynomial:
        """Coefficients mapped into [0, 1); phases e(f(n)) are unchanged."""
        out = []
        for c in self.coeffs:
            if isinstance(c, Fraction):
                out.append(c - math.floor(c))
            else:
                out.append(c - math.floor(c))
        return RealPolynomial(out, self.degree)

    def common_denominator(self) -> int:
        if not self.is_exact:
            raise ValueError("polynomial has non-rational coefficients")
        return math.lcm(*(c.denominator for c in self.coeffs))

    def __call__(self, n):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * n + c
        return acc


@dataclass(frozen=True)
class SumValue:
    value: complex
    terms: int

    @property
    def magnitude(self) -> float:
        return abs(self.value)


@dataclass(frozen=True)
class BurgessPolynomial:
    """F_x(X) = prod (X + x_i)**delta(i), kept as residue -> multiplicity."""

    roots: tuple  # ((residue, multiplicity), ...) sorted by residue
    delta: int
    q: int

    @property
    def degree(self) -> int:
        return sum(m for _, m in self.roots)

    def __call__(self, m: int) -> int:
        v = 1
        for a, mult in self.roots:
            v = v * pow(m + a, mult, self.q) % self.q
        return v


def _check_range(N: int, H) -> int:
    if H < 0:
        raise ValueError("H must be nonnegative")
    N = int(N)
    count = math.floor(N + H) - N
    if abs(N) + count + 1 > MAX_N:
        raise OverflowError(f"summation range ({N}, {N}+{H}] exceeds |n| < 2**52")
    return count


def _dd_coef(c):
    """(hi, lo) with hi in [0, 1) and hi + lo == c mod 1 to ~106 bits."""
    if isinstance(c, Fraction):
        hi = float(c)
        lo = float(c - Fraction(hi))
    else:
        hi, lo = float(c), 0.0
    hi -= math.floor(hi)
    return hi, lo


def _phase_sum(chi, f, start, count, shift, mode):
    q = chi.q
    dlog = chi.modulus.dlog
    if mode == "auto":
        mode = "exact" if f.is_exact else "float"
    red = f.reduced()
    if mode == "exact":
        L = red.common_denominator()
        if L > MAX_EXACT_DENOMINATOR:
            raise ValueError(f"common denominator {L} too large for exact mode")
        coef = np.array([int(c * L) for c in red.coeffs], dtype=np.int64)
        return _kernels.exact_phase_sum(coef, L, dlog, chi.index, q, start, count, shift)
    if mode == "float":
        coefs = np.array([_dd_coef(c) for c in red.coeffs], dtype=np.float64)
        return _kernels.float_phase_sum(coefs, dlog, chi.index, q, start, count, shift)
    raise ValueError(f"unknown mode {mode!r}")


def mixed_sum(chi: DirichletCharacter, f: RealPolynomial, N: int, H, mode: str = "auto") -> SumValue:
    """sum_{N < n <= N+H} e(f(n)) chi(n).

    ``mode`` is ``"exact"`` (integer phases mod the common denominator),
    ``"float"`` (double-double Horner mod 1), or ``"auto"`` (exact when every
    coefficient is rational).
    """
    count = _check_range(N, H)
    if count == 0:
        return SumValue(0j, 0)
    re, im = _phase_sum(chi, f, int(N), count, 0, mode)
    return SumValue(complex(re, im), count)


def shifted_sum(chi: DirichletCharacter, f: RealPolynomial, shift: int, t) -> SumValue:
    """sum_{0 < n <= t} e(f(n)) chi(n + shift); phase and character decoupled."""
    count = _check_range(0, t)
    if count == 0:
        return SumValue(0j, 0)
    re, im = _phase_sum(chi, f, 0, count, int(shift) % chi.q, "auto")
    return SumValue(complex(re, im), count)


def plain_sum(chi: DirichletCharacter, N: int, H) -> SumValue:
    return mixed_sum(chi, RealPolynomial.zero(), N, H, mode="exact")


def build_Fx(x: Sequence[int], delta: int, q: int) -> BurgessPolynomial:
    """Odd positions (1-based) get exponent delta-1, even positions 1."""
    if delta < 2:
        raise ValueError("character order must be >= 2")
    entries = tuple(int(v) for v in getattr(x, "entries", x))
    if any(not 1 <= v <= q for v in entries):
        raise ValueError("tuple entries must lie in [1, q]")
    mult: Counter = Counter()
    for i, v in enumerate(entries, start=1):
        mult[v % q] += delta - 1 if i % 2 else 1
    return BurgessPolynomial(tuple(sorted(mult.items())), delta, q)


def is_perfect_power(F: BurgessPolynomial) -> bool:
    return all(m % F.delta == 0 for _, m in F.roots)


def _require_nonprincipal(chi):
    if chi.is_principal:
        raise ValueError("a non-principal character is required")


def complete_sum(chi: DirichletCharacter, x: Sequence[int]) -> SumValue:
    """sum_{m=1}^{q} chi(F_x(m)) via a histogram of integer exponents."""
    _require_nonprincipal(chi)
    F = build_Fx(x, char_order(chi), chi.q)
    roots = np.array([a for a, _ in F.roots], dtype=np.int64)
    mults = np.array([m for _, m in F.roots], dtype=np.int64)
    hist = _kernels.complete_sum_hist(chi.modulus.dlog, roots, mults, chi.q)
    qm1 = chi.q - 1
    # collapse onto the exponents actually reached by chi before going complex
    folded = np.bincount((np.arange(qm1, dtype=np.int64) * chi.index) % qm1, weights=hist, minlength=qm1)
    ks = np.nonzero(folded)[0]
    ang = 2 * math.pi * ks / qm1
    re = math.fsum(folded[ks] * np.cos(ang))
    im = math.fsum(folded[ks] * np.sin(ang))
    return SumValue(complex(re, im), chi.q)


@dataclass(frozen=True)
class WeilReport:
    applicable: bool
    magnitude: float
    bound: float
    degree: int


def weil_report(chi: DirichletCharacter, x: Sequence[int]) -> WeilReport:
    F = build_Fx(x, char_order(chi), chi.q)
    applicable = not is_perfect_power(F)
    mag = complete_sum(chi, x).magnitude
    bound = (F.degree - 1) * math.sqrt(chi.q) if applicable else float(chi.q)
    if mag > bound + 1e-6:
        raise AssertionError(f"Weil bound violated: |sum|={mag} > {bound} for x={tuple(x)}")
    return WeilReport(applicable, mag, bound, F.degree)
