"""Desk-scale Burgess machinery.

Covers the split n = a*q + p*m over auxiliary primes, the counting function
A(m) and its moments, the grid of coefficient boxes with their lower-left
vertices, the vertex sums T(alpha; m, t), the additive identity
Sigma_A(x) = Q^D * Xi_Q(x), and the fourth-moment sum S_4.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .bounds import D_of
from .modular import DirichletCharacter, char_order
from .sums import RealPolynomial, complete_sum, mixed_sum, shifted_sum
from .vinogradov import EnumerationGuardError, count_J_mitm, signs

__all__ = [
    "CountProfile",
    "Decomposition",
    "GridVertex",
    "S4Report",
    "S4_empirical",
    "S4_expanded",
    "T_alpha",
    "choose_P",
    "count_profile",
    "decompose",
    "empirical_max_sum",
    "grid_vertices",
    "moment_ratio",
    "nearest_vertex",
    "prime_window",
    "q_for_chang",
    "q_for_vinogradov",
    "xi_identity_check",
    "xi_left_side",
]

GRID_LIMIT = 10**6
S4_WORK_LIMIT = 5 * 10**7


@dataclass(frozen=True)
class Decomposition:
    n: int
    p: int
    q: int
    a: int
    m: int

    def reconstruct(self) -> int:
        return self.a * self.q + self.p * self.m


def decompose(n: int, p: int, q: int) -> Decomposition:
    """The unique (a, m) with n = a*q + p*m and 0 <= a < p."""
    if q % p == 0:
        raise ValueError(f"p={p} divides q={q}")
    a = n * pow(q, -1, p) % p
    m, rem = divmod(n - a * q, p)
    assert rem == 0
    return Decomposition(n, p, q, a, m)


def prime_window(P) -> list[int]:
    """Primes p with P < p <= 2P, ascending."""
    if P < 1:
        raise ValueError("P must be >= 1")
    lo = math.floor(P) + 1
    hi = math.floor(2 * P)
    if hi < 2:
        return []
    sieve = np.ones(hi + 1, dtype=bool)
    sieve[:2] = False
    for k in range(2, math.isqrt(hi) + 1):
        if sieve[k]:
            sieve[k * k :: k] = False
    return [int(p) for p in np.nonzero(sieve)[0] if p >= lo]


def choose_P(H, q, r: int, d: int, delta: float = 0.0) -> int:
    """Smallest integer P in [H q^(-1/(2(r-D+delta)))/2, H q^(-1/(2(r-D+delta))))."""
    k = r - D_of(d) + delta
    if k <= 0:
        raise ValueError("need r > D")
    upper = H * q ** (-1 / (2 * k))
    P = max(1, math.ceil(upper / 2))
    return P


def q_for_vinogradov(H, P, r: int) -> int:
    return math.ceil(Fraction(4 * r) * Fraction(H) / Fraction(P))


def q_for_chang(H, P) -> int:
    return math.ceil(Fraction(2) * Fraction(H) / Fraction(P))


@dataclass(frozen=True)
class CountProfile:
    m_min: int
    counts: np.ndarray  # counts[k] = A(m_min + k)
    S1: int
    S2: int
    N: int
    H: Fraction
    P: Fraction
    q: int
    n_pairs: int

    @property
    def hp_below_q(self) -> bool:
        return self.H * self.P < self.q

    @property
    def support(self) -> tuple[int, int]:
        nz = np.nonzero(self.counts)[0]
        if len(nz) == 0:
            return (0, 0)
        return (self.m_min + int(nz[0]), self.m_min + int(nz[-1]))

    def A(self, m: int) -> int:
        k = m - self.m_min
        return int(self.counts[k]) if 0 <= k < len(self.counts) else 0


def _ap_ranges(N, H, P, q, primes):
    """(lo, hi) with A-interval ((N-aq)/p - H/P, (N-aq)/p] ∩ Z = [lo, hi]."""
    h = Fraction(H) / Fraction(P)
    hn, hd = h.numerator, h.denominator
    for p in primes:
        for a in range(p):
            num = N - a * q
            hi = num // p
            # m > num/p - hn/hd  <=>  m*p*hd > num*hd - hn*p
            lo = (num * hd - hn * p) // (p * hd) + 1
            yield a, p, lo, hi


def count_profile(N: int, H, P, q: int) -> CountProfile:
    """A(m) = #{(a, p): (N-aq)/p - H/P < m <= (N-aq)/p}, exactly.

    ``N`` is reduced mod q first.  ``H`` and ``P`` may be ints or Fractions;
    interval membership is decided by integer cross-multiplication.
    """
    N = N % q
    H = Fraction(H)
    P = Fraction(P)
    primes = prime_window(P)
    if any(q % p == 0 for p in primes):
        raise ValueError("an auxiliary prime divides q")
    ranges = list(_ap_ranges(N, H, P, q, primes))
    lo_all = min(lo for _, _, lo, _ in ranges)
    hi_all = max(hi for _, _, _, hi in ranges)
    size = hi_all - lo_all + 2
    diff = np.zeros(size, dtype=np.int64)
    for _, _, lo, hi in ranges:
        if lo <= hi:
            diff[lo - lo_all] += 1
            diff[hi - lo_all + 1] -= 1
    counts = np.cumsum(diff)[:-1]
    S1 = int(counts.sum())
    S2 = int(np.dot(counts.astype(object), counts.astype(object)))
    return CountProfile(lo_all, counts, S1, S2, N, H, P, q, len(ranges))


def moment_ratio(N: int, H, P, q: int) -> float:
    """S_2 / (H P)."""
    prof = count_profile(N, H, P, q)
    return prof.S2 / float(prof.H * prof.P)


# -- grid of boxes -------------------------------------------------------------

@dataclass(frozen=True)
class GridVertex:
    """theta = (0, c_1/Q, c_2/Q^2, ..., c_d/Q^d)."""

    Q: int
    numerators: tuple  # (c_0, c_1, ..., c_d), c_0 == 0

    @property
    def d(self) -> int:
        return len(self.numerators) - 1

    @property
    def theta(self) -> tuple:
        return tuple(Fraction(c, self.Q**j) for j, c in enumerate(self.numerators))

    def polynomial(self) -> RealPolynomial:
        return RealPolynomial(self.theta, self.d)


def _grid_guard(Q, d):
    if Q < 2:
        raise ValueError("Q must be >= 2")
    total = Q ** D_of(d)
    if total > GRID_LIMIT:
        raise EnumerationGuardError(f"Q^D = {total} vertices exceeds {GRID_LIMIT}")
    return total


def grid_vertices(Q: int, d: int) -> Iterable[GridVertex]:
    """All Q^D vertices, lexicographic in (c_1, ..., c_d)."""
    _grid_guard(Q, d)
    ranges = [range(Q**j) for j in range(1, d + 1)]
    for cs in itertools.product(*ranges):
        yield GridVertex(Q, (0,) + cs)


def nearest_vertex(f: RealPolynomial, Q: int) -> GridVertex:
    """Lower-left vertex of the box containing the reduced coefficients of f."""
    if Q < 2:
        raise ValueError("Q must be >= 2")
    red = f.reduced()
    cs = [0]
    for j in range(1, red.degree + 1):
        c = red.coeffs[j]
        scale = Q**j
        cs.append(math.floor(c * scale) if isinstance(c, Fraction) else min(math.floor(c * scale), scale - 1))
    return GridVertex(Q, tuple(cs))


def T_alpha(chi: DirichletCharacter, alpha: GridVertex, m: int, t) -> float:
    """|sum_{0 < n <= t} e(theta_alpha(n)) chi(n + m)|."""
    if t < 0:
        raise ValueError("t must be >= 0")
    return shifted_sum(chi, alpha.polynomial(), m, t).magnitude


def xi_left_side(x: Sequence[int], Q: int, d: int) -> float:
    """sum over all vertices of e(sum_i eps(i) theta_alpha(x_i)), summed directly."""
    total = _grid_guard(Q, d)
    xs = np.asarray(list(x), dtype=object)
    eps = signs(len(xs) // 2)
    S = [int(sum(int(e) * int(v) ** s for e, v in zip(eps, xs))) for s in range(d + 1)]
    L = Q**d
    re = []
    im = []
    for v in grid_vertices(Q, d):
        k = sum(c * S[j] * Q ** (d - j) for j, c in enumerate(v.numerators)) % L
        ang = 2 * math.pi * k / L
        re.append(math.cos(ang))
        im.append(math.sin(ang))
    value = complex(math.fsum(re), math.fsum(im))
    if abs(value.imag) > 1e-6 * total:
        raise AssertionError(f"vertex sum not real: {value}")
    return value.real


def xi_indicator(x: Sequence[int], Q: int, d: int) -> bool:
    eps = signs(len(x) // 2)
    return all(
        sum(int(e) * int(v) ** s for e, v in zip(eps, x)) % Q**s == 0 for s in range(1, d + 1)
    )


def xi_identity_check(x: Sequence[int], Q: int, d: int, tol: float = 1e-6) -> bool:
    lhs = xi_left_side(x, Q, d)
    rhs = Q ** D_of(d) * xi_indicator(x, Q, d)
    return abs(lhs - rhs) <= tol * Q ** D_of(d)


# -- fourth-moment sum S_4 ----------------------------------------------------

@dataclass(frozen=True)
class S4Report:
    S4: float
    chang_shape: float
    vin_shape: float
    J: int
    Q: int
    q: int
    r: int
    d: int
    tau: int

    @property
    def ratio_chang(self) -> float:
        return self.S4 / self.chang_shape

    @property
    def ratio_vin(self) -> float:
        return self.S4 / self.vin_shape


def S4_empirical(chi: DirichletCharacter, r: int, d: int, Q: int, tau: int) -> S4Report:
    """S_4(tau) = sum_alpha sum_{m=1}^q T(alpha; m, tau)^(2r), by direct summation."""
    q = chi.q
    n_vert = _grid_guard(Q, d)
    if tau > q:
        raise ValueError("need tau <= q")
    if n_vert * q * tau > S4_WORK_LIMIT:
        raise EnumerationGuardError("S_4 work estimate exceeds budget")
    terms = []
    for alpha in grid_vertices(Q, d):
        for m in range(1, q + 1):
            terms.append(T_alpha(chi, alpha, m, tau) ** (2 * r))
    S4 = math.fsum(terms)
    QD = Q ** D_of(d)
    J = count_J_mitm(r, d, tau)
    chang = QD * (tau**r * q + tau ** (2 * r) * math.sqrt(q))
    vin = QD * (tau**r * q + J * math.sqrt(q))
    return S4Report(S4, chang, vin, J, Q, q, r, d, tau)


def S4_expanded(chi: DirichletCharacter, r: int, d: int, Q: int, tau: int) -> complex:
    """S_4 via sum_x Sigma_A(x) Sigma_B(x) with Sigma_A = Q^D Xi_Q(x).

    Independent of :func:`S4_empirical`: no short sums are formed, only
    congruence tests and complete sums of chi(F_x).
    """
    if char_order(chi) < 2:
        raise ValueError("non-principal character required")
    QD = Q ** D_of(d)
    re = []
    im = []
    for x in itertools.product(range(1, tau + 1), repeat=2 * r):
        if xi_indicator(x, Q, d):
            v = complete_sum(chi, x).value
            re.append(QD * v.real)
            im.append(QD * v.imag)
    return complex(math.fsum(re), math.fsum(im))


def empirical_max_sum(chi: DirichletCharacter, f: RealPolynomial, H, sample_N: Iterable[int]) -> float:
    """max over the sampled N of |S(f; N, H)|; a lower bound for T(N, H)."""
    best = 0.0
    for N in sample_N:
        best = max(best, mixed_sum(chi, f, N, H).magnitude)
    return best
