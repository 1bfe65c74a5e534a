"""Exact counts for Vinogradov's system and good/bad tuple bookkeeping.

J_{r,d}(X) counts x in [1, X]**(2r) with

    x_1**s + ... + x_r**s == x_{r+1}**s + ... + x_{2r}**s,   1 <= s <= d.

Two independent counters are provided: a brute-force scan over all 2r-tuples
and a meet-in-the-middle count that groups r-tuples by their power-sum
vector and sums squared multiplicities.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _kernels

__all__ = [
    "BRUTE_FORCE_LIMIT",
    "MITM_LIMIT",
    "EnumerationGuardError",
    "TupleAssignment",
    "conjecture_ratio_table",
    "count_J_bruteforce",
    "count_J_mitm",
    "count_bad",
    "count_in_V",
    "enumerate_tuples",
    "in_V",
    "is_bad",
    "power_sums",
    "signs",
]

BRUTE_FORCE_LIMIT = 10**9
MITM_LIMIT = 10**8
BAD_ENUM_LIMIT = 10**7
_INT64_SAFE = 1 << 62


class EnumerationGuardError(ValueError):
    """Requested enumeration exceeds the desk-scale budget."""


@dataclass(frozen=True)
class TupleAssignment:
    entries: tuple
    tau: int

    def __init__(self, entries: Sequence[int], tau: int | None = None):
        entries = tuple(int(v) for v in entries)
        if not entries or len(entries) % 2:
            raise ValueError("a tuple assignment has an even, positive length 2r")
        if tau is None:
            tau = max(entries)
        if any(not 1 <= v <= tau for v in entries):
            raise ValueError(f"entries must lie in [1, {tau}]")
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "tau", int(tau))

    @property
    def r(self) -> int:
        return len(self.entries) // 2

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)


def _entries(x) -> tuple:
    return x.entries if isinstance(x, TupleAssignment) else tuple(x)


def signs(r: int) -> np.ndarray:
    """epsilon(i) = (-1)**i for 1-based positions i = 1..2r."""
    return np.array([(-1) ** i for i in range(1, 2 * r + 1)], dtype=np.int64)


def power_sums(values: Sequence[int], d: int) -> tuple:
    return tuple(sum(v**s for v in values) for s in range(1, d + 1))


def _check_args(r, d, X):
    if r < 1 or d < 0 or X < 0:
        raise ValueError("need r >= 1, d >= 0, X >= 0")


def count_J_bruteforce(r: int, d: int, X: int) -> int:
    _check_args(r, d, X)
    if X == 0:
        return 0
    if X ** (2 * r) > BRUTE_FORCE_LIMIT:
        raise EnumerationGuardError(f"X**(2r) = {X}**{2 * r} exceeds {BRUTE_FORCE_LIMIT}")
    if r * X**d >= _INT64_SAFE:
        raise EnumerationGuardError("power sums overflow int64")
    return int(_kernels.count_j_brute(X, r, d))


def _key_radices(r: int, d: int, X: int):
    """Mixed-radix weights packing a power-sum vector into one int64.

    Component s of an r-tuple's vector is at most r*X**s, so radix r*X**s + 1
    leaves no carries and the packing is additive.  None if it overflows.
    """
    radices = []
    w = 1
    for s in range(1, d + 1):
        radices.append(w)
        w *= r * X**s + 1
    return radices if w < _INT64_SAFE else None


def _mitm_convolve(r: int, d: int, X: int, radices) -> int:
    x = np.arange(1, X + 1, dtype=np.int64)
    step = np.zeros(X, dtype=np.int64)
    for s, w in enumerate(radices, start=1):
        step += (x**s) * w
    keys = np.zeros(1, dtype=np.int64)
    counts = np.ones(1, dtype=np.int64)
    for _ in range(r):
        keys, inv = np.unique((keys[:, None] + step[None, :]).ravel(), return_inverse=True)
        counts = np.bincount(inv.ravel(), weights=np.repeat(counts, X), minlength=len(keys))
        counts = np.rint(counts).astype(np.int64)
    return int(np.dot(counts, counts))


def count_J_mitm(r: int, d: int, X: int, method: str = "auto") -> int:
    """Sum of squared multiplicities of the power-sum vectors of r-tuples.

    ``method="table"`` tabulates every r-tuple's vector and groups equal rows;
    ``"convolve"`` builds the same multiset one coordinate at a time on packed
    integer keys, which only ever holds the distinct vectors.  ``"auto"``
    prefers the latter.  Vectors are always compared exactly; beyond int64
    the count falls back to Python integers.
    """
    _check_args(r, d, X)
    if X == 0:
        return 0
    if X**r > MITM_LIMIT:
        raise EnumerationGuardError(f"X**r = {X}**{r} exceeds {MITM_LIMIT}")
    if d == 0:
        return X ** (2 * r)
    radices = _key_radices(r, d, X)
    if method not in ("auto", "table", "convolve"):
        raise ValueError(f"unknown method {method!r}")
    if method != "table" and radices is not None:
        return _mitm_convolve(r, d, X, radices)
    if method == "convolve":
        raise EnumerationGuardError("packed keys overflow int64")
    if r * X**d < _INT64_SAFE:
        table = _kernels.power_sum_table(X, r, d)
        _, counts = np.unique(table, axis=0, return_counts=True)
        return int(np.dot(counts.astype(np.int64), counts.astype(np.int64)))
    tally = Counter(power_sums(t, d) for t in itertools.product(range(1, X + 1), repeat=r))
    return sum(c * c for c in tally.values())


def is_bad(x) -> bool:
    """Every entry value occurs at least twice."""
    counts = Counter(_entries(x))
    return all(c >= 2 for c in counts.values())


def enumerate_tuples(r: int, tau: int) -> np.ndarray:
    """All of [1, tau]**(2r) as a (tau**(2r), 2r) array, lexicographic."""
    n = 2 * r
    if tau ** n > BAD_ENUM_LIMIT:
        raise EnumerationGuardError(f"tau**(2r) = {tau}**{n} exceeds {BAD_ENUM_LIMIT}")
    return np.indices((tau,) * n).reshape(n, -1).T + 1


def _bad_mask(xs: np.ndarray) -> np.ndarray:
    eq = xs[:, :, None] == xs[:, None, :]
    return np.all(eq.sum(axis=2) >= 2, axis=1)


def count_bad(r: int, tau: int) -> int:
    xs = enumerate_tuples(r, tau)
    n_bad = int(np.count_nonzero(_bad_mask(xs)))
    if n_bad > r ** (2 * r + 1) * tau**r:
        raise AssertionError(f"bad-tuple count {n_bad} exceeds r^(2r+1) tau^r")
    return n_bad


def in_V(x, d: int) -> bool:
    """Alternating power sums sum_i (-1)**i x_i**s vanish for s = 1..d."""
    xs = _entries(x)
    return all(
        sum((-1) ** i * v**s for i, v in enumerate(xs, start=1)) == 0 for s in range(1, d + 1)
    )


def _alt_sums(xs: np.ndarray, d: int) -> np.ndarray:
    eps = signs(xs.shape[1] // 2)
    return np.stack([(xs**s) @ eps for s in range(1, d + 1)], axis=1)


def count_in_V(r: int, d: int, tau: int, split_bad: bool = False):
    """#V_{r,d}(tau) by enumeration; with ``split_bad`` returns (#G∩V, #B∩V)."""
    xs = enumerate_tuples(r, tau)
    inv = np.all(_alt_sums(xs, d) == 0, axis=1) if d else np.ones(len(xs), bool)
    if not split_bad:
        return int(np.count_nonzero(inv))
    bad = _bad_mask(xs)
    return int(np.count_nonzero(inv & ~bad)), int(np.count_nonzero(inv & bad))


def conjecture_ratio_table(r: int, d: int, X_max: int, method: str = "mitm"):
    """Rows (X, J, J / (X**r + X**(2r - D))) for X = 1..X_max."""
    D = d * (d + 1) // 2
    count = count_J_mitm if method == "mitm" else count_J_bruteforce
    rows = []
    for X in range(1, X_max + 1):
        J = count(r, d, X)
        denom = X**r + float(X) ** (2 * r - D)
        rows.append((X, J, J / denom))
    return rows
