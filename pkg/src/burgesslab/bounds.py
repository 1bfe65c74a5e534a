"""Closed-form bounds for short mixed character sums.

Every bound has the shape H**a * q**b * (log q)**c with the implied
constant set to 1, so values are only meaningful as ratios against measured
sums.  Validity windows use strict inequalities; a report outside its
window is returned with ``valid=False`` rather than raising.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "BoundReport",
    "D_of",
    "best_bound",
    "burgess_classical",
    "chang_refined_bound",
    "delta_chang",
    "delta_chang_refined",
    "delta_vin",
    "enflo_bound",
    "intermediate_bound",
    "optimal_r_chang",
    "optimal_r_vin",
    "trivial_bound",
    "vinogradov_bound",
]

DEFAULT_EPS = 0.01


@dataclass(frozen=True)
class BoundReport:
    theorem: str
    q: float
    H: float
    r: int
    d: int
    eps: float
    h_exponent: float
    q_exponent: float
    log_power: float
    valid: bool
    reason: str = ""
    unconditional: bool = True
    nontrivial_possible: bool = True

    @property
    def bound(self) -> float:
        return self.H**self.h_exponent * self.q**self.q_exponent * math.log(self.q) ** self.log_power

    @property
    def log_bound(self) -> float:
        return (
            self.h_exponent * math.log(self.H)
            + self.q_exponent * math.log(self.q)
            + self.log_power * math.log(math.log(self.q))
        )

    @property
    def nontrivial(self) -> bool:
        """Bound beats the trivial estimate H."""
        return self.valid and self.bound < self.H


def D_of(d: int) -> int:
    if d < 0:
        raise ValueError("degree must be >= 0")
    return d * (d + 1) // 2


def _check(q, H, r):
    if q <= 1 or H <= 0:
        raise ValueError("need q > 1 and H > 0")
    if r < 1:
        raise ValueError("need r >= 1")


def trivial_bound(q, H) -> BoundReport:
    return BoundReport("trivial", q, H, 0, 0, 0.0, 1.0, 0.0, 0.0, True)


def burgess_classical(q, H, r: int) -> BoundReport:
    _check(q, H, r)
    return BoundReport("burgess", q, H, r, 0, 0.0, 1 - 1 / r, (r + 1) / (4 * r * r), 1.0, True)


def enflo_bound(q, H, r: int, d: int, eps: float = DEFAULT_EPS) -> BoundReport:
    _check(q, H, r)
    k = 2**d
    limit = 3 / 4 + 1 / (4 * r)
    valid = H < q**limit
    return BoundReport(
        "enflo", q, H, r, d, eps,
        1 - 1 / (k * r),
        (r + 1) / (4 * k * r * r) + eps,
        0.0,
        valid,
        "" if valid else f"needs H < q^{limit:.6g}",
    )


def chang_refined_bound(q, H, r: int, d: int) -> BoundReport:
    _check(q, H, r)
    D = D_of(d)
    limit = 1 / 2 + 1 / (4 * r)
    valid = H < q**limit
    return BoundReport(
        "chang", q, H, r, d, 0.0,
        1 - 1 / r,
        (r + 1 + D) / (4 * r * r),
        2.0,
        valid,
        "" if valid else f"needs H < q^{limit:.6g}",
        nontrivial_possible=r >= 1 + D,
    )


def _vin_unconditional(r: int, d: int) -> bool:
    if d <= 3:
        return True
    return r >= d * (d - 1)


def vinogradov_bound(q, H, r: int, d: int, eps: float = DEFAULT_EPS) -> BoundReport:
    """Bound valid for r > D, unconditional when the main conjecture is known."""
    _check(q, H, r)
    D = D_of(d)
    if r <= D:
        return BoundReport(
            "vinogradov", q, H, r, d, eps, 1 - 1 / r, math.inf, 0.0, False,
            f"r={r} <= D={D}: no better than trivial",
            unconditional=_vin_unconditional(r, d), nontrivial_possible=False,
        )
    limit = 1 / 2 + 1 / (4 * (r - D))
    valid = H < q**limit
    return BoundReport(
        "vinogradov", q, H, r, d, eps,
        1 - 1 / r,
        (r + 1 - D) / (4 * r * (r - D)) + eps,
        0.0,
        valid,
        "" if valid else f"needs H < q^{limit:.6g}",
        unconditional=_vin_unconditional(r, d),
    )


def intermediate_bound(q, H, r: int, d: int, eps: float = DEFAULT_EPS, delta: float | None = None) -> BoundReport:
    """Bound for d >= 4, D < r < d(d-1), using J << X^(2r-D+delta)."""
    _check(q, H, r)
    if delta is None:
        delta = float(d)
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    D = D_of(d)
    shift = r - D + delta
    reason = ""
    if d < 4 or not D < r < d * (d - 1):
        reason = f"needs d >= 4 and {D} < r < {d * (d - 1)}"
    q_exp = (r + 1 - D + 2 * delta) / (4 * r * shift) + eps if shift > 0 else math.inf
    limit = 1 / 2 + 1 / (4 * shift) if shift > 0 else -math.inf
    if not reason and not H < q**limit:
        reason = f"needs H < q^{limit:.6g}"
    return BoundReport(
        "intermediate", q, H, r, d, eps, 1 - 1 / r, q_exp, 0.0, not reason, reason,
    )


# -- delta(kappa) and optimal r for H = q^(1/4 + kappa) ----------------------

def delta_chang(kappa: float, d: int) -> float:
    return kappa**2 / (4 * ((d + 1) ** 2 + 2) * (1 + 2 * kappa))


def delta_chang_refined(kappa: float, d: int) -> float:
    return kappa**2 / (D_of(d) + 1)


def delta_vin(kappa: float, d: int) -> float:
    return (2 * kappa / (1 + math.sqrt(1 + 4 * D_of(d) * kappa))) ** 2


def _nearest(x: float) -> int:
    # integer r = x + theta with -1/2 < theta <= 1/2
    return math.floor(x + 0.5)


def optimal_r_chang(kappa: float, d: int) -> int:
    if kappa <= 0:
        raise ValueError("kappa must be positive")
    return max(1, _nearest((D_of(d) + 1) / (2 * kappa)))


def optimal_r_vin(kappa: float, d: int) -> int:
    if kappa <= 0:
        raise ValueError("kappa must be positive")
    D = D_of(d)
    return max(D + 1, _nearest(D + (1 + math.sqrt(4 * D * kappa + 1)) / (4 * kappa)))


def best_bound(q, H, d: int, eps: float = DEFAULT_EPS, delta: float | None = None,
               allow_conditional: bool = False) -> BoundReport:
    """Smallest valid bound over r in [1, 4D+64] and all theorems covering degree d.

    Degree 0 uses the classical bound only.  Conditional bounds (those
    depending on the unproved main conjecture) are skipped unless
    ``allow_conditional``.  When nothing valid beats H the trivial bound is
    returned.
    """
    D = D_of(d)
    best = trivial_bound(q, H)
    for r in range(1, 4 * D + 65):
        if d == 0:
            cands = [burgess_classical(q, H, r)]
        else:
            cands = [enflo_bound(q, H, r, d, eps), chang_refined_bound(q, H, r, d),
                     vinogradov_bound(q, H, r, d, eps)]
            if d >= 4 and D < r < d * (d - 1):
                cands.append(intermediate_bound(q, H, r, d, eps, delta))
        for rep in cands:
            if not rep.valid or not (allow_conditional or rep.unconditional):
                continue
            if rep.log_bound < best.log_bound:
                best = rep
    return best
