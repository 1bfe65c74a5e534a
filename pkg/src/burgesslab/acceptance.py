"""Exit criteria for the laboratory, runnable from pytest or the CLI.

Each criterion returns a :class:`CriterionResult`; ``passed`` requires both
the numerical check and the wall-clock limit.  JIT compilation is triggered
by :func:`run_all` before any timer starts.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import _kernels
from .bounds import D_of, chang_refined_bound, delta_vin, optimal_r_chang, optimal_r_vin, vinogradov_bound
from .modular import prime_modulus
from .pipeline import choose_P, count_profile, xi_identity_check
from .sums import RealPolynomial, build_Fx, complete_sum, is_perfect_power, mixed_sum, plain_sum
from .vinogradov import count_bad, count_J_bruteforce, count_J_mitm

SEED = 20140601
MOMENT_RATIO_CAP = 64.0


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    seconds: float
    limit: float
    detail: str = ""
    data: dict = field(default_factory=dict)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.number:2d} {self.name} ({self.seconds:.2f}s / {self.limit:g}s) {self.detail}"


def _timed(number, name, limit):
    def deco(fn):
        def run():
            t0 = time.perf_counter()
            ok, detail, data = fn()
            dt = time.perf_counter() - t0
            if dt >= limit:
                ok = False
                detail += f" runtime {dt:.2f}s exceeds {limit}s"
            return CriterionResult(number, name, bool(ok), dt, limit, detail, data)

        run.number = number
        run.__name__ = fn.__name__
        return run

    return deco


@_timed(1, "orthogonality", 1.0)
def orthogonality():
    worst = 0.0
    for q in (7, 101, 499):
        pm = prime_modulus(q)
        for chi in pm.characters():
            worst = max(worst, plain_sum(chi, 0, q).magnitude)
    return worst < 1e-9, f"max |sum chi| = {worst:.3g}", {"max": worst}


@_timed(2, "gauss-sum sharpness", 1.0)
def gauss_sharpness():
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for q in (101, 499, 997):
        pm = prime_modulus(q)
        f = RealPolynomial([0, Fraction(1, q)])
        for j in rng.choice(np.arange(1, q - 1), size=3, replace=False):
            s = mixed_sum(pm.character(int(j)), f, 0, q)
            worst = max(worst, abs(s.magnitude / math.sqrt(q) - 1))
    return worst < 1e-6, f"max rel. err = {worst:.3g}", {"max_rel_err": worst}


@_timed(3, "weil inequality", 5.0)
def weil_inequality():
    violations = 0
    applicable = 0
    bad_violations = 0
    for q in (13, 17):
        pm = prime_modulus(q)
        chi = pm.character((q - 1) // 2)  # the quadratic character, order 2
        for x in itertools.product(range(1, 7), repeat=4):
            F = build_Fx(x, 2, q)
            mag = complete_sum(chi, x).magnitude
            if is_perfect_power(F):
                bad_violations += mag > q + 1e-9
            else:
                applicable += 1
                violations += mag > (F.degree - 1) * math.sqrt(q) + 1e-9
    ok = violations == 0 and bad_violations == 0
    return ok, f"{violations} violations / {applicable} applicable, {bad_violations} trivial-bound violations", {}


@_timed(4, "vinogradov oracle equivalence", 60.0)
def vinogradov_oracle():
    mismatches = []
    for r, d in itertools.product(range(1, 4), range(0, 4)):
        for X in range(1, 13):
            if count_J_mitm(r, d, X) != count_J_bruteforce(r, d, X):
                mismatches.append((r, d, X))
    closed = []
    for X in range(1, 51):
        J21 = count_J_mitm(2, 1, X)
        J22 = count_J_mitm(2, 2, X)
        if 3 * J21 != 2 * X**3 + X or J22 != 2 * X * X - X:
            closed.append(X)
        if J21 != count_J_bruteforce(2, 1, X) or J22 != count_J_bruteforce(2, 2, X):
            closed.append(X)
    ok = not mismatches and not closed
    return ok, f"{len(mismatches)} oracle mismatches, {len(closed)} closed-form mismatches", {}


@_timed(5, "bad-tuple lemma", 5.0)
def bad_tuples():
    over = []
    for r in (1, 2):
        for tau in range(1, 9):
            if count_bad(r, tau) > r ** (2 * r + 1) * tau**r:
                over.append((r, tau))
    exact = count_bad(2, 2)
    return not over and exact == 8, f"count_bad(2,2) = {exact}, {len(over)} over bound", {}


@_timed(6, "grid identity", 10.0)
def grid_identity():
    total = 0
    passed = 0
    for r, d, Q in ((1, 1, 2), (1, 2, 2), (2, 1, 3), (2, 2, 3)):
        for x in itertools.product(range(1, Q + 1), repeat=2 * r):
            total += 1
            passed += xi_identity_check(x, Q, d, tol=1e-6)
    return passed == total, f"PASS {passed}/{total}", {}


def moment_grid():
    """Parameter grid for the A(m) lemma: auxiliary P from (r, d) = (3, 1)."""
    for q in (1009, 10007):
        for s in (0.5, 0.55, 0.6):
            H = math.ceil(q**s)
            P = choose_P(H, q, 3, 1)
            for N in (0, q // 3):
                yield q, H, P, N


@_timed(7, "A(m) moments", 30.0)
def moments():
    worst = 0.0
    ok = True
    for q, H, P, N in moment_grid():
        prof = count_profile(N, H, P, q)
        lo, hi = prof.support
        ok &= -2 * q <= lo and hi <= 2 * q
        ok &= prof.S1 <= prof.S2
        ok &= prof.hp_below_q
        worst = max(worst, prof.S2 / (H * P))
    ok &= worst <= MOMENT_RATIO_CAP
    return ok, f"max S2/(HP) = {worst:.4f} (cap {MOMENT_RATIO_CAP:g})", {"max_ratio": worst}


@_timed(8, "bound-formula consistency", 1.0)
def bound_consistency():
    seam = 0.0
    for d in range(0, 7):
        D = D_of(d)
        r = D + 1
        v = vinogradov_bound(1e9, 1e4, r, d, eps=0.0)
        c = chang_refined_bound(1e9, 1e4, r, d)
        seam = max(seam, abs(v.q_exponent - c.q_exponent))
    rng = np.random.default_rng(SEED)
    bad = 0
    n = 0
    while n < 1000:
        d = int(rng.integers(1, 6))
        D = D_of(d)
        r = int(rng.integers(D + 2, D + 40))
        q = 10 ** rng.uniform(3, 15)
        s = rng.uniform(0.25, 0.5 + 1 / (4 * r))
        H = q**s
        v = vinogradov_bound(q, H, r, d)
        c = chang_refined_bound(q, H, r, d)
        if not (v.valid and c.valid):
            continue
        n += 1
        bad += v.bound > c.bound
    ok = seam < 1e-12 and bad == 0
    return ok, f"seam gap {seam:.2g}, {bad}/{n} dominance failures", {}


@_timed(9, "delta asymptotics", 1.0)
def delta_asymptotics():
    kappa = 1e-4
    ratios = [delta_vin(kappa, d) / kappa**2 for d in range(0, 7)]
    rc = optimal_r_chang(0.05, 2)
    rv = optimal_r_vin(0.05, 2)
    ok = all(0.98 <= x <= 1.0 for x in ratios) and rc == 40 and rv == 14
    return ok, f"min ratio {min(ratios):.4f}, r_chang={rc}, r_vin={rv}", {}


@_timed(10, "nontriviality smoke test", 60.0)
def nontriviality():
    q = 10007
    H = math.ceil(q**0.4)
    pm = prime_modulus(q)
    rng = np.random.default_rng(SEED)
    chi = pm.character(int(rng.integers(1, q - 1)))
    Ns = [int(n) for n in rng.integers(0, q, size=100)]
    vin = vinogradov_bound(q, H, 2, 1)
    table = []
    worst = 0.0
    for _ in range(20):
        den = int(rng.integers(2, 10**6))
        f = RealPolynomial([Fraction(int(rng.integers(0, den)), den) for _ in range(2)])
        mags = [mixed_sum(chi, f, N, H).magnitude for N in Ns]
        m = max(mags)
        worst = max(worst, m / H)
        table.append((str(f.coeffs[1]), m, m / vin.bound))
    finite = all(math.isfinite(row[2]) for row in table)
    ok = worst < 0.9 and finite
    return ok, f"max |S|/H = {worst:.3f}, max |S|/vin = {max(r[2] for r in table):.3g}", {"table": table}


CRITERIA = [
    orthogonality,
    gauss_sharpness,
    weil_inequality,
    vinogradov_oracle,
    bad_tuples,
    grid_identity,
    moments,
    bound_consistency,
    delta_asymptotics,
    nontriviality,
]


def warmup():
    _kernels.warmup()
    prime_modulus(7)


def run_all(echo=print) -> list[CriterionResult]:
    warmup()
    results = []
    for crit in CRITERIA:
        res = crit()
        if echo:
            echo(res.line())
        results.append(res)
    return results
