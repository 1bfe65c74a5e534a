"""Hot inner loops, each in two flavours.

``*_loop`` functions are scalar loops compiled with numba when available;
``*_vec`` functions do the same arithmetic with whole-array numpy
operations.  The public names at the bottom of the module point at one or
the other according to :data:`burgesslab._accel.BACKEND`.  Both flavours
must agree bit-for-bit on integer outputs; float outputs agree to within
a few ulps of the compensated sums.

Conventions shared by the phase-sum kernels: the summation variable runs
over ``n = start+1, ..., start+count`` and the character is evaluated at
``n + shift``.  ``dlog`` is the discrete-log table of the modulus with
``dlog[0] == -1``; ``j`` is the character index.
"""

import math

import numpy as np

from ._accel import BACKEND, njit, prange

TWO_PI = 2.0 * math.pi
_SPLITTER = 134217729.0  # 2**27 + 1
_CHUNK = 1 << 18


# -- error-free transformations (work on scalars and on arrays) --------------

def _two_sum(a, b):
    s = a + b
    bb = s - a
    err = (a - (s - bb)) + (b - bb)
    return s, err


def _fast_two_sum(a, b):
    s = a + b
    err = b - (s - a)
    return s, err


def _split(a):
    c = _SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


def _two_prod(a, b):
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    err = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, err


def _dd_horner_frac(coefs, x):
    """Fractional part of sum coefs[k] x**k in double-double arithmetic.

    ``coefs`` has shape (K, 2): each row is a double-double (hi, lo) with hi
    already reduced into [0, 1).  ``x`` is an integer-valued
    float with |x| < 2**53.  Reduction mod 1 after each Horner step keeps the
    high word below 1 so the product with ``x`` loses nothing.
    """
    hi = x * 0.0
    lo = x * 0.0
    for k in range(coefs.shape[0] - 1, -1, -1):
        p, e = _two_prod(hi, x)
        e = e + lo * x
        s, t = _two_sum(p, coefs[k, 0])
        t = t + (e + coefs[k, 1])
        hi, lo = _fast_two_sum(s, t)
        hi = hi - np.floor(hi)
        hi, lo = _fast_two_sum(hi, lo)
    frac = hi - np.floor(hi)
    return frac, lo


_two_sum_nb = njit(cache=True)(_two_sum)
_fast_two_sum_nb = njit(cache=True)(_fast_two_sum)
_split_nb = njit(cache=True)(_split)


@njit(cache=True)
def _two_prod_nb(a, b):
    p = a * b
    ah, al = _split_nb(a)
    bh, bl = _split_nb(b)
    err = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, err


@njit(cache=True)
def _dd_horner_frac_nb(coefs, x):
    hi = 0.0
    lo = 0.0
    for k in range(coefs.shape[0] - 1, -1, -1):
        p, e = _two_prod_nb(hi, x)
        e = e + lo * x
        s, t = _two_sum_nb(p, coefs[k, 0])
        t = t + (e + coefs[k, 1])
        hi, lo = _fast_two_sum_nb(s, t)
        hi = hi - math.floor(hi)
        hi, lo = _fast_two_sum_nb(hi, lo)
    return hi - math.floor(hi), lo


def _fsum_pair(re_parts, im_parts):
    return math.fsum(re_parts), math.fsum(im_parts)


# -- exact-rational phase sums ------------------------------------------------

@njit(cache=True)
def exact_phase_sum_loop(coef, L, dlog, j, q, start, count, shift):
    """Sum of e(P(n)/L + j*dlog(n+shift)/(q-1)) with P given mod L.

    ``coef[k]`` is the numerator of the n**k coefficient over ``L``.  Every
    phase is an exact integer modulo M = lcm(L, q-1); only the final
    root-of-unity conversion is in floating point.  Returns (re, im) with
    Neumaier-compensated accumulation.
    """
    qm1 = q - 1
    g = L
    b = qm1
    while b:
        g, b = b, g % b
    M = L // g * qm1
    sL = M // L
    sq = M // qm1
    jj = j % qm1
    nl = (start + 1) % L
    rq = (start + 1 + shift) % q
    re = 0.0
    re_c = 0.0
    im = 0.0
    im_c = 0.0
    deg = coef.shape[0] - 1
    for _ in range(count):
        if rq != 0:
            acc = 0
            for k in range(deg, -1, -1):
                acc = (acc * nl + coef[k]) % L
            k_tot = (acc * sL + ((jj * dlog[rq]) % qm1) * sq) % M
            ang = TWO_PI * (k_tot / M)
            c = math.cos(ang)
            t = re + c
            if abs(re) >= abs(c):
                re_c += (re - t) + c
            else:
                re_c += (c - t) + re
            re = t
            s = math.sin(ang)
            t = im + s
            if abs(im) >= abs(s):
                im_c += (im - t) + s
            else:
                im_c += (s - t) + im
            im = t
        nl += 1
        if nl == L:
            nl = 0
        rq += 1
        if rq == q:
            rq = 0
    return re + re_c, im + im_c


def exact_phase_sum_vec(coef, L, dlog, j, q, start, count, shift):
    qm1 = q - 1
    M = L // math.gcd(L, qm1) * qm1
    sL = M // L
    sq = M // qm1
    jj = j % qm1
    coef = np.asarray(coef, dtype=np.int64)
    re_parts = []
    im_parts = []
    for lo in range(0, count, _CHUNK):
        n = np.arange(start + 1 + lo, start + 1 + min(count, lo + _CHUNK), dtype=np.int64)
        rq = (n + shift) % q
        keep = rq != 0
        n = n[keep]
        rq = rq[keep]
        nl = n % L
        acc = np.zeros_like(nl)
        for k in range(coef.shape[0] - 1, -1, -1):
            acc = (acc * nl + coef[k]) % L
        k_tot = (acc * sL + ((jj * dlog[rq]) % qm1) * sq) % M
        ang = TWO_PI * (k_tot / M)
        re_parts.append(math.fsum(np.cos(ang)))
        im_parts.append(math.fsum(np.sin(ang)))
    return _fsum_pair(re_parts, im_parts)


# -- float phase sums ---------------------------------------------------------

@njit(cache=True)
def float_phase_sum_loop(coefs, dlog, j, q, start, count, shift):
    """Sum of e(f(n) + j*dlog(n+shift)/(q-1)); coefs as in _dd_horner_frac."""
    qm1 = q - 1
    jj = j % qm1
    rq = (start + 1 + shift) % q
    re = 0.0
    re_c = 0.0
    im = 0.0
    im_c = 0.0
    for i in range(count):
        if rq != 0:
            x = float(start + 1 + i)
            frac, lo = _dd_horner_frac_nb(coefs, x)
            cf = ((jj * dlog[rq]) % qm1) / qm1
            s1, e1 = _two_sum_nb(frac, cf)
            ph = s1 + (e1 + lo)
            ph = ph - math.floor(ph)
            ang = TWO_PI * ph
            c = math.cos(ang)
            t = re + c
            if abs(re) >= abs(c):
                re_c += (re - t) + c
            else:
                re_c += (c - t) + re
            re = t
            s = math.sin(ang)
            t = im + s
            if abs(im) >= abs(s):
                im_c += (im - t) + s
            else:
                im_c += (s - t) + im
            im = t
        rq += 1
        if rq == q:
            rq = 0
    return re + re_c, im + im_c


def float_phase_sum_vec(coefs, dlog, j, q, start, count, shift):
    qm1 = q - 1
    jj = j % qm1
    coefs = np.asarray(coefs, dtype=np.float64)
    re_parts = []
    im_parts = []
    for lo in range(0, count, _CHUNK):
        n = np.arange(start + 1 + lo, start + 1 + min(count, lo + _CHUNK), dtype=np.int64)
        rq = (n + shift) % q
        keep = rq != 0
        n = n[keep]
        rq = rq[keep]
        frac, low = _dd_horner_frac(coefs, n.astype(np.float64))
        cf = ((jj * dlog[rq]) % qm1) / qm1
        s1, e1 = _two_sum(frac, cf)
        ph = s1 + (e1 + low)
        ph = ph - np.floor(ph)
        ang = TWO_PI * ph
        re_parts.append(math.fsum(np.cos(ang)))
        im_parts.append(math.fsum(np.sin(ang)))
    return _fsum_pair(re_parts, im_parts)


# -- complete sums of chi(F(m)) -----------------------------------------------

@njit(cache=True)
def complete_sum_hist_loop(dlog, roots, mults, q):
    """Histogram over m = 1..q of sum_i mults[i]*dlog(m + roots[i]) mod q-1.

    Values of m where some factor vanishes mod q are skipped (chi(0) = 0).
    """
    qm1 = q - 1
    hist = np.zeros(qm1, dtype=np.int64)
    for m in range(1, q + 1):
        k = 0
        zero = False
        for i in range(roots.shape[0]):
            u = (m + roots[i]) % q
            if u == 0:
                zero = True
                break
            k = (k + mults[i] * dlog[u]) % qm1
        if not zero:
            hist[k] += 1
    return hist


def complete_sum_hist_vec(dlog, roots, mults, q):
    qm1 = q - 1
    m = np.arange(1, q + 1, dtype=np.int64)
    k = np.zeros(q, dtype=np.int64)
    keep = np.ones(q, dtype=bool)
    for root, mult in zip(np.asarray(roots), np.asarray(mults)):
        u = (m + int(root)) % q
        keep &= u != 0
        k = (k + int(mult) * dlog[u]) % qm1
    return np.bincount(k[keep], minlength=qm1).astype(np.int64)


# -- Vinogradov system --------------------------------------------------------

@njit(cache=True)
def power_sum_table_loop(X, r, d):
    """Row t holds (sum x_i, sum x_i**2, ..., sum x_i**d) for the t-th r-tuple
    of [1, X]**r in lexicographic order."""
    total = X ** r
    out = np.zeros((total, d), dtype=np.int64)
    pw = np.zeros((X + 1, d), dtype=np.int64)
    for x in range(1, X + 1):
        v = 1
        for s in range(d):
            v *= x
            pw[x, s] = v
    digits = np.ones(r, dtype=np.int64)
    for t in range(total):
        for i in range(r):
            for s in range(d):
                out[t, s] += pw[digits[i], s]
        i = r - 1
        while i >= 0:
            digits[i] += 1
            if digits[i] <= X:
                break
            digits[i] = 1
            i -= 1
    return out


def power_sum_table_vec(X, r, d):
    x = np.arange(1, X + 1, dtype=np.int64)
    pw = np.stack([x ** s for s in range(1, d + 1)], axis=1) if d else np.zeros((X, 0), np.int64)
    out = np.zeros((1, d), dtype=np.int64)
    for _ in range(r):
        out = (out[:, None, :] + pw[None, :, :]).reshape(-1, d)
    return out


@njit(cache=True)
def _alt_zero_count(pw, X, first, r, d):
    # Tuples with x_1 = first; remaining 2r-1 coordinates run as an odometer.
    n = 2 * r
    digits = np.ones(n, dtype=np.int64)
    digits[0] = first
    count = 0
    total = X ** (n - 1)
    for _ in range(total):
        ok = True
        for s in range(d):
            acc = 0
            for i in range(r):
                acc += pw[digits[i], s]
            for i in range(r, n):
                acc -= pw[digits[i], s]
            if acc != 0:
                ok = False
                break
        if ok:
            count += 1
        i = n - 1
        while i >= 1:
            digits[i] += 1
            if digits[i] <= X:
                break
            digits[i] = 1
            i -= 1
    return count


@njit(cache=True, parallel=True)
def count_j_brute_loop(X, r, d):
    """Number of x in [1,X]**(2r) whose two halves share all power sums 1..d."""
    pw = np.zeros((X + 1, max(d, 1)), dtype=np.int64)
    for x in range(1, X + 1):
        v = 1
        for s in range(d):
            v *= x
            pw[x, s] = v
    total = 0
    for first in prange(1, X + 1):
        total += _alt_zero_count(pw, X, first, r, d)
    return total


def count_j_brute_vec(X, r, d):
    n = 2 * r
    x = np.arange(1, X + 1, dtype=np.int64)
    pw = np.stack([x ** s for s in range(1, d + 1)]) if d else np.zeros((0, X), np.int64)
    signs = np.array([1] * r + [-1] * r, dtype=np.int64)
    # enumerate a prefix explicitly and the suffix as a dense grid
    suffix_len = n
    while suffix_len > 1 and X ** suffix_len > 1 << 20:
        suffix_len -= 1
    prefix_len = n - suffix_len
    grid = np.indices((X,) * suffix_len).reshape(suffix_len, -1)
    suffix_sums = np.zeros((d, grid.shape[1]), dtype=np.int64)
    for k in range(suffix_len):
        suffix_sums += signs[prefix_len + k] * pw[:, grid[k]]
    total = 0
    for prefix in np.ndindex(*((X,) * prefix_len)):
        shift = np.zeros(d, dtype=np.int64)
        for k, idx in enumerate(prefix):
            shift += signs[k] * pw[:, idx]
        total += int(np.count_nonzero(np.all(suffix_sums + shift[:, None] == 0, axis=0)))
    return total


# -- backend dispatch ---------------------------------------------------------

if BACKEND == "numba":
    exact_phase_sum = exact_phase_sum_loop
    float_phase_sum = float_phase_sum_loop
    complete_sum_hist = complete_sum_hist_loop
    power_sum_table = power_sum_table_loop
    count_j_brute = count_j_brute_loop
else:
    exact_phase_sum = exact_phase_sum_vec
    float_phase_sum = float_phase_sum_vec
    complete_sum_hist = complete_sum_hist_vec
    power_sum_table = power_sum_table_vec
    count_j_brute = count_j_brute_vec


def warmup():
    """Trigger JIT compilation on tiny inputs so later timings exclude it."""
    dlog = np.array([-1, 0, 2, 1, 4, 5, 3], dtype=np.int64)
    exact_phase_sum(np.array([0, 1], dtype=np.int64), 7, dlog, 3, 7, 0, 7, 0)
    float_phase_sum(np.array([[0.0, 0.0], [0.5, 0.0]]), dlog, 3, 7, 0, 7, 0)
    complete_sum_hist(dlog, np.array([1, 2], dtype=np.int64), np.array([1, 1], dtype=np.int64), 7)
    power_sum_table(3, 2, 2)
    count_j_brute(2, 1, 1)
