"""Command-line experiment harness.

Every subcommand writes CSV (header row first) to ``--out`` or stdout.
Parameter combinations that a theorem or guard rejects are not written as
rows; they go to the rejects log (``<out>.rejects.csv``, or stderr).

Exit codes: 0 success, 2 invalid parameters, 3 resource guard, 4 a check
or acceptance criterion failed.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from fractions import Fraction

import numpy as np

from . import __version__
from ._accel import BACKEND, set_threads
from .bounds import (
    D_of,
    best_bound,
    burgess_classical,
    chang_refined_bound,
    delta_chang,
    delta_chang_refined,
    delta_vin,
    enflo_bound,
    intermediate_bound,
    optimal_r_chang,
    optimal_r_vin,
    vinogradov_bound,
)
from .modular import is_prime, prime_modulus
from .pipeline import S4_empirical, choose_P, count_profile, q_for_vinogradov, xi_identity_check
from .sums import RealPolynomial, mixed_sum
from .vinogradov import BRUTE_FORCE_LIMIT, MITM_LIMIT, EnumerationGuardError, count_J_bruteforce, count_J_mitm

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_GUARD = 3
EXIT_FAILED = 4

CHARSUM_HEADER = ["N", "H", "magnitude", "bound_chang", "bound_vin", "ratio_vin"]
GRID_SET = ((1, 1, 2), (1, 2, 2), (2, 1, 3), (2, 2, 3))


class InvalidParams(ValueError):
    pass


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return int(v)
    if isinstance(v, float):
        return repr(v)
    return v


class CsvSink:
    def __init__(self, out, rejects):
        self._own = []
        self.stream = self._open(out, sys.stdout)
        if rejects is None and out not in (None, "-"):
            rejects = f"{out}.rejects.csv"
        self.reject_stream = self._open(rejects, sys.stderr)
        self.writer = csv.writer(self.stream, lineterminator="\n")
        self.reject_writer = csv.writer(self.reject_stream, lineterminator="\n")
        self._reject_header = False

    def _open(self, path, default):
        if path in (None, "-"):
            return default
        fh = open(path, "w", newline="")
        self._own.append(fh)
        return fh

    def header(self, cols):
        self.writer.writerow(cols)

    def row(self, values):
        self.writer.writerow([_fmt(v) for v in values])

    def reject(self, reason, **params):
        if not self._reject_header:
            self.reject_writer.writerow(["reason", "params"])
            self._reject_header = True
        detail = ";".join(f"{k}={v}" for k, v in params.items())
        self.reject_writer.writerow([reason, detail])

    def close(self):
        for fh in self._own:
            fh.close()


def _parse_coeff(tok: str):
    tok = tok.strip()
    try:
        return Fraction(tok)
    except ValueError:
        pass
    try:
        return float(tok)
    except ValueError:
        raise InvalidParams(f"bad coefficient {tok!r}") from None


def _single_q(args) -> int:
    qs = args.q or []
    if len(qs) != 1:
        raise InvalidParams("exactly one --q is required")
    q = qs[0]
    if q < 3 or not is_prime(q):
        raise InvalidParams(f"--q {q} is not an odd prime")
    return q


def _h_values(args, q):
    if args.H:
        return [int(h) for h in args.H]
    if args.h_exp:
        return [math.ceil(q**s) for s in args.h_exp]
    return [q]


# -- subcommands ---------------------------------------------------------------

def cmd_charsum(args, sink):
    q = _single_q(args)
    pm = prime_modulus(q)
    rng = np.random.default_rng(args.seed)
    j = args.char_index if args.char_index is not None else int(rng.integers(1, q - 1))
    if not 1 <= j <= q - 2:
        raise InvalidParams("--char-index must select a non-principal character")
    chi = pm.character(j)
    if args.coeffs:
        coeffs = [_parse_coeff(t) for t in args.coeffs.split(",")]
    else:
        coeffs = [0]
    d = args.d if args.d is not None else max(len(coeffs) - 1, 0)
    f = RealPolynomial(coeffs, d)
    if args.n_values:
        Ns = [int(n) for n in args.n_values]
    elif args.samples:
        Ns = [int(n) for n in rng.integers(0, q, size=args.samples)]
    else:
        Ns = [0]
    r = args.r if args.r is not None else max(2, D_of(d) + 1)
    sink.header(CHARSUM_HEADER)
    for H in _h_values(args, q):
        if H < 0:
            sink.reject("H < 0", q=q, H=H)
            continue
        chang = chang_refined_bound(q, H, r, d) if H > 0 else None
        vin = vinogradov_bound(q, H, r, d, args.eps) if H > 0 else None
        bc = chang.bound if chang is not None and chang.valid else None
        bv = vin.bound if vin is not None and vin.valid else None
        for N in Ns:
            mag = mixed_sum(chi, f, N, H, mode=args.mode).magnitude
            sink.row([N, H, mag, bc, bv, mag / bv if bv else None])
    return EXIT_OK


def cmd_jcount(args, sink):
    r = args.r if args.r is not None else 2
    d = args.d if args.d is not None else 1
    if r < 1 or d < 0 or args.x_max < 1:
        raise InvalidParams("need r >= 1, d >= 0, --x-max >= 1")
    if args.x_max**r > MITM_LIMIT:
        raise EnumerationGuardError(f"--x-max {args.x_max} gives X**r above {MITM_LIMIT}")
    D = D_of(d)
    sink.header(["X", "J", "J_bruteforce", "conjecture_ratio"])
    for X in range(1, args.x_max + 1):
        J = count_J_mitm(r, d, X)
        brute = None
        if args.method == "both" and X ** (2 * r) <= BRUTE_FORCE_LIMIT:
            brute = count_J_bruteforce(r, d, X)
            if brute != J:
                print(f"oracle mismatch at X={X}: mitm={J} brute={brute}", file=sys.stderr)
                return EXIT_FAILED
        sink.row([X, J, brute, J / (X**r + float(X) ** (2 * r - D))])
    return EXIT_OK


def _theorem_reports(q, H, r, d, eps, delta):
    if d == 0:
        yield burgess_classical(q, H, r)
    yield enflo_bound(q, H, r, d, eps)
    yield chang_refined_bound(q, H, r, d)
    if d >= 1:
        yield vinogradov_bound(q, H, r, d, eps)
    if d >= 4:
        yield intermediate_bound(q, H, r, d, eps, delta)


def cmd_bounds(args, sink):
    d = args.d if args.d is not None else 1
    if d < 0:
        raise InvalidParams("--d must be >= 0")
    if args.kappa:
        sink.header(["kappa", "d", "D", "delta_chang", "delta_chang_refined", "delta_vin",
                     "r_opt_chang", "r_opt_vin"])
        for k in args.kappa:
            if k <= 0:
                sink.reject("kappa <= 0", kappa=k)
                continue
            sink.row([k, d, D_of(d), delta_chang(k, d), delta_chang_refined(k, d), delta_vin(k, d),
                      optimal_r_chang(k, d), optimal_r_vin(k, d)])
        return EXIT_OK
    qs = args.q or [10**9]
    if any(q < 3 for q in qs):
        raise InvalidParams("--q must be >= 3")
    h_exps = args.h_exp or [0.3, 0.4, 0.5]
    rs = [args.r] if args.r is not None else list(range(1, 4 * D_of(d) + 9))
    sink.header(["q", "h_exp", "H", "r", "d", "theorem", "unconditional", "h_exponent",
                 "q_exponent", "log_power", "bound", "bound_over_H"])
    for q in qs:
        for s in h_exps:
            H = q**s
            for r in rs:
                for rep in _theorem_reports(q, H, r, d, args.eps, args.delta_wooley):
                    if not rep.valid:
                        sink.reject(rep.reason, theorem=rep.theorem, q=q, h_exp=s, r=r, d=d)
                        continue
                    sink.row([q, s, H, r, d, rep.theorem, rep.unconditional, rep.h_exponent,
                              rep.q_exponent, rep.log_power, rep.bound, rep.bound / H])
            best = best_bound(q, H, d, args.eps, args.delta_wooley)
            sink.row([q, s, H, best.r, d, f"best:{best.theorem}", best.unconditional, best.h_exponent,
                      best.q_exponent, best.log_power, best.bound, best.bound / H])
    return EXIT_OK


def cmd_verify(args, sink):
    from .acceptance import run_all

    results = run_all(echo=lambda line: print(line, file=sys.stderr))
    sink.header(["criterion", "name", "passed", "seconds", "limit", "detail"])
    for res in results:
        sink.row([res.number, res.name, res.passed, round(res.seconds, 3), res.limit, res.detail])
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAILED


def cmd_grid(args, sink):
    if args.Q is not None:
        if args.r is None or args.d is None:
            raise InvalidParams("--Q needs --r and --d")
        cases = [(args.r, args.d, args.Q)]
    else:
        cases = GRID_SET
    sink.header(["r", "d", "Q", "passed", "total"])
    failed = False
    for r, d, Q in cases:
        if r < 1 or d < 0 or Q < 2:
            raise InvalidParams("need r >= 1, d >= 0, Q >= 2")
        tau = args.tau or Q
        xs = list(np.ndindex(*(tau,) * (2 * r)))
        ok = sum(xi_identity_check([v + 1 for v in x], Q, d) for x in xs)
        failed |= ok != len(xs)
        print(f"r={r} d={d} Q={Q}: {'PASS' if ok == len(xs) else 'FAIL'} {ok}/{len(xs)}", file=sys.stderr)
        sink.row([r, d, Q, ok, len(xs)])
    return EXIT_FAILED if failed else EXIT_OK


def cmd_pipeline(args, sink):
    qs = args.q or [1009, 10007]
    for q in qs:
        if q < 3 or not is_prime(q):
            raise InvalidParams(f"--q {q} is not an odd prime")
    r = args.r if args.r is not None else 3
    d = args.d if args.d is not None else 1
    if args.what == "s4":
        rng = np.random.default_rng(args.seed)
        sink.header(["q", "char_index", "r", "d", "Q", "tau", "S4", "J", "chang_shape", "vin_shape",
                     "ratio_chang", "ratio_vin"])
        for q in qs:
            pm = prime_modulus(q)
            j = args.char_index or int(rng.integers(1, q - 1))
            for tau in range(1, (args.tau or 4) + 1):
                rep = S4_empirical(pm.character(j), r, d, args.Q or 2, tau)
                sink.row([q, j, r, d, rep.Q, tau, rep.S4, rep.J, rep.chang_shape, rep.vin_shape,
                          rep.ratio_chang, rep.ratio_vin])
        return EXIT_OK
    h_exps = args.h_exp or [0.5, 0.55, 0.6]
    sink.header(["q", "N", "H", "P", "Q_vin", "n_pairs", "S1", "S2", "moment_ratio",
                 "support_min", "support_max", "hp_below_q"])
    for q in qs:
        Ns = [int(n) for n in args.n_values] if args.n_values else [0, q // 3]
        for s in h_exps:
            H = math.ceil(q**s)
            try:
                P = choose_P(H, q, r, d, args.delta_wooley or 0.0)
            except ValueError as exc:
                sink.reject(str(exc), q=q, h_exp=s, r=r, d=d)
                continue
            for N in Ns:
                prof = count_profile(N, H, P, q)
                if not prof.hp_below_q:
                    sink.reject("HP >= q", q=q, N=N, H=H, P=P)
                    continue
                lo, hi = prof.support
                sink.row([q, N, H, P, q_for_vinogradov(H, P, r), prof.n_pairs, prof.S1, prof.S2,
                          prof.S2 / (H * P), lo, hi, prof.hp_below_q])
    return EXIT_OK


# -- argument parsing ------------------------------------------------------------

def _common(p):
    p.add_argument("--q", type=int, nargs="+", help="prime modulus (some subcommands accept several)")
    p.add_argument("--d", type=int, help="polynomial degree")
    p.add_argument("--r", type=int, help="Burgess / Vinogradov parameter r")
    p.add_argument("--h-exp", type=float, nargs="+", help="H = ceil(q^s) for each s")
    p.add_argument("--kappa", type=float, nargs="+", help="kappa grid, H = q^(1/4 + kappa)")
    p.add_argument("--eps", type=float, default=0.01, help="epsilon in q^eps factors (default 0.01)")
    p.add_argument("--delta-wooley", type=float, default=None,
                   help="Delta_{r,d} for the intermediate range (default d)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--out", default=None, help="CSV path (default stdout)")
    p.add_argument("--rejects", default=None, help="rejects log path (default <out>.rejects.csv or stderr)")


def build_parser():
    parser = argparse.ArgumentParser(prog="burgesslab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__} ({BACKEND})")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("charsum", help="short mixed sums |S(f;N,H)| against bounds")
    _common(p)
    p.add_argument("--char-index", type=int, help="character index j (default: random from --seed)")
    p.add_argument("--coeffs", help="comma list f_0,f_1,...; rationals like 1/101 or floats")
    p.add_argument("--mode", choices=("auto", "exact", "float"), default="auto")
    p.add_argument("--H", type=int, nargs="+", help="explicit lengths (overrides --h-exp)")
    p.add_argument("--n-values", type=int, nargs="+")
    p.add_argument("--samples", type=int, help="number of random N in [0, q)")
    p.set_defaults(func=cmd_charsum)

    p = sub.add_parser("jcount", help="J_{r,d}(X) and the main-conjecture ratio")
    _common(p)
    p.add_argument("--x-max", type=int, default=10)
    p.add_argument("--method", choices=("mitm", "both"), default="both")
    p.set_defaults(func=cmd_jcount)

    p = sub.add_parser("bounds", help="bound exponents, values, delta(kappa) and optimal r")
    _common(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("verify", help="run the acceptance criteria")
    _common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("grid", help="check sum_alpha e(...) = Q^D Xi_Q(x) exhaustively")
    _common(p)
    p.add_argument("--Q", type=int)
    p.add_argument("--tau", type=int, help="entries range over [1, tau] (default Q)")
    p.set_defaults(func=cmd_grid)

    p = sub.add_parser("pipeline", help="A(m) moments or S_4 against the proposition shapes")
    _common(p)
    p.add_argument("--what", choices=("moments", "s4"), default="moments")
    p.add_argument("--n-values", type=int, nargs="+")
    p.add_argument("--Q", type=int)
    p.add_argument("--tau", type=int)
    p.add_argument("--char-index", type=int)
    p.set_defaults(func=cmd_pipeline)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    set_threads(args.threads)
    sink = CsvSink(args.out, args.rejects)
    try:
        return args.func(args, sink)
    except (InvalidParams, ValueError, OverflowError) as exc:
        if isinstance(exc, EnumerationGuardError):
            print(f"resource guard: {exc}", file=sys.stderr)
            return EXIT_GUARD
        print(f"invalid parameters: {exc}", file=sys.stderr)
        return EXIT_INVALID
    finally:
        sink.close()


if __name__ == "__main__":
    sys.exit(main())
