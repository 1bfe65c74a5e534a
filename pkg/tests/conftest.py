import cmath
import math
from fractions import Fraction

import pytest

from burgesslab.modular import char_eval, prime_modulus


def direct_mixed_sum(chi, coeffs, N, H, shift=0):
    """Plain-Python oracle: exact Fraction phases, one char_eval per term."""
    total = 0j
    for n in range(N + 1, math.floor(N + H) + 1):
        phase = sum(Fraction(c) * n**k for k, c in enumerate(coeffs))
        phase -= math.floor(phase)
        total += cmath.exp(2j * math.pi * float(phase)) * char_eval(chi, n + shift)
    return total


@pytest.fixture(scope="session")
def mod7():
    return prime_modulus(7)


@pytest.fixture(scope="session")
def mod101():
    return prime_modulus(101)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    lines = getattr(mod, "ACCEPTANCE_LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
