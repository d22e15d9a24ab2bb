import numpy as np
import pytest

from nlsl2 import CharFunc

# criterion id -> (passed, detail), filled by test_acceptance
ACCEPTANCE_RESULTS = {}


def compose_poly(outer, inner):
    """Coefficients (ascending) of outer(inner(x)), both given ascending."""
    P = np.polynomial.Polynomial
    res = P([0.0])
    inner_p = P(inner)
    for k, c in enumerate(outer):
        res = res + c * inner_p ** k
    return res.coef


def iterate_poly(coeffs, d):
    out = np.array(coeffs, dtype=float)
    for _ in range(d - 1):
        out = compose_poly(coeffs, out)
    return out


def real_roots_companion(coeffs, imag_tol=1e-7):
    roots = np.polynomial.polynomial.polyroots(coeffs)
    return sorted(float(z.real) for z in roots if abs(z.imag) < imag_tol)


@pytest.fixture
def sl2():
    return CharFunc.sl2()


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS, key=lambda k: int(k)):
        ok, detail = ACCEPTANCE_RESULTS[key]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {key}: {detail}")
