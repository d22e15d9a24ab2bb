"""sl_q(2) matrices and their map onto the linear generalized algebra.

With ``r = q**2``, the representation of f(x) = r*x - s with highest weight
``alpha_j`` in dimension 2j+1 is obtained from the sl_q(2) irreducible
representation of spin j by a function of S3 (for J0) and a function of S3
multiplying S+ (for J+).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .charfunc import CharFunc
from .hwsolver import ladder_from_cut, solve_cut_linear
from .repbuilder import UNITARY, build

__all__ = [
    "QDeformParams",
    "gauss_number",
    "bracket_q",
    "build_slq2",
    "map_j0",
    "map_jplus",
    "verify_map",
    "inverse_map",
    "params_from_linear",
]


def gauss_number(m: float, r: float) -> float:
    """[m]_r = (r**m - 1) / (r - 1), equal to m at r = 1."""
    if r == 1.0:
        return float(m)
    return (r ** m - 1.0) / (r - 1.0)


def bracket_q(x: float, q: float) -> float:
    """Symmetric q-number (q**x - q**-x) / (q - 1/q)."""
    if q <= 0 or q == 1.0:
        raise ValueError("q must be positive and different from 1")
    return (q ** x - q ** (-x)) / (q - 1.0 / q)


def _dimension(j) -> int:
    two_j = Fraction(j).limit_denominator(2) * 2
    if two_j.denominator != 1 or two_j < 0 or abs(float(two_j) / 2 - float(j)) > 1e-12:
        raise ValueError(f"j must be a non-negative half-integer, got {j!r}")
    return int(two_j) + 1


@dataclass(frozen=True)
class QDeformParams:
    q: float
    j: float
    s: float
    alpha_j: float

    def __post_init__(self):
        if not (self.q > 0 and self.q != 1.0):
            raise ValueError("q must be positive and different from 1")
        _dimension(self.j)

    @property
    def d(self) -> int:
        return _dimension(self.j)

    @property
    def r(self) -> float:
        return self.q * self.q

    @property
    def Q1(self) -> float:
        return (self.r - 2.0) / (self.r - 1.0)

    @property
    def Q2(self) -> float:
        return (self.r - 1.0) * self.alpha_j - self.s

    @property
    def Q3(self) -> float:
        return self.r / (self.r - 1.0)

    @property
    def f(self) -> CharFunc:
        return CharFunc.linear(self.r, self.s)

    def to_dict(self) -> dict:
        return {"q": self.q, "j": self.j, "s": self.s, "alpha_j": self.alpha_j,
                "r": self.r, "Q1": self.Q1, "Q2": self.Q2, "Q3": self.Q3}


def params_from_linear(f: CharFunc, alpha_j: float, d: int) -> QDeformParams:
    """q = +sqrt(r); only r > 0, r != 1 has an sl_q(2) image."""
    lin = f.as_linear()
    if lin is None:
        raise ValueError("the sl_q(2) map needs a linear characteristic function")
    r, s = lin
    if r <= 0 or r == 1.0:
        raise ValueError(f"r = {r!r} has no sl_q(2) image (need r > 0, r != 1)")
    return QDeformParams(math.sqrt(r), (d - 1) / 2.0, s, alpha_j)


def build_slq2(j: float, q: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """S3, S+, S- of the spin-j irreducible sl_q(2) representation.

    Basis index m = 0..2j carries S3 eigenvalue j - m.
    """
    if q <= 0 or q == 1.0:
        raise ValueError("q must be positive and different from 1")
    d = _dimension(j)
    two_j = d - 1
    q2 = q * q
    pref = q ** (-two_j + 1)
    s3 = np.diag([j - m for m in range(d)]).astype(float)
    splus = np.zeros((d, d))
    for m in range(1, d):
        # |j, j-m> -> |j, j-m+1>
        rad = pref * gauss_number(m, q2) * gauss_number(two_j - m + 1, q2)
        assert rad >= 0, rad
        splus[m - 1, m] = math.sqrt(rad)
    return s3, splus, splus.T.copy()


def map_j0(params: QDeformParams, s3: np.ndarray | None = None) -> np.ndarray:
    """J0 = q**(2(j - S3)) alpha_j - s [j - S3]_{q^2}, applied on the diagonal."""
    if s3 is None:
        s3, _, _ = build_slq2(params.j, params.q)
    m = params.j - np.diag(s3)
    vals = params.r ** m * params.alpha_j - params.s * np.array(
        [gauss_number(k, params.r) for k in m])
    return np.diag(vals)


def _jplus_radicand(params: QDeformParams, m: int, literal: bool) -> float:
    g = gauss_number(m, params.r)
    a, q2 = params.alpha_j, params.Q2
    if literal:
        return (params.Q1 * a - q2 * g) * (params.Q3 * a + 1.0 + q2 * g)
    # (alpha_j - alpha_{j-m}) (alpha_j + alpha_{j-m} + 1), alpha_{j-m} = alpha_j + Q2 [m]
    return (-q2 * g) * (2.0 * a + 1.0 + q2 * g)


def map_jplus(params: QDeformParams, s3: np.ndarray | None = None,
              splus: np.ndarray | None = None, *, literal: bool = False) -> np.ndarray:
    """J+ as a function of S3 times S+.

    The scalar factor is evaluated only where S+ has a non-zero entry; at the
    lowest state its denominator vanishes together with S+.

    ``literal=True`` uses the factored numerator (Q1 a - Q2 [m])(Q3 a + 1 + Q2 [m]),
    which reproduces the ladder coefficients only when q**2 = 2.
    """
    if s3 is None or splus is None:
        s3, splus, _ = build_slq2(params.j, params.q)
    d = params.d
    two_j = d - 1
    out = np.zeros_like(splus)
    for row, col in zip(*np.nonzero(splus)):
        # S+ takes state m = col to S3 = j - m + 1, where j - S3 + 1 = m
        m = int(col)
        num = _jplus_radicand(params, m, literal)
        den = params.q ** (-two_j + 1) * gauss_number(m, params.r) * gauss_number(
            two_j - m + 1, params.r)
        if den == 0:
            raise ZeroDivisionError(f"vanishing denominator at m = {m}")
        if num < 0:
            raise ValueError(
                f"negative radicand {num!r} at m = {m}: no real J+ for these parameters")
        out[row, col] = math.sqrt(num) / math.sqrt(den) * splus[row, col]
    return out


def verify_map(params: QDeformParams, *, literal: bool = False) -> tuple[float, float]:
    """Frobenius residuals of the mapped J0 and J+ against direct construction.

    The direct representation uses the closed-form cut solution for
    f(x) = q**2 x - s in dimension 2j+1, so a wrong ``alpha_j`` shows up as a
    residual.
    """
    s3, splus, _ = build_slq2(params.j, params.q)
    a_true = solve_cut_linear(params.r, params.s, params.d)
    direct = build(ladder_from_cut(params.f, a_true, params.d), UNITARY)
    j0 = map_j0(params, s3)
    jp = map_jplus(params, s3, splus, literal=literal)
    return (float(np.linalg.norm(j0 - direct.j0)),
            float(np.linalg.norm(jp - direct.jplus)))


def inverse_map(params: QDeformParams, j0: np.ndarray,
                jplus: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Recover S3 and S+ from J0 and J+ numerically.

    S3 comes from inverting the diagonal relation for J0 entry by entry; S+
    from dividing J+ by the diagonal factor of the forward map.
    """
    r, s, a = params.r, params.s, params.alpha_j
    base = a * (r - 1.0) - s
    vals = np.diag(j0)
    # alpha_{j-m} (r - 1) - s = r**m (alpha_j (r - 1) - s)
    m = np.log((vals * (r - 1.0) - s) / base) / math.log(r)
    s3 = np.diag(params.j - m)
    s3_ref, splus_ref, _ = build_slq2(params.j, params.q)
    coef = map_jplus(params, s3_ref, np.where(splus_ref != 0, 1.0, 0.0))
    mask = coef != 0
    splus = np.zeros_like(jplus)
    splus[mask] = jplus[mask] / coef[mask]
    return s3, splus
