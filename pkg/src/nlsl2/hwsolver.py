"""Highest weights and weight ladders.

A d-dimensional representation needs ``N_{d-1} = 0``, which happens either
through the cut condition ``a + f^d(a) + 1 = 0`` or through a d-cycle
``f^d(a) = a``.  This module finds such highest weights and builds the
corresponding ladders of J0 eigenvalues and squared ladder coefficients.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import dynsys
from ._roots import isolate_roots, newton_polish
from .charfunc import CharFunc, DivergenceError

__all__ = [
    "WeightLadder",
    "CutSolution",
    "StartClass",
    "solve_cut_linear_r1",
    "solve_cut_linear",
    "solve_cut_general",
    "default_interval",
    "ladder_from_cut",
    "ladder_from_cycle",
    "marginal_two_cycle",
    "classify_start",
]

CUT = "cut"
CYCLE = "cycle"
CUT_TOL = 1e-8
UNITARY_TOL = 1e-12
MERGE_TOL = 1e-7
SCAN_INTERVALS = 1024
DEFAULT_UPPER = 1e3


def _nsq(alphas, f: CharFunc) -> list[float]:
    a0 = alphas[0]
    ext = list(alphas[1:]) + [float(f(alphas[-1]))]
    return [a0 * (a0 + 1.0) - b * (b + 1.0) for b in ext]


@dataclass(frozen=True)
class WeightLadder:
    f: CharFunc
    d: int
    alphas: tuple[float, ...]
    nsq: tuple[float, ...]
    termination: str
    residual: float

    @property
    def alpha_j(self) -> float:
        return self.alphas[0]

    @property
    def lowest(self) -> float:
        return self.alphas[-1]

    @property
    def unitary(self) -> bool:
        return all(v >= -UNITARY_TOL for v in self.nsq[:-1])

    def first_negative(self) -> Optional[int]:
        for m, v in enumerate(self.nsq[:-1]):
            if v < -UNITARY_TOL:
                return m
        return None

    def to_dict(self) -> dict:
        return {
            "f": self.f.to_dict(),
            "alpha_j": self.alpha_j,
            "d": self.d,
            "alphas": list(self.alphas),
            "nsq": list(self.nsq),
            "termination": self.termination,
            "unitary": self.unitary,
            "residual": self.residual,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "WeightLadder":
        f = CharFunc.from_dict(data["f"])
        if data["termination"] == CUT:
            return ladder_from_cut(f, data["alpha_j"], data["d"])
        cyc = dynsys.CycleReport.from_points(f, data["alphas"])
        return ladder_from_cycle(cyc, f)


@dataclass(frozen=True)
class CutSolution:
    alpha_j: float
    d: int
    residual: float
    unitary: bool
    within_region: Optional[bool]

    def to_dict(self) -> dict:
        return {
            "alpha_j": self.alpha_j,
            "d": self.d,
            "residual": self.residual,
            "unitary": self.unitary,
            "within_region": self.within_region,
        }


# ---------------------------------------------------------------------------
# closed forms for linear f


def solve_cut_linear_r1(s: float, d: int) -> float:
    """Highest weight of the d-dimensional ladder for f(x) = x - s."""
    if s <= 0:
        raise ValueError("f(x) = x - s needs s > 0 for a descending ladder")
    if d < 1:
        raise ValueError("dimension must be positive")
    return (s * d - 1.0) / 2.0


def solve_cut_linear(r: float, s: float, d: int) -> float:
    """Highest weight of the d-dimensional ladder for f(x) = r*x - s, r > 0."""
    if d < 1:
        raise ValueError("dimension must be positive")
    if r == 1.0:
        return solve_cut_linear_r1(s, d)
    if r == -1.0:
        raise ValueError(
            "r = -1 has no cut solution; its 2-dimensional representations "
            "come from marginal 2-cycles (see marginal_two_cycle)"
        )
    if r <= 0:
        raise ValueError("r <= 0 admits no highest-weight representation")
    from .qmap import gauss_number

    return (s * gauss_number(d, r) - 1.0) / (r ** d + 1.0)


def marginal_two_cycle(s: float, alpha_j: float) -> dynsys.CycleReport:
    """The 2-cycle (alpha_j, -alpha_j - s) of f(x) = -x - s.

    Every point except the fixed point -s/2 has period 2; the highest weight
    must lie above it.
    """
    if not alpha_j > -s / 2.0:
        raise ValueError(f"highest weight must exceed the fixed point {-s / 2.0!r}")
    f = CharFunc.linear(-1.0, s)
    return dynsys.CycleReport.from_points(f, [alpha_j, -alpha_j - s])


# ---------------------------------------------------------------------------
# general cut condition


def default_interval(f: CharFunc) -> tuple[float, float]:
    q = f.as_quadratic()
    if q is not None and q[0] > 0:
        region = dynsys.allowed_region(f)
        if region is not None:
            return region.low, region.high
    return -0.5, DEFAULT_UPPER


def _cut_residual(f: CharFunc, alpha: float, d: int) -> float:
    return abs(alpha + float(f.power(alpha, d)) + 1.0)


def solve_cut_general(
    f: CharFunc, d: int, interval: tuple[float, float] | None = None
) -> list[CutSolution]:
    """All roots of ``a + f^d(a) + 1`` in ``interval`` with ``a > -1/2``.

    Roots are sorted ascending.  Candidates that fail the -1/2 bound, whose
    residual exceeds CUT_TOL, or whose ladder already stops below dimension d
    (some interior ``N_m**2`` vanishes) are dropped.
    """
    if d < 1:
        raise ValueError("dimension must be positive")
    if interval is None:
        interval = default_interval(f)
    lo, hi = float(interval[0]), float(interval[1])
    if not lo < hi:
        raise ValueError(f"empty interval ({lo!r}, {hi!r})")
    lo = max(lo, -0.5)
    if not lo < hi:
        return []

    def g(a):
        return a + f.power(a, d) + 1.0

    def dg(a):
        return 1.0 + f.power_with_derivative(a, d)[1]

    n = SCAN_INTERVALS * max(1, min(f.degree ** d, 1024))
    grid = np.linspace(lo, hi, n + 1)
    roots = isolate_roots(g, dg, grid, merge_tol=MERGE_TOL)

    region = None
    q = f.as_quadratic()
    if q is not None and q[0] > 0:
        region = dynsys.allowed_region(f)

    out = []
    for a in roots:
        if not (lo < a < hi) or not a > -0.5:
            continue
        res = _cut_residual(f, a, d)
        if not res < CUT_TOL:
            continue
        ladder = ladder_from_cut(f, a, d)
        if _stops_early(f, a, ladder):
            continue
        within = None if region is None else (a in region)
        out.append(CutSolution(a, d, res, ladder.unitary, within))
    return out


def _stops_early(f: CharFunc, a: float, ladder: WeightLadder, near: float = 1e-4,
                 common: float = 1e-12) -> bool:
    # A root sitting on (or, for multiple roots, numerically next to) a cut
    # solution b of lower dimension m+1 has N_m = 0 and is not d-dimensional.
    # b must then also solve the d-dimensional condition; a small N_m alone is
    # not enough, since for strongly contracting f the iterates crowd together.
    d = ladder.d
    scale = max(1.0, abs(a * (a + 1.0)))
    for m, v in enumerate(ladder.nsq[:-1]):
        if abs(v) < near * scale:
            k = m + 1
            b = newton_polish(lambda x: x + f.power(x, k) + 1.0,
                              lambda x: 1.0 + f.power_with_derivative(x, k)[1], a, steps=60)
            if (abs(b - a) < near and _cut_residual(f, b, k) < common * scale
                    and _cut_residual(f, b, d) < common * scale):
                return True
    return False


# ---------------------------------------------------------------------------
# ladders


def ladder_from_cut(f: CharFunc, alpha_j: float, d: int) -> WeightLadder:
    if d < 1:
        raise ValueError("dimension must be positive")
    if not alpha_j > -0.5:
        raise ValueError(f"cut-condition highest weight must exceed -1/2, got {alpha_j!r}")
    seq = f.iterate(alpha_j, d)
    res = abs(seq[0] + seq[d] + 1.0)
    if not res < CUT_TOL:
        raise ValueError(
            f"alpha_j = {alpha_j!r} does not satisfy the cut condition for d = {d} "
            f"(residual {res:.3g})"
        )
    alphas = tuple(seq[:d])
    return WeightLadder(f, d, alphas, tuple(_nsq(alphas, f)), CUT, res)


def ladder_from_cycle(cycle: dynsys.CycleReport, f: CharFunc) -> WeightLadder:
    pts = list(cycle.points)
    k = int(np.argmax(pts))
    alphas = tuple(pts[k:] + pts[:k])
    for m in range(len(alphas)):
        nxt = alphas[(m + 1) % len(alphas)]
        if abs(float(f(alphas[m])) - nxt) > 1e-8 * max(1.0, abs(nxt)):
            raise ValueError("cycle points are not an orbit of f")
    res = abs(float(f.power(alphas[0], len(alphas))) - alphas[0])
    return WeightLadder(f, len(alphas), alphas, tuple(_nsq(alphas, f)), CYCLE, res)


# ---------------------------------------------------------------------------
# classification of starting points


@dataclass(frozen=True)
class StartClass:
    kind: str  # FiniteCut | FiniteCycle | InfiniteDescending | NoLadder
    d: Optional[int] = None
    note: str = ""

    def to_dict(self) -> dict:
        return {"kind": self.kind, "d": self.d, "note": self.note}


def classify_start(f: CharFunc, alpha0: float, max_iter: int = 1000,
                   tol: float = CUT_TOL) -> StartClass:
    """Decide what kind of ladder starts at ``alpha0``."""
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    try:
        seq = f.iterate(alpha0, max_iter)
        note = ""
    except DivergenceError as err:
        seq = f.iterate(alpha0, err.index - 1)
        note = f"orbit escaped at iterate {err.index}"
    scale = max(1.0, abs(alpha0))
    if alpha0 > -0.5:
        for k in range(1, len(seq)):
            if abs(alpha0 + seq[k] + 1.0) <= tol * scale:
                return StartClass("FiniteCut", k)
    for k in range(1, len(seq)):
        if abs(seq[k] - alpha0) <= tol * scale:
            return StartClass("FiniteCycle", k)
    # non-increasing also covers orbits that settle onto an attracting point
    if all(b <= a for a, b in zip(seq, seq[1:])) and len(seq) > 1 and seq[1] < seq[0]:
        if not note and seq[-1] == seq[-2]:
            note = f"converges to {seq[-1]!r}"
        return StartClass("InfiniteDescending", None, note)
    return StartClass("NoLadder", None, note or "iterates are not decreasing")
