"""Dynamics of the characteristic function: fixed points, cycles, regimes.

Periodic points of a quadratic f are searched in the conjugate normal form
``y -> y**2 + c`` (``y = t*x + r/2``), where every bounded orbit lives in
``[-beta, beta]`` with ``beta = (1 + sqrt(1 - 4c)) / 2``.  Candidates are
isolated on a Chebyshev-spaced grid, mapped back to x and Newton-polished on
``f^d(x) - x``.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from ._roots import chebyshev_grid, isolate_roots, merge_close, newton_polish
from .charfunc import CharFunc, DivergenceError

__all__ = [
    "CycleReport",
    "DeltaClassification",
    "Region",
    "Segment",
    "MAX_PERIOD",
    "fixed_points",
    "find_cycles",
    "classify_delta",
    "normal_form",
    "allowed_region",
    "cobweb_trace",
    "cobweb_csv",
    "classify_multiplier",
]

MAX_PERIOD = 10           # quadratic f: degree of f^d(x) - x is 2**d
MAX_ROOT_DEGREE = 2 ** MAX_PERIOD
DISTINCT_TOL = 1e-8
MARGINAL_TOL = 1e-8
GRID_PER_ROOT = 256

STABLE = "stable"
UNSTABLE = "unstable"
MARGINAL = "marginal"

NO_FIXED_POINT = "NoFixedPoint"
TANGENT_FIXED_POINT = "TangentFixedPoint"
STABLE_ONE_CYCLE = "StableOneCycle"
STABLE_TWO_CYCLE = "StableTwoCycle"
HIGHER_CYCLES = "HigherCycles"


def classify_multiplier(lam: float, tol: float = MARGINAL_TOL) -> str:
    if abs(abs(lam) - 1.0) < tol:
        return MARGINAL
    return STABLE if abs(lam) < 1.0 else UNSTABLE


@dataclass(frozen=True)
class CycleReport:
    period: int
    points: tuple[float, ...]
    multiplier: float
    stability: str

    @property
    def largest(self) -> float:
        return self.points[0]

    def to_dict(self) -> dict:
        return {
            "period": self.period,
            "points": list(self.points),
            "multiplier": self.multiplier,
            "stability": self.stability,
        }

    @classmethod
    def from_points(cls, f: CharFunc, points) -> "CycleReport":
        """Build a report from an orbit, rotating it to start at its maximum."""
        pts = list(points)
        k = int(np.argmax(pts))
        pts = pts[k:] + pts[:k]
        lam = float(np.prod([f.derivative(p) for p in pts]))
        return cls(len(pts), tuple(pts), lam, classify_multiplier(lam))


@dataclass(frozen=True)
class DeltaClassification:
    delta: float
    delta1: float
    c: float
    regime: str

    def to_dict(self) -> dict:
        return {"delta": self.delta, "delta1": self.delta1, "c": self.c,
                "regime": self.regime}


@dataclass(frozen=True)
class Region:
    """Open interval of admissible highest weights.

    ``lower_bound`` is set when ``low`` comes from a truncated cycle search
    (chaotic parameters) and may therefore be too small.
    """

    low: float
    high: float
    lower_bound: bool = False
    source: str = ""

    def __contains__(self, x: float) -> bool:
        return self.low < x < self.high

    def __iter__(self):
        return iter((self.low, self.high))

    def to_dict(self) -> dict:
        return {"low": self.low, "high": self.high,
                "lower_bound": self.lower_bound, "source": self.source}


# ---------------------------------------------------------------------------
# fixed points and cycles


def fixed_points(f: CharFunc) -> list[CycleReport]:
    """All real solutions of ``f(x) = x``, largest first."""
    if f.degree < 1:
        raise ValueError("fixed points need a polynomial of degree >= 1")
    lin = f.as_linear()
    if lin is not None:
        r, s = lin
        if r == 1.0:
            if s == 0.0:
                raise ValueError("f is the identity: every point is fixed")
            return []
        pts = [s / (r - 1.0)]
    elif (q := f.as_quadratic()) is not None:
        t, r, s = q
        delta = (r - 1.0) ** 2 + 4.0 * t * s
        if delta < 0:
            return []
        sq = math.sqrt(delta)
        pts = sorted({(1.0 - r + sq) / (2 * t), (1.0 - r - sq) / (2 * t)}, reverse=True)
    else:
        c = np.array(f.coeffs)
        c[1] -= 1.0
        raw = np.polynomial.polynomial.polyroots(c)
        g = lambda x: f(x) - x
        dg = lambda x: f.derivative(x) - 1.0
        pts = [newton_polish(g, dg, float(z.real)) for z in raw
               if abs(z.imag) <= 1e-9 * max(1.0, abs(z))]
        pts = sorted(merge_close(pts, DISTINCT_TOL), reverse=True)
    return [CycleReport.from_points(f, [p]) for p in pts]


def _escape_radius(f: CharFunc) -> float:
    # |x| > R  =>  |f(x)| > |x|, so all periodic points lie in [-R, R]
    c = f.coeffs
    lead = abs(c[-1])
    return max(1.0, (1.0 + sum(abs(a) for a in c[:-1])) / lead)


def _periodic_candidates_quadratic(f: CharFunc, d: int) -> list[float]:
    t, r, s = f.as_quadratic()
    c = r / 2.0 - r * r / 4.0 - t * s
    if c > 0.25:
        return []
    beta = 0.5 * (1.0 + math.sqrt(1.0 - 4.0 * c))
    nf = CharFunc.polynomial([c, 0.0, 1.0])

    def g(y):
        return nf.power(y, d) - y

    def dg(y):
        return nf.power_with_derivative(y, d)[1] - 1.0

    grid = chebyshev_grid(-beta, beta, GRID_PER_ROOT * 2 ** d)
    ys = isolate_roots(g, dg, grid, merge_tol=1e-10)
    return [(y - r / 2.0) / t for y in ys]


def _periodic_candidates_generic(f: CharFunc, d: int) -> list[float]:
    R = _escape_radius(f)

    def g(x):
        return f.power(x, d) - x

    def dg(x):
        return f.power_with_derivative(x, d)[1] - 1.0

    grid = chebyshev_grid(-R, R, GRID_PER_ROOT * f.degree ** d)
    return isolate_roots(g, dg, grid, merge_tol=1e-10)


def _prime_period(f: CharFunc, x: float, d: int, tol: float = DISTINCT_TOL) -> int:
    y = x
    for k in range(1, d + 1):
        y = float(f(y))
        if abs(y - x) <= tol * max(1.0, abs(x)):
            return k
    return 0


def find_cycles(f: CharFunc, d: int) -> list[CycleReport]:
    """All real cycles of exact period ``d``, each listed once.

    Cycles are ordered by their largest point, descending; each cycle's
    points start at its largest element and follow the orbit.
    """
    if d < 1:
        raise ValueError("period must be positive")
    if d == 1:
        return fixed_points(f)
    if f.degree < 1:
        raise ValueError("cycles need a polynomial of degree >= 1")
    lin = f.as_linear()
    if lin is not None:
        r, s = lin
        if r == -1.0 and d == 2:
            raise ValueError(
                "f(x) = -x - s has a continuum of marginal 2-cycles; "
                "use hwsolver.marginal_two_cycle"
            )
        return []
    if f.degree ** d > MAX_ROOT_DEGREE:
        raise ValueError(
            f"period {d} exceeds the cap (degree of f^d(x) - x would be {f.degree ** d})"
        )

    if f.as_quadratic() is not None:
        candidates = _periodic_candidates_quadratic(f, d)
    else:
        candidates = _periodic_candidates_generic(f, d)

    def g(x):
        return f.power(x, d) - x

    def dg(x):
        return f.power_with_derivative(x, d)[1] - 1.0

    roots = []
    for x in candidates:
        x = newton_polish(g, dg, x)
        if abs(g(x)) <= 1e-9 * max(1.0, abs(x)) and _prime_period(f, x, d) == d:
            roots.append(x)
    roots = merge_close(roots, DISTINCT_TOL)

    cycles: list[CycleReport] = []
    used = [False] * len(roots)
    for i in sorted(range(len(roots)), key=lambda k: -roots[k]):
        if used[i]:
            continue
        orbit = [roots[i]]
        used[i] = True
        y = roots[i]
        for _ in range(d - 1):
            y = float(f(y))
            # prefer the independently polished root for this orbit point
            j = min(range(len(roots)), key=lambda k: abs(roots[k] - y))
            if abs(roots[j] - y) <= 1e-6 * max(1.0, abs(y)):
                used[j] = True
                y = roots[j]
            orbit.append(y)
        cycles.append(CycleReport.from_points(f, orbit))
    cycles.sort(key=lambda cyc: -cyc.largest)
    return cycles


# ---------------------------------------------------------------------------
# quadratic regime analysis


def _require_quadratic(f: CharFunc, positive_t: bool = True) -> tuple[float, float, float]:
    q = f.as_quadratic()
    if q is None:
        raise ValueError("a quadratic characteristic function is required")
    if positive_t and q[0] <= 0:
        raise ValueError("region formulas assume t > 0")
    return q


def normal_form(f: CharFunc) -> float:
    """Parameter c of the conjugate map y**2 + c, with y = t*x + r/2."""
    t, r, s = _require_quadratic(f, positive_t=False)
    return r / 2.0 - r * r / 4.0 - t * s


def classify_delta(f: CharFunc, tol: float = 1e-12) -> DeltaClassification:
    t, r, s = _require_quadratic(f)
    delta = (r - 1.0) ** 2 + 4.0 * t * s
    delta1 = -3.0 - 2.0 * r + r * r + 4.0 * t * s
    if abs(delta) <= tol:
        regime = TANGENT_FIXED_POINT
    elif delta < 0:
        regime = NO_FIXED_POINT
    elif delta <= 4.0:
        regime = STABLE_ONE_CYCLE
    elif delta <= 6.0:
        regime = STABLE_TWO_CYCLE
    else:
        regime = HIGHER_CYCLES
    return DeltaClassification(delta, delta1, (1.0 - delta) / 4.0, regime)


def fixed_point_pair(f: CharFunc) -> tuple[float, float] | None:
    """(alpha_-, alpha_+) for quadratic f with t > 0, or None when Delta < 0."""
    t, r, _ = _require_quadratic(f)
    delta = classify_delta(f).delta
    if delta < 0:
        return None
    sq = math.sqrt(max(delta, 0.0))
    return (1.0 - r - sq) / (2 * t), (1.0 - r + sq) / (2 * t)


def two_cycle_pair(f: CharFunc) -> tuple[float, float] | None:
    """(beta_-, beta_+), the 2-cycle of quadratic f, or None when Delta1 < 0."""
    t, r, _ = _require_quadratic(f)
    delta1 = classify_delta(f).delta1
    if delta1 < 0:
        return None
    sq = math.sqrt(delta1)
    return (-1.0 - r - sq) / (2 * t), (-1.0 - r + sq) / (2 * t)


def allowed_region(f: CharFunc, max_period: int = 8) -> Region | None:
    """Interval of the real axis where highest weights may be sought.

    Returns None when Delta <= 0.  For Delta > 6 the lower end is the largest
    point of the stable cycle of highest period found up to ``max_period``.
    """
    info = classify_delta(f)
    if info.regime in (NO_FIXED_POINT, TANGENT_FIXED_POINT):
        return None
    a_minus, a_plus = fixed_point_pair(f)
    if info.regime == STABLE_ONE_CYCLE:
        return Region(a_minus, a_plus, source="fixed points")
    b_minus, b_plus = two_cycle_pair(f)
    if info.regime == STABLE_TWO_CYCLE:
        return Region(b_plus, a_plus, source="2-cycle")
    best = None
    for d in range(2, max_period + 1):
        for cyc in find_cycles(f, d):
            if cyc.stability == STABLE:
                if best is None or cyc.period > best.period:
                    best = cyc
    if best is None:
        return Region(b_plus, a_plus, lower_bound=True, source="2-cycle (no stable cycle found)")
    return Region(best.largest, a_plus, lower_bound=True, source=f"{best.period}-cycle")


# ---------------------------------------------------------------------------
# cobweb


@dataclass(frozen=True)
class Segment:
    step: int
    kind: str  # "V" (to the graph of f) or "H" (to the diagonal)
    start: tuple[float, float]
    end: tuple[float, float]


def cobweb_trace(f: CharFunc, x0: float, steps: int) -> list[Segment]:
    if steps < 0:
        raise ValueError("steps must be non-negative")
    xs = f.iterate(x0, steps)
    segs: list[Segment] = []
    for k in range(steps):
        x, fx = xs[k], xs[k + 1]
        segs.append(Segment(k, "V", (x, x), (x, fx)))
        segs.append(Segment(k, "H", (x, fx), (fx, fx)))
    return segs


def cobweb_csv(f: CharFunc, starts, steps: int) -> str:
    """CSV with header ``x0,step,x,y,kind``; one row per segment end point.

    Every path begins at ``(x0, x0)``.  Orbits that escape are truncated at
    the last finite step.
    """
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x0", "step", "x", "y", "kind"])
    for x0 in starts:
        try:
            segs = cobweb_trace(f, x0, steps)
        except DivergenceError as err:
            segs = cobweb_trace(f, x0, err.index - 1)
        for seg in segs:
            w.writerow([repr(float(x0)), seg.step, repr(seg.end[0]), repr(seg.end[1]), seg.kind])
    return buf.getvalue()
