"""Real root isolation for functions that can be evaluated on arrays.

Roots are bracketed by sign changes on a sampling grid, refined with
``scipy.optimize.brentq`` and polished with Newton steps.  Grid minima of
``|g|`` without a sign change are also tried, to catch tangential (double)
roots.
"""
from __future__ import annotations

import math
from typing import Callable

import numpy as np
from scipy.optimize import brentq

ROOT_RESIDUAL = 1e-12


class RootIsolationError(RuntimeError):
    pass


def chebyshev_grid(lo: float, hi: float, n: int) -> np.ndarray:
    """n+1 nodes clustered towards both ends of [lo, hi], ascending."""
    theta = np.linspace(np.pi, 0.0, n + 1)
    return 0.5 * (lo + hi) + 0.5 * (hi - lo) * np.cos(theta)


def newton_polish(g, dg, x: float, steps: int = 8) -> float:
    for _ in range(steps):
        gx, dx = float(g(x)), float(dg(x))
        if not math.isfinite(gx) or not math.isfinite(dx) or dx == 0.0:
            break
        x_new = x - gx / dx
        if not math.isfinite(x_new):
            break
        if abs(g(x_new)) > abs(gx):
            break
        x = x_new
        if gx == 0.0:
            break
    return x


def isolate_roots(
    g: Callable[[np.ndarray], np.ndarray],
    dg: Callable[[np.ndarray], np.ndarray],
    grid: np.ndarray,
    *,
    merge_tol: float = 1e-7,
    tangent_tol: float = 1e-9,
    tangent_prefilter: float = 1e-3,
) -> list[float]:
    """Return sorted roots of g inside ``[grid[0], grid[-1]]``.

    ``g`` and ``dg`` must accept both arrays and scalars.  Samples where g is
    not finite are treated as unknown and never bracket a root.
    """
    with np.errstate(over="ignore", invalid="ignore"):
        vals = np.asarray(g(grid), dtype=float)
    finite = np.isfinite(vals)
    roots: list[float] = []

    exact = np.flatnonzero(finite & (vals == 0.0))
    roots.extend(float(grid[i]) for i in exact)

    sv = np.sign(vals)
    pair_ok = finite[:-1] & finite[1:]
    brackets = np.flatnonzero(pair_ok & (sv[:-1] * sv[1:] < 0))
    for i in brackets:
        a, b = float(grid[i]), float(grid[i + 1])
        try:
            x = brentq(lambda z: float(g(z)), a, b, xtol=1e-15, rtol=1e-15, maxiter=200)
        except (ValueError, RuntimeError) as exc:
            raise RootIsolationError(
                f"bisection failed on bracket [{a!r}, {b!r}] "
                f"(g = {vals[i]!r}, {vals[i + 1]!r}): {exc}"
            ) from exc
        roots.append(newton_polish(g, dg, x))

    # tangential roots: local minima of |g| that do not change sign
    av = np.where(finite, np.abs(vals), np.inf)
    if len(av) >= 3:
        inner = np.flatnonzero(
            (av[1:-1] <= av[:-2]) & (av[1:-1] <= av[2:]) & np.isfinite(av[1:-1])
        ) + 1
        for i in inner:
            if sv[i - 1] * sv[i + 1] <= 0 or av[i] > tangent_prefilter:
                continue
            x = _minimize_abs(g, float(grid[i - 1]), float(grid[i + 1]))
            if abs(float(g(x))) < tangent_tol:
                roots.append(x)

    return merge_close(roots, merge_tol)


def _minimize_abs(g, a: float, b: float, iters: int = 100) -> float:
    # golden-section search for min |g| on [a, b]
    invphi = (math.sqrt(5) - 1) / 2
    c, d = b - invphi * (b - a), a + invphi * (b - a)
    for _ in range(iters):
        if abs(g(c)) < abs(g(d)):
            b = d
        else:
            a = c
        c, d = b - invphi * (b - a), a + invphi * (b - a)
        if b - a < 1e-15 * max(1.0, abs(a)):
            break
    return 0.5 * (a + b)


def merge_close(values: list[float], tol: float) -> list[float]:
    out: list[float] = []
    for v in sorted(values):
        if out and abs(v - out[-1]) <= tol * max(1.0, abs(v)):
            continue
        out.append(v)
    return out
