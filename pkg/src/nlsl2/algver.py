"""Residual checks of the algebra relations on concrete matrices.

Every residual is a Frobenius norm divided by the matrix dimension.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from .charfunc import CharFunc
from .repbuilder import ALGEBRAIC, Representation, casimir, f_of_j0

__all__ = [
    "RelationReport",
    "default_tol",
    "check_relations",
    "check_rdeformed_form",
    "check_quadratic_form",
    "check_case1_transform",
    "commutator",
    "qcommutator",
]

DEFAULT_TOL = 1e-8


def default_tol() -> float:
    """Pass threshold, overridable through the NLSL2_TOL environment variable."""
    raw = os.environ.get("NLSL2_TOL")
    return float(raw) if raw else DEFAULT_TOL


def commutator(a, b):
    return a @ b - b @ a


def qcommutator(a, b, r):
    """[A, B]_r = AB - r BA"""
    return a @ b - r * (b @ a)


def _res(m: np.ndarray) -> float:
    return float(np.linalg.norm(m) / max(m.shape[0], 1))


@dataclass
class RelationReport:
    residuals: dict[str, float]
    tol: float
    informational: set[str] = field(default_factory=set)

    @property
    def passed(self) -> dict[str, bool]:
        return {k: v < self.tol for k, v in self.residuals.items()}

    @property
    def ok(self) -> bool:
        return all(p for k, p in self.passed.items() if k not in self.informational)

    def failures(self) -> list[str]:
        return [k for k, p in self.passed.items() if not p and k not in self.informational]

    def to_dict(self) -> dict:
        passed = self.passed
        return {
            "tol": self.tol,
            "ok": self.ok,
            "relations": {
                k: {"residual": v, "pass": passed[k], "required": k not in self.informational}
                for k, v in self.residuals.items()
            },
        }


def check_relations(rep: Representation, f: CharFunc | None = None,
                    tol: float | None = None) -> RelationReport:
    f = rep.f if f is None else f
    tol = default_tol() if tol is None else tol
    d = rep.d
    j0, jp, jm = rep.j0, rep.jplus, rep.jminus
    if not (j0.shape == jp.shape == jm.shape == (d, d)):
        raise ValueError("generator shapes do not match the representation dimension")
    eye = np.eye(d)
    fj = f_of_j0(j0, f)
    c = casimir(rep, f)
    e0 = eye[:, 0]
    a = rep.alpha_j

    res = {
        "R1": _res(j0 @ jm - jm @ fj),
        "R2": _res(jp @ j0 - fj @ jp),
        "R3": _res(commutator(jp, jm) - (j0 @ (j0 + eye) - fj @ (fj + eye))),
        "Jacobi": _res(
            commutator(j0, commutator(jp, jm))
            + commutator(jm, commutator(j0, jp))
            + commutator(jp, commutator(jm, j0))
        ),
        "J0_JplusJminus": _res(commutator(j0, jp @ jm)),
        "CasimirJ0": _res(commutator(c, j0)),
        "CasimirJplus": _res(commutator(c, jp)),
        "CasimirJminus": _res(commutator(c, jm)),
        "CasimirValue": _res(c - a * (a + 1.0) * eye),
        "HighestWeight": float(np.linalg.norm(jp @ e0)),
        "Hermiticity": _res(jm - jp.T),
    }
    info = {"Hermiticity"} if rep.mode == ALGEBRAIC else set()
    return RelationReport(res, tol, info)


def _same_function(f: CharFunc, coeffs) -> bool:
    c = list(coeffs)
    while len(c) > 1 and c[-1] == 0.0:
        c.pop()
    return len(c) == len(f.coeffs) and np.allclose(c, f.coeffs, rtol=1e-12, atol=1e-14)


def check_rdeformed_form(rep: Representation, r: float, s: float) -> tuple[float, float, float]:
    """Residuals of the r-deformed commutators for f(x) = r*x - s."""
    if not _same_function(rep.f, (-s, r)):
        raise ValueError(f"representation was not built from f(x) = {r}x - {s}")
    if r == 0:
        raise ValueError("r = 0 has no inverse deformation")
    j0, jp, jm = rep.j0, rep.jplus, rep.jminus
    eye = np.eye(rep.d)
    r_minus = _res(qcommutator(j0, jm, r) + s * jm)
    r_plus = _res(qcommutator(j0, jp, 1.0 / r) - (s / r) * jp)
    poly = (1 - r * r) * (j0 @ j0) + (1 + 2 * r * s - r) * j0 + s * (1 - s) * eye
    r_comm = _res(commutator(jp, jm) - poly)
    return r_minus, r_plus, r_comm


def check_quadratic_form(rep: Representation, t: float, r: float,
                         s: float) -> tuple[float, float, float]:
    """Residuals of the deformed commutators for f(x) = t*x**2 + r*x - s."""
    if not _same_function(rep.f, (-s, r, t)):
        raise ValueError(f"representation was not built from f(x) = {t}x^2 + {r}x - {s}")
    if r == 0:
        raise ValueError("r = 0 has no inverse deformation")
    j0, jp, jm = rep.j0, rep.jplus, rep.jminus
    eye = np.eye(rep.d)
    j2 = j0 @ j0
    shift = t * j2 - s * eye
    r_plus = _res(qcommutator(j0, jp, 1.0 / r) + (1.0 / r) * shift @ jp)
    r_minus = _res(qcommutator(j0, jm, r) - jm @ shift)
    poly = (
        -t * t * (j2 @ j2)
        - 2 * t * r * (j2 @ j0)
        + (1 - (1 - s) * t - r * r + s * t) * j2
        + (1 - r * (1 - 2 * s)) * j0
        + s * (1 - s) * eye
    )
    r_comm = _res(commutator(jp, jm) - poly)
    return r_plus, r_minus, r_comm


def check_case1_transform(rep: Representation, s: float) -> tuple[float, float, float]:
    """Rescale a representation of f(x) = x - s to ordinary sl(2) and check it.

    Returns the residuals of [K0, K+] = K+, [K0, K-] = -K- and [K+, K-] = 2 K0
    for K± = J±/s and K0 = J0/s + (1 - s)/(2s).
    """
    if not _same_function(rep.f, (-s, 1.0)):
        raise ValueError("the sl(2) rescaling only applies to f(x) = x - s")
    if s <= 0:
        raise ValueError("s must be positive")
    eye = np.eye(rep.d)
    kp, km = rep.jplus / s, rep.jminus / s
    k0 = rep.j0 / s + (1 - s) / (2 * s) * eye
    return (
        _res(commutator(k0, kp) - kp),
        _res(commutator(k0, km) + km),
        _res(commutator(kp, km) - 2 * k0),
    )
