"""Explicit d x d matrices for a weight ladder.

Basis vector m (m = 0..d-1) is the state with J0 eigenvalue ``alphas[m]``;
m = 0 is the highest weight.  J- maps m to m+1, J+ maps m+1 back to m.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .charfunc import CharFunc
from .hwsolver import WeightLadder

__all__ = ["Representation", "build", "casimir", "f_of_j0", "UNITARY", "ALGEBRAIC"]

UNITARY = "unitary"
ALGEBRAIC = "algebraic"


@dataclass(frozen=True, eq=False)
class Representation:
    f: CharFunc
    d: int
    mode: str
    j0: np.ndarray
    jplus: np.ndarray
    jminus: np.ndarray
    casimir: np.ndarray

    @property
    def alpha_j(self) -> float:
        return float(self.j0[0, 0])

    @property
    def alphas(self) -> np.ndarray:
        return np.diag(self.j0).copy()

    @property
    def hermitian_pair(self) -> bool:
        return bool(np.array_equal(self.jminus, self.jplus.T))

    def to_dict(self) -> dict:
        return {
            "f": self.f.to_dict(),
            "d": self.d,
            "mode": self.mode,
            "j0": self.j0.tolist(),
            "jplus": self.jplus.tolist(),
            "jminus": self.jminus.tolist(),
            "casimir": self.casimir.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Representation":
        f = CharFunc.from_dict(data["f"])
        mats = {k: np.array(data[k], dtype=float).reshape(data["d"], data["d"])
                for k in ("j0", "jplus", "jminus")}
        rep = cls(f, int(data["d"]), data.get("mode", UNITARY),
                  mats["j0"], mats["jplus"], mats["jminus"], np.zeros((data["d"],) * 2))
        return cls(rep.f, rep.d, rep.mode, rep.j0, rep.jplus, rep.jminus, casimir(rep, f))

    def dump(self, precision: int = 6) -> str:
        """Aligned plain-text listing of the four matrices."""
        out = []
        for name in ("j0", "jplus", "jminus", "casimir"):
            out.append(f"{name} =")
            out.append(np.array2string(getattr(self, name), precision=precision,
                                       suppress_small=True, max_line_width=200))
        return "\n".join(out)


def f_of_j0(j0: np.ndarray, f: CharFunc) -> np.ndarray:
    # J0 is diagonal, so f(J0) acts entrywise on its diagonal
    return np.diag(f(np.diag(j0)))


def casimir(rep: Representation, f: CharFunc) -> np.ndarray:
    j0, jp, jm = rep.j0, rep.jplus, rep.jminus
    if not (j0.shape == jp.shape == jm.shape == (rep.d, rep.d)):
        raise ValueError("generator shapes do not match the representation dimension")
    fj = f_of_j0(j0, f)
    eye = np.eye(rep.d)
    return 0.5 * (jp @ jm + jm @ jp + j0 @ (j0 + eye) + fj @ (fj + eye))


def build(ladder: WeightLadder, mode: str = UNITARY) -> Representation:
    d = ladder.d
    j0 = np.diag(np.array(ladder.alphas, dtype=float))
    jminus = np.zeros((d, d))
    jplus = np.zeros((d, d))
    if mode == UNITARY:
        m_bad = ladder.first_negative()
        if m_bad is not None:
            raise ValueError(
                f"ladder is not unitary: N_{m_bad}^2 = {ladder.nsq[m_bad]!r} < 0; "
                "use the algebraic mode"
            )
        for m in range(d - 1):
            jminus[m + 1, m] = math.sqrt(max(ladder.nsq[m], 0.0))
        jplus = jminus.T.copy()
    elif mode == ALGEBRAIC:
        for m in range(d - 1):
            jminus[m + 1, m] = ladder.nsq[m]
            jplus[m, m + 1] = 1.0
    else:
        raise ValueError(f"unknown mode {mode!r}")
    rep = Representation(ladder.f, d, mode, j0, jplus, jminus, np.zeros((d, d)))
    return Representation(ladder.f, d, mode, j0, jplus, jminus, casimir(rep, ladder.f))
