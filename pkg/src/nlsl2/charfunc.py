"""Characteristic functions f(x) of the generalized sl(2) algebra.

Three families are supported: linear ``f(x) = r*x - s``, quadratic
``f(x) = t*x**2 + r*x - s`` and a general real polynomial given by its
coefficients in ascending degree.  Instances are immutable.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

__all__ = ["CharFunc", "DivergenceError", "ESCAPE_BOUND"]

ESCAPE_BOUND = 1e12

LINEAR = "linear"
QUADRATIC = "quadratic"
POLYNOMIAL = "polynomial"
KINDS = (LINEAR, QUADRATIC, POLYNOMIAL)


class DivergenceError(ArithmeticError):
    """Raised when an orbit leaves ``|x| <= ESCAPE_BOUND``.

    ``index`` is the iteration count k at which ``|f^k(x0)|`` first exceeded
    the bound (or became non-finite).
    """

    def __init__(self, index: int, value: float):
        super().__init__(f"iterate {index} diverged (value {value!r})")
        self.index = index
        self.value = value


@dataclass(frozen=True)
class CharFunc:
    kind: str
    r: float = 0.0
    s: float = 0.0
    t: float = 0.0
    coeffs: tuple[float, ...] = field(default=())

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}")
        if self.kind == LINEAR:
            c = (-float(self.s), float(self.r))
        elif self.kind == QUADRATIC:
            if self.t == 0:
                raise ValueError("quadratic characteristic function needs t != 0")
            c = (-float(self.s), float(self.r), float(self.t))
        else:
            c = [float(v) for v in self.coeffs]
            while len(c) > 1 and c[-1] == 0.0:
                c.pop()
            if not c:
                raise ValueError("polynomial needs at least one coefficient")
            c = tuple(c)
        if not all(math.isfinite(v) for v in c):
            raise ValueError("coefficients must be finite")
        object.__setattr__(self, "coeffs", c)

    # constructors -------------------------------------------------------

    @classmethod
    def linear(cls, r: float, s: float) -> "CharFunc":
        return cls(LINEAR, r=float(r), s=float(s))

    @classmethod
    def quadratic(cls, t: float, r: float, s: float) -> "CharFunc":
        return cls(QUADRATIC, r=float(r), s=float(s), t=float(t))

    @classmethod
    def polynomial(cls, coeffs: Sequence[float]) -> "CharFunc":
        return cls(POLYNOMIAL, coeffs=tuple(float(c) for c in coeffs))

    @classmethod
    def sl2(cls) -> "CharFunc":
        """f(x) = x - 1, which reproduces the ordinary sl(2) algebra."""
        return cls.linear(1.0, 1.0)

    # structure ----------------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def as_quadratic(self) -> tuple[float, float, float] | None:
        """Return ``(t, r, s)`` if f has exact degree 2, else None."""
        if self.degree != 2:
            return None
        c0, c1, c2 = self.coeffs
        return c2, c1, -c0

    def as_linear(self) -> tuple[float, float] | None:
        """Return ``(r, s)`` if f has degree <= 1, else None."""
        if self.degree > 1:
            return None
        c = self.coeffs + (0.0,) * (2 - len(self.coeffs))
        return c[1], -c[0]

    # evaluation ---------------------------------------------------------

    def __call__(self, x):
        # Horner; works elementwise on arrays
        c = self.coeffs
        acc = c[-1] * np.ones_like(x, dtype=float) if np.ndim(x) else c[-1]
        for a in c[-2::-1]:
            acc = acc * x + a
        return acc

    def eval(self, x: float) -> float:
        x = float(x)
        if not math.isfinite(x):
            raise ValueError(f"f is only defined on finite reals, got {x!r}")
        return float(self(x))

    def derivative(self, x):
        c = self.coeffs
        n = len(c) - 1
        if n == 0:
            return 0.0 * np.asarray(x, dtype=float) if np.ndim(x) else 0.0
        acc = n * c[n] * np.ones_like(x, dtype=float) if np.ndim(x) else n * c[n]
        for k in range(n - 1, 0, -1):
            acc = acc * x + k * c[k]
        return acc if np.ndim(x) else float(acc)

    def iterate(self, x0: float, m: int) -> list[float]:
        """Return ``[x0, f(x0), ..., f^m(x0)]``.

        Raises DivergenceError once an iterate leaves the escape bound.
        """
        if m < 0:
            raise ValueError("m must be non-negative")
        x = float(x0)
        if not math.isfinite(x):
            raise ValueError(f"f is only defined on finite reals, got {x0!r}")
        out = [x]
        for k in range(1, m + 1):
            x = float(self(x))
            if not math.isfinite(x) or abs(x) > ESCAPE_BOUND:
                raise DivergenceError(k, x)
            out.append(x)
        return out

    def power(self, x, d: int):
        """f^d evaluated elementwise, no divergence guard (overflow gives inf)."""
        with np.errstate(over="ignore", invalid="ignore"):
            for _ in range(d):
                x = self(x)
        return x

    def power_with_derivative(self, x, d: int):
        """Return ``(f^d(x), (f^d)'(x))`` via the chain rule."""
        val = x
        der = np.ones_like(x, dtype=float) if np.ndim(x) else 1.0
        with np.errstate(over="ignore", invalid="ignore"):
            for _ in range(d):
                der = der * self.derivative(val)
                val = self(val)
        return val, der

    # serialization ------------------------------------------------------

    def to_dict(self) -> dict:
        if self.kind == LINEAR:
            return {"kind": LINEAR, "r": self.r, "s": self.s}
        if self.kind == QUADRATIC:
            return {"kind": QUADRATIC, "t": self.t, "r": self.r, "s": self.s}
        return {"kind": POLYNOMIAL, "coeffs": list(self.coeffs)}

    @classmethod
    def from_dict(cls, data: dict) -> "CharFunc":
        kind = data.get("kind")
        allowed = {
            LINEAR: {"kind", "r", "s"},
            QUADRATIC: {"kind", "t", "r", "s"},
            POLYNOMIAL: {"kind", "coeffs"},
        }
        if kind not in allowed:
            raise ValueError(f"unknown kind {kind!r}")
        extra = set(data) - allowed[kind] - {"t", "r", "s", "coeffs"}
        if extra:
            raise ValueError(f"unknown keys {sorted(extra)}")
        if kind == LINEAR:
            return cls.linear(data["r"], data["s"])
        if kind == QUADRATIC:
            return cls.quadratic(data["t"], data["r"], data["s"])
        return cls.polynomial(data["coeffs"])

    def __str__(self):
        if self.kind == LINEAR:
            return f"f(x) = {self.r:g}*x - {self.s:g}"
        if self.kind == QUADRATIC:
            return f"f(x) = {self.t:g}*x^2 + {self.r:g}*x - {self.s:g}"
        terms = " + ".join(f"{c:g}*x^{k}" for k, c in enumerate(self.coeffs))
        return f"f(x) = {terms}"
