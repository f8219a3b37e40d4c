"""Point values with first and second derivatives.

``XJet`` carries ``(value, d/dx, d2/dx2)`` of a function of ``x`` and
combines them with the product and quotient rules written out by hand.
``Jet2`` is the derivative set of a pair ``(u, v)`` needed to evaluate the
PDE residuals.
"""

from __future__ import annotations

from dataclasses import dataclass, fields

import numpy as np


@dataclass(frozen=True)
class Jet2:
    u: np.ndarray
    v: np.ndarray
    u_t: np.ndarray
    v_t: np.ndarray
    u_x: np.ndarray
    v_x: np.ndarray
    u_xx: np.ndarray
    v_xx: np.ndarray

    def as_dict(self) -> dict[str, np.ndarray]:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def replace(self, **changes) -> "Jet2":
        d = self.as_dict()
        d.update(changes)
        return Jet2(**d)

    def take(self, mask) -> "Jet2":
        return Jet2(**{k: np.asarray(a)[mask] for k, a in self.as_dict().items()})

    def is_finite(self) -> np.ndarray:
        ok = np.ones(np.shape(np.asarray(self.u)), dtype=bool)
        for a in self.as_dict().values():
            ok &= np.isfinite(a)
        return ok


class XJet:
    """Second-order jet in ``x``: value ``f``, slope ``d`` and curvature ``dd``."""

    __slots__ = ("f", "d", "dd")

    def __init__(self, f, d=0.0, dd=0.0):
        self.f = f
        self.d = d
        self.dd = dd

    @classmethod
    def const(cls, c):
        return cls(c, 0.0, 0.0)

    def __add__(self, other):
        if isinstance(other, XJet):
            return XJet(self.f + other.f, self.d + other.d, self.dd + other.dd)
        return XJet(self.f + other, self.d, self.dd)

    __radd__ = __add__

    def __neg__(self):
        return XJet(-self.f, -self.d, -self.dd)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, XJet):
            return XJet(
                self.f * other.f,
                self.d * other.f + self.f * other.d,
                self.dd * other.f + 2 * self.d * other.d + self.f * other.dd,
            )
        return XJet(self.f * other, self.d * other, self.dd * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, XJet):
            return XJet(self.f / other, self.d / other, self.dd / other)
        # q = n/m:  q' = (n' - q m')/m,  q'' = (n'' - 2 q' m' - q m'')/m
        q = self.f / other.f
        q1 = (self.d - q * other.d) / other.f
        q2 = (self.dd - 2 * q1 * other.d - q * other.dd) / other.f
        return XJet(q, q1, q2)

    def __rtruediv__(self, other):
        return XJet.const(other) / self

    def sqrt(self):
        r = np.sqrt(self.f)
        r1 = self.d / (2 * r)
        # r r'' + r'^2 = f''/2
        r2 = (self.dd / 2 - r1 * r1) / r
        return XJet(r, r1, r2)

    def __repr__(self):
        return f"XJet({self.f!r}, {self.d!r}, {self.dd!r})"
