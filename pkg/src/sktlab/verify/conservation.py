"""Weighted-mass balance of numerical runs of the system with ``b1 = c2 = 0``.

For that system ``Phi u`` with
``Phi = exp(+-sqrt(c1/d12) x - (a1 + c1 d1/d12) t)`` obeys
``(Phi u)_t = (Phi w_x - Phi_x w)_x`` where ``w = (d1 + d12 v) u``, and
likewise ``Psi v`` with ``Psi = exp(+-sqrt(b2/d21) x - (a2 + b2 d2/d21) t)``
and ``w = (d2 + d21 u) v``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import ParameterError, ShapeError
from ..model import SktParams

__all__ = ["ConservedWeight", "ConservationReport", "conservation_check"]


@dataclass(frozen=True)
class ConservedWeight:
    """Exponential weight of species ``"u"`` (``Phi``) or ``"v"`` (``Psi``); ``sign`` is +1 or -1."""

    species: str
    sign: int
    params: SktParams

    def __post_init__(self):
        if self.species not in ("u", "v"):
            raise ShapeError("species must be 'u' or 'v'")
        if self.sign not in (1, -1):
            raise ShapeError("sign must be +1 or -1")
        p = self.params
        d, c = (p.d12, p.c1) if self.species == "u" else (p.d21, p.b2)
        if d == 0:
            raise ParameterError(f"the {self.species}-weight needs a nonzero cross-diffusion coefficient")
        if c / d < 0:
            raise ParameterError(f"the {self.species}-weight needs a real exponent (ratio {c / d!r} < 0)")

    @property
    def k(self) -> float:
        """Signed spatial rate."""
        p = self.params
        r = p.c1 / p.d12 if self.species == "u" else p.b2 / p.d21
        return self.sign * math.sqrt(r)

    @property
    def lam(self) -> float:
        """Temporal decay rate."""
        p = self.params
        if self.species == "u":
            return p.a1 + p.c1 * p.d1 / p.d12
        return p.a2 + p.b2 * p.d2 / p.d21

    def phi(self, t, x):
        return np.exp(self.k * np.asarray(x, dtype=float) - self.lam * np.asarray(t, dtype=float))

    def phi_x(self, t, x):
        return self.k * self.phi(t, x)

    def phi_t(self, t, x):
        return -self.lam * self.phi(t, x)

    def density(self, u, v):
        return u if self.species == "u" else v

    def potential(self, u, v):
        """``w``, whose second derivative appears in the conserved equation."""
        p = self.params
        if self.species == "u":
            return (p.d1 + p.d12 * v) * u
        return (p.d2 + p.d21 * u) * v


@dataclass(frozen=True)
class ConservationReport:
    """Per-interval balance defects ``|dM/dt - (J(b) - J(a))|``."""

    times: tuple[float, ...]
    masses: tuple[float, ...]
    defects: tuple[float, ...]

    @property
    def max_defect(self) -> float:
        return max(self.defects, default=0.0)

    def to_dict(self) -> dict:
        return {"max_defect": self.max_defect, "times": list(self.times), "masses": list(self.masses),
                "defects": list(self.defects)}


def _slopes(w, h):
    # second-order one-sided differences at both ends
    left = (-3 * w[0] + 4 * w[1] - w[2]) / (2 * h)
    right = (3 * w[-1] - 4 * w[-2] + w[-3]) / (2 * h)
    return left, right


def conservation_check(p: SktParams, traj, w: ConservedWeight) -> ConservationReport:
    """Balance of ``M(t) = int Phi u dx`` over consecutive stored states.

    ``M`` is integrated with the trapezoid rule; the boundary flux
    ``J = Phi w_x - Phi_x w`` uses second-order one-sided slopes and is
    averaged over the two ends of each interval. The defect of an interval is
    ``|(M1 - M0) / dt - (avg J(b) - avg J(a))|``.

    Raises
    ------
    ShapeError
        If ``b1`` or ``c2`` is nonzero, or the trajectory has fewer than two states.
    """
    if p.b1 != 0 or p.c2 != 0:
        raise ShapeError("conserved forms need b1 = c2 = 0")
    if len(traj.states) < 2:
        raise ShapeError("need at least two stored states")
    if traj.grid.n < 3:
        raise ShapeError("need at least three nodes")
    x, h = traj.grid.x, traj.grid.h
    wt = ConservedWeight(w.species, w.sign, p)
    times, masses, fluxes = [], [], []
    for s in traj.states:
        phi = wt.phi(s.t, x)
        m = phi * wt.density(s.u, s.v)
        masses.append(float(h * (np.sum(m) - 0.5 * (m[0] + m[-1]))))
        pot = wt.potential(s.u, s.v)
        wa, wb = _slopes(pot, h)
        ja = phi[0] * wa - wt.k * phi[0] * pot[0]
        jb = phi[-1] * wb - wt.k * phi[-1] * pot[-1]
        fluxes.append(jb - ja)
        times.append(s.t)
    defects = []
    for i in range(len(times) - 1):
        dt = times[i + 1] - times[i]
        rate = (masses[i + 1] - masses[i]) / dt
        defects.append(abs(rate - 0.5 * (fluxes[i] + fluxes[i + 1])))
    return ConservationReport(tuple(times), tuple(masses), tuple(defects))
