"""Spatial profiles ``phi(x), psi(x)`` that solve the reduced ODE systems."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..errors import DomainError, ParameterError, ShapeError
from ..model import SktParams, case1_gamma, is_case1_shape
from .functions import harmonic
from .jets import XJet

__all__ = [
    "ReducedProfile",
    "Case1Profiles",
    "build_case1_profiles",
    "polymer_profiles",
    "case9_f0_profiles",
    "case9_exp_profiles",
    "case9_phi0_profiles",
]


@dataclass(frozen=True)
class ReducedProfile:
    """A profile with analytic first and second derivatives.

    ``fn`` maps an array of ``x`` to an :class:`XJet`; ``tag`` records which
    closed form produced it.
    """

    fn: Callable[[np.ndarray], XJet]
    tag: str = "user"

    def __call__(self, x) -> XJet:
        return self.fn(np.asarray(x, dtype=float))

    def value(self, x):
        return self(x).f

    def first(self, x):
        return self(x).d

    def second(self, x):
        return self(x).dd

    @classmethod
    def zero(cls, tag: str = "zero") -> "ReducedProfile":
        return cls(lambda x: XJet(0.0 * x, 0.0 * x, 0.0 * x), tag)


@dataclass(frozen=True)
class Case1Profiles:
    """``phi`` and ``psi`` for the canonical Case-1 system plus the constants they use.

    ``kappa`` is the wave number of the homogeneous part of ``psi``
    (``sqrt|a1 - gamma|`` when ``a2 != 0``); ``branch`` names the sign case
    that selected the closed form.
    """

    phi: ReducedProfile
    psi: ReducedProfile
    gamma: float
    kappa: float
    branch: str

    def __iter__(self):
        return iter((self.phi, self.psi))


def _branch_name(rate: float) -> str:
    return "exp" if rate > 0 else ("trig" if rate < 0 else "affine")


def build_case1_profiles(p: SktParams, C1: float, C2: float, C3: float, C4: float) -> Case1Profiles:
    """General solution of the linear reduced system of the Case-1 ansatz.

    ``phi'' = b2 phi`` always. For ``a2 != 0``, with ``m = a2 (1 + c1 - b2 d12) - b2``,
    ``psi = h + phi / a2`` where ``h'' = -m h``. For ``a2 = 0``, ``psi`` solves
    ``psi'' - b2 psi = (1 + c1 - b2 d12) phi`` by resonance:
    ``psi = h + (1 + c1 - b2 d12) x phi' / (2 b2)``, or a cubic when ``b2 = 0``.
    """
    if not is_case1_shape(p):
        raise ShapeError("Case-1 profiles need b1 = d2 = 0 and d1 = d21 = c2 = 1")
    a2, b2 = p.a2, p.b2
    k = 1 + p.c1 - b2 * p.d12

    def phi(x):
        return harmonic(b2, C1, C2, x)

    if a2 != 0:
        m = a2 * k - b2
        gamma = case1_gamma(p)

        def psi(x):
            return harmonic(-m, C3, C4, x) + phi(x) / a2

        return Case1Profiles(
            ReducedProfile(phi, f"phi:{_branch_name(b2)}"),
            ReducedProfile(psi, f"psi:{_branch_name(-m)}+phi/a2"),
            gamma, float(np.sqrt(abs(m))), _branch_name(-m),
        )

    gamma = p.a1 + b2
    if b2 != 0:

        def psi(x):
            ph = phi(x)
            xj = XJet(x, 1.0 + 0.0 * x, 0.0 * x)
            # phi''' = b2 phi'
            dphi = XJet(ph.d, ph.dd, b2 * ph.d)
            return harmonic(b2, C3, C4, x) + xj * dphi * (k / (2 * b2))

        return Case1Profiles(
            ReducedProfile(phi, f"phi:{_branch_name(b2)}"),
            ReducedProfile(psi, f"psi:{_branch_name(b2)}+resonant"),
            gamma, float(np.sqrt(abs(b2))), _branch_name(b2),
        )

    def psi(x):
        # C3 + C4 x + k x^2 (3 C1 + C2 x) / 6
        f = C3 + C4 * x + k * x**2 * (3 * C1 + C2 * x) / 6
        d = C4 + k * (C1 * x + C2 * x**2 / 2)
        dd = k * (C1 + C2 * x)
        return XJet(f, d, dd)

    return Case1Profiles(
        ReducedProfile(phi, "phi:affine"), ReducedProfile(psi, "psi:cubic"), gamma, 0.0, "affine"
    )


def polymer_profiles(d1: float, d2: float, C1: float, C2: float, C3: float, C4: float,
                     sign: int = 1) -> tuple[ReducedProfile, ReducedProfile]:
    """Closed-form solution of the polymer reduced system.

    With ``E = C1 e^x + C2 e^-x`` and ``R = sqrt(E^2 + C3 e^x + C4 e^-x)``:
    ``phi = (E +- R) / 2`` and ``psi = d1 (-E +- R) / (2 d2)``.

    Evaluation raises :class:`DomainError` where the square-root argument is
    not positive.
    """
    if sign not in (1, -1):
        raise ParameterError("sign must be +1 or -1")
    if d2 == 0:
        raise ParameterError("d2 must be nonzero")

    def root(x):
        E = harmonic(1.0, C1, C2, x)
        arg = E * E + harmonic(1.0, C3, C4, x)
        bad = ~(arg.f > 0)
        if np.any(bad):
            i = int(np.flatnonzero(np.ravel(bad))[0])
            raise DomainError("square-root argument not positive", "E^2 + C3 e^x + C4 e^-x",
                              float(np.ravel(x)[i]))
        return E, arg.sqrt()

    def phi(x):
        E, R = root(x)
        return (E + sign * R) * 0.5

    def psi(x):
        E, R = root(x)
        return (sign * R - E) * (d1 / (2 * d2))

    tag = "upper" if sign == 1 else "lower"
    return ReducedProfile(phi, f"polymer-phi:{tag}"), ReducedProfile(psi, f"polymer-psi:{tag}")


def case9_f0_profiles(p: SktParams, alpha: float, C1: float, C2: float, C3: float,
                      C4: float) -> tuple[ReducedProfile, ReducedProfile]:
    """``f = 0`` solution of the Case-9 reduced system: ``psi'' = (alpha - a1) psi``, ``phi'' = b2 phi``."""
    return (
        ReducedProfile(lambda x: harmonic(p.b2, C3, C4, x), "case9-f0-phi"),
        ReducedProfile(lambda x: harmonic(alpha - p.a1, C1, C2, x), f"case9-f0-psi:{_branch_name(alpha - p.a1)}"),
    )


def case9_exp_profiles(a1: float, alpha: float, C1: float, C2: float,
                       C3: float) -> tuple[ReducedProfile, ReducedProfile, tuple[float, float]]:
    """Exponential special solution of the Case-9 reduced system with ``b2 = 1``.

    ``psi = C1 e^{-x/2}`` forces ``f = alpha2 e^{-x}`` with
    ``alpha2 = C1^2 (alpha - a1 - 1/4)``; then
    ``phi = -(4/3) C1 (alpha - a1 - 1/4) e^{-x/2} + C2 e^{-x} + C3 e^x``.
    Returns ``(phi, psi, (alpha1, alpha2))``.
    """
    s = alpha - a1 - 0.25

    def psi(x):
        e = np.exp(-0.5 * x)
        return XJet(C1 * e, -0.5 * C1 * e, 0.25 * C1 * e)

    def phi(x):
        e = np.exp(-0.5 * x)
        A = -4.0 / 3.0 * C1 * s
        return XJet(A * e, -0.5 * A * e, 0.25 * A * e) + harmonic(1.0, C3, C2, x)

    return ReducedProfile(phi, "case9-exp-phi"), ReducedProfile(psi, "case9-exp-psi"), (0.0, C1 * C1 * s)


def case9_phi0_profiles(b2: float, C1: float, C2: float) -> tuple[ReducedProfile, ReducedProfile]:
    """``phi = 0`` solution of the ``Q11`` reduced system: ``psi'' = b2 psi``."""
    return ReducedProfile.zero("case9-phi0-phi"), ReducedProfile(lambda x: harmonic(b2, C1, C2, x), "case9-phi0-psi")
