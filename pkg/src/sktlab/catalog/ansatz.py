"""Ansätze generated by the invariant surface conditions of each operator.

Every ansatz has the shape::

    u = E(t) (p_psi(t) psi + p_phi(t) phi) + u0
    v = (q_phi(t) phi + q_f(t) f) / (r_psi(t) psi + r_phi(t) phi) + v0

with known time coefficients. ``ansatz_jet`` turns profile jets into the
derivative set needed by the PDE residual; ``AnsatzSolution`` binds concrete
profiles.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from ..errors import DomainError, ParameterError
from ..model import SktParams, case1_gamma
from .functions import f_jet, harmonic
from .jets import Jet2, XJet
from .operators import OperatorKind, SymmetryOperator
from .profiles import ReducedProfile

__all__ = ["AnsatzRow", "ansatz_jet", "ansatz_denominator", "AnsatzSolution", "ansatz_operator",
           "case2_constant_solution", "q8_solution", "Case8Solution"]

# relative size below which a denominator counts as zero
DENOMINATOR_GUARD = 1e-30


class AnsatzRow(str, enum.Enum):
    Q1 = "Q1"
    Q1_A2ZERO = "Q1_A2Zero"
    Q2 = "Q2"
    Q3_0 = "Q3_0"
    Q3_0_A2ZERO = "Q3_0_A2Zero"
    Q4 = "Q4"
    Q5 = "Q5"
    Q8 = "Q8"
    Q11_0 = "Q11_0"
    Q11_0_ALPHA0 = "Q11_0_Alpha0"
    Q11 = "Q11"


@dataclass
class _TimeCoeffs:
    # each entry is (value, d/dt)
    E: tuple
    p_psi: tuple
    p_phi: tuple
    q_phi: tuple
    q_f: tuple
    r_psi: tuple
    r_phi: tuple
    u0: float = 0.0
    v0: float = 0.0


def _c(value):
    return (value, 0.0 * value)


def _time_coeffs(row: AnsatzRow, p: SktParams, t, alpha: float, alpha0: float) -> _TimeCoeffs:
    one, zero = _c(np.ones_like(t)), _c(np.zeros_like(t))
    R = AnsatzRow
    if row is R.Q1:
        g, e = case1_gamma(p), np.exp(p.a2 * t)
        eg = np.exp(g * t)
        return _TimeCoeffs((eg, g * eg), _c(p.a2 + 0 * t), (e - 1, p.a2 * e),
                           (p.a2 * e, p.a2**2 * e), zero, _c(p.a2 + 0 * t), (e - 1, p.a2 * e))
    if row is R.Q1_A2ZERO:
        r = p.a1 + p.b2
        e = np.exp(r * t)
        lin = (t, np.ones_like(t))
        return _TimeCoeffs((e, r * e), one, lin, one, zero, one, lin)
    if row is R.Q2:
        e = np.exp(p.a2 * t)
        return _TimeCoeffs(one, one, zero, (e, p.a2 * e), zero, one, zero)
    if row is R.Q3_0:
        e = np.exp(p.a2 * t)
        return _TimeCoeffs(one, one, zero, one, (e, p.a2 * e), one, zero)
    if row in (R.Q3_0_A2ZERO, R.Q11_0_ALPHA0):
        return _TimeCoeffs(one, one, zero, one, (t, np.ones_like(t)), one, zero)
    if row is R.Q4:
        e = np.exp(alpha * t)
        return _TimeCoeffs((e, alpha * e), one, zero, one, zero, one, zero)
    if row is R.Q5:
        mu = p.a2 + p.b2 * p.d2
        e = np.exp(mu * t)
        return _TimeCoeffs((e, mu * e), one, zero, (e, mu * e), zero, one, zero, u0=-p.d2)
    if row is R.Q8:
        e, e2 = np.exp(alpha * t), np.exp(p.a2 * t)
        return _TimeCoeffs((e, alpha * e), one, zero, (e2, p.a2 * e2), zero, one, zero)
    if row is R.Q11_0:
        if alpha == 0:
            raise ParameterError("the Q11_0 ansatz with alpha = 0 is the Q11_0_Alpha0 row")
        e = np.exp(alpha * t)
        return _TimeCoeffs((e, alpha * e), one, zero, one, (e / alpha, e), one, zero)
    if row is R.Q11:
        b = p.a1 + p.b2
        e = np.exp(b * t)
        return _TimeCoeffs((e, b * e), one, zero, (b + alpha0 * (e - 1), alpha0 * b * e), one,
                           one, zero, v0=-1.0)
    raise ValueError(row)  # pragma: no cover


def ansatz_denominator(row, p: SktParams, t, phi: XJet, psi: XJet, alpha=0.0, alpha0=0.0):
    """The denominator of ``v`` and a scale for the zero test."""
    c = _time_coeffs(AnsatzRow(row), p, np.asarray(t, dtype=float), alpha, alpha0)
    a, b = c.r_psi[0] * psi.f, c.r_phi[0] * phi.f
    return a + b, np.maximum(np.abs(a), np.abs(b))


def ansatz_jet(row, p: SktParams, t, phi: XJet, psi: XJet, f: XJet | None = None,
               alpha: float = 0.0, alpha0: float = 0.0) -> Jet2:
    """Jet of the ansatz ``row`` at times ``t`` given profile jets at the matching ``x``.

    No domain check is made; callers mask points where the denominator of
    ``v`` vanishes (see :func:`ansatz_denominator`).
    """
    row = AnsatzRow(row)
    t = np.asarray(t, dtype=float)
    c = _time_coeffs(row, p, t, alpha, alpha0)
    if f is None:
        f = XJet(0.0 * t, 0.0 * t, 0.0 * t)
    # u = E (p_psi psi + p_phi phi) + u0
    inner = psi * c.p_psi[0] + phi * c.p_phi[0]
    u = inner * c.E[0] + c.u0
    u_t = c.E[1] * inner.f + c.E[0] * (c.p_psi[1] * psi.f + c.p_phi[1] * phi.f)
    num = phi * c.q_phi[0] + f * c.q_f[0]
    den = psi * c.r_psi[0] + phi * c.r_phi[0]
    v = num / den + c.v0
    num_t = c.q_phi[1] * phi.f + c.q_f[1] * f.f
    den_t = c.r_psi[1] * psi.f + c.r_phi[1] * phi.f
    v_t = (num_t * den.f - num.f * den_t) / den.f**2
    shape = np.broadcast_shapes(np.shape(t), np.shape(psi.f))
    b = lambda a: np.broadcast_to(np.asarray(a, dtype=float), shape)  # noqa: E731
    return Jet2(b(u.f), b(v.f), b(u_t), b(v_t), b(u.d), b(v.d), b(u.dd), b(v.dd))


_ROW_OPERATOR = {
    AnsatzRow.Q1: OperatorKind.Q1,
    AnsatzRow.Q1_A2ZERO: OperatorKind.Q1,
    AnsatzRow.Q2: OperatorKind.Q2,
    AnsatzRow.Q3_0: OperatorKind.Q3_0,
    AnsatzRow.Q3_0_A2ZERO: OperatorKind.Q3_0,
    AnsatzRow.Q4: OperatorKind.Q4,
    AnsatzRow.Q5: OperatorKind.Q5,
    AnsatzRow.Q8: OperatorKind.Q8,
    AnsatzRow.Q11_0: OperatorKind.Q11_0,
    AnsatzRow.Q11_0_ALPHA0: OperatorKind.Q11_0,
    AnsatzRow.Q11: OperatorKind.Q11,
}


def ansatz_operator(row, p: SktParams, alpha=0.0, alpha0=0.0, alpha1=0.0, alpha2=0.0) -> SymmetryOperator:
    """The operator whose invariant surface conditions the ansatz solves.

    Two ansätze carry a rescaled ``f``: in the ``Q11`` ansatz the operator's
    ``f`` is ``-alpha0`` times the ansatz's, and in the ``Q3_0`` ansatz with
    ``a2 != 0`` it is ``a2`` times the ansatz's. The operator is built with
    correspondingly scaled ``f``-constants.
    """
    row = AnsatzRow(row)
    kind = _ROW_OPERATOR[row]
    if row is AnsatzRow.Q11:
        return SymmetryOperator(kind, p, alpha0=alpha0, alpha1=-alpha0 * alpha1, alpha2=-alpha0 * alpha2)
    if row is AnsatzRow.Q3_0:
        return SymmetryOperator(kind, p, alpha1=p.a2 * alpha1, alpha2=p.a2 * alpha2)
    return SymmetryOperator(kind, p, alpha=alpha, alpha0=alpha0, alpha1=alpha1, alpha2=alpha2)


@dataclass(frozen=True)
class AnsatzSolution:
    """An ansatz with concrete profiles, evaluated as a function of ``(t, x)``.

    ``alpha1``, ``alpha2`` define ``f`` through ``f'' = b2 f`` as in the operators.
    """

    row: AnsatzRow
    params: SktParams
    phi: ReducedProfile
    psi: ReducedProfile
    alpha: float = 0.0
    alpha0: float = 0.0
    alpha1: float = 0.0
    alpha2: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "row", AnsatzRow(self.row))

    @property
    def tag(self) -> str:
        return f"ansatz:{self.row.value}"

    def operator(self) -> SymmetryOperator:
        return ansatz_operator(self.row, self.params, self.alpha, self.alpha0, self.alpha1, self.alpha2)

    def jet_and_mask(self, t, x):
        t, x = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(x, dtype=float))
        ph, ps = self.phi(x), self.psi(x)
        f = f_jet(self.params.b2, self.alpha1, self.alpha2, x)
        den, scale = ansatz_denominator(self.row, self.params, t, ph, ps, self.alpha, self.alpha0)
        ok = np.abs(den) > DENOMINATOR_GUARD * scale
        with np.errstate(all="ignore"):
            jet = ansatz_jet(self.row, self.params, t, ph, ps, f, self.alpha, self.alpha0)
        return jet, ok & jet.is_finite()

    def jet(self, t, x) -> Jet2:
        jet, ok = self.jet_and_mask(t, x)
        if not np.all(ok):
            _raise_domain(self.tag, "v denominator", t, x, ok)
        return jet


def _raise_domain(tag, expression, t, x, ok):
    t, x = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(x, dtype=float))
    i = int(np.flatnonzero(~np.ravel(ok))[0])
    loc = (float(np.ravel(t)[i]), float(np.ravel(x)[i]))
    raise DomainError(f"{tag} undefined at (t, x) = {loc}: {expression}", expression, loc)


def case2_constant_solution(p: SktParams, C1: float, C2: float, row=AnsatzRow.Q2) -> AnsatzSolution:
    """``u = a1 / b1`` with ``v = (b1 / a1) h(x) exp(a2 t)`` where ``h'' = b2 h``.

    The same functions solve the ``Q2`` ansatz (``h = phi``) and the ``Q3_0``
    ansatz (``phi = 0``, ``h = f``), so ``row`` selects which operator the
    returned solution is paired with.
    """
    row = AnsatzRow(row)
    if p.b1 == 0 or p.a1 == 0:
        raise ParameterError("the constant-u solution needs a1 != 0 and b1 != 0")
    c = p.a1 / p.b1
    psi = ReducedProfile(lambda x: XJet(c + 0.0 * x, 0.0 * x, 0.0 * x), "constant a1/b1")
    if row is AnsatzRow.Q2:
        phi = ReducedProfile(lambda x: harmonic(p.b2, C1, C2, x), "harmonic b2")
        return AnsatzSolution(row, p, phi, psi)
    if row is AnsatzRow.Q3_0:
        return AnsatzSolution(row, p, ReducedProfile.zero(), psi, alpha1=C1, alpha2=C2)
    raise ParameterError(f"no constant-u solution for row {row.value}")


def q8_solution(p: SktParams, alpha: float, C1: float, C2: float, C3: float, C4: float) -> AnsatzSolution:
    """The ``Q8`` ansatz with ``phi'' = b2 phi`` and ``psi'' = (alpha - a1) psi``."""
    phi = ReducedProfile(lambda x: harmonic(p.b2, C1, C2, x), "harmonic b2")
    psi = ReducedProfile(lambda x: harmonic(alpha - p.a1, C3, C4, x), "harmonic alpha-a1")
    return AnsatzSolution(AnsatzRow.Q8, p, phi, psi, alpha=alpha)


@dataclass(frozen=True)
class Case8Solution:
    """``u = psi(x) exp(-2 a2 t)``, ``v = -1`` with ``psi'' = -(a1 + 2 a2) psi``.

    It lies on the ``Q9`` invariant surface with vanishing second profile.
    """

    params: SktParams
    C1: float
    C2: float
    tag: str = "case8:Q9"

    def operator(self) -> SymmetryOperator:
        return SymmetryOperator(OperatorKind.Q9, self.params)

    def jet_and_mask(self, t, x):
        p = self.params
        t, x = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(x, dtype=float))
        ps = harmonic(-(p.a1 + 2 * p.a2), self.C1, self.C2, x)
        e = np.exp(-2 * p.a2 * t)
        z = np.zeros(t.shape)
        jet = Jet2(ps.f * e, z - 1.0, -2 * p.a2 * ps.f * e, z, ps.d * e, z, ps.dd * e, z)
        return jet, jet.is_finite()

    def jet(self, t, x) -> Jet2:
        jet, ok = self.jet_and_mask(t, x)
        if not np.all(ok):
            _raise_domain(self.tag, "overflow", t, x, ok)
        return jet
