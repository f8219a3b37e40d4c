"""Residuals of the reduced ODE systems satisfied by ansatz profiles."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from ..catalog.ansatz import AnsatzRow, ansatz_denominator, ansatz_jet
from ..catalog.families import FamilyTag, SolutionFamily
from ..catalog.functions import f_jet
from ..catalog.jets import XJet
from ..catalog.profiles import (
    ReducedProfile,
    build_case1_profiles,
    case9_exp_profiles,
    case9_f0_profiles,
    case9_phi0_profiles,
    polymer_profiles,
)
from ..errors import EmptySampleError, ShapeError
from ..model import SktParams, case1_gamma
from .pde import pde_residual
from .report import ResidualReport, summarize

__all__ = ["ReducedSystemId", "ReducedContext", "reduced_equations", "reduced_ode_residual",
           "reduction_consistency", "family_profiles", "ROW_SYSTEM"]


class ReducedSystemId(str, enum.Enum):
    ODE27 = "Ode27"
    ODE34 = "Ode34"
    ODE34_ALPHA0 = "Ode34Alpha0"
    ODE35 = "Ode35"
    ODE45 = "Ode45"
    Q1 = "Q1"
    Q1_A2ZERO = "Q1_A2Zero"
    Q2 = "Q2"
    Q3_0 = "Q3_0"
    Q3_0_A2ZERO = "Q3_0_A2Zero"
    Q4 = "Q4"
    Q5 = "Q5"
    # the Q5 system with +mu psi^3, which ansatz solutions do not satisfy
    Q5_PRINTED = "Q5_Printed"
    Q8 = "Q8"
    Q11_0 = "Q11_0"
    Q11_0_ALPHA0 = "Q11_0_Alpha0"
    Q11 = "Q11"


# systems with psi in a denominator
_DIVIDES_BY_PSI = {
    ReducedSystemId.ODE34, ReducedSystemId.ODE34_ALPHA0, ReducedSystemId.Q3_0,
    ReducedSystemId.Q3_0_A2ZERO, ReducedSystemId.Q5, ReducedSystemId.Q5_PRINTED,
    ReducedSystemId.Q11_0, ReducedSystemId.Q11_0_ALPHA0, ReducedSystemId.Q11,
}


@dataclass(frozen=True)
class ReducedContext:
    """Coefficients entering a reduced system; ``alpha1, alpha2`` define ``f``."""

    params: SktParams
    alpha: float = 0.0
    alpha0: float = 0.0
    alpha1: float = 0.0
    alpha2: float = 0.0

    def f(self, x) -> XJet:
        return f_jet(self.params.b2, self.alpha1, self.alpha2, x)


def reduced_equations(sid, ctx: ReducedContext, phi: XJet, psi: XJet, x) -> tuple[np.ndarray, np.ndarray]:
    """Both equations of a reduced system evaluated pointwise (each ``= 0``)."""
    sid = ReducedSystemId(sid)
    p, S = ctx.params, ReducedSystemId
    a1, a2, b1, b2 = p.a1, p.a2, p.b1, p.b2
    f = ctx.f(x)
    lin = phi.dd - b2 * phi.f
    if sid in (S.ODE27, S.Q1, S.Q1_A2ZERO):
        # for a2 = 0 gamma reduces to a1 + b2
        k = 1 + p.c1 - b2 * p.d12
        g = case1_gamma(p)
        return lin, psi.dd + (a1 - g) * psi.f - k * phi.f
    if sid in (S.ODE34, S.Q11_0):
        return lin - f.f / psi.f, psi.dd + (a1 - ctx.alpha) * psi.f + f.f / psi.f
    if sid in (S.ODE34_ALPHA0, S.Q11_0_ALPHA0):
        return lin - f.f / psi.f, psi.dd + a1 * psi.f + f.f / psi.f
    if sid is S.ODE35:
        beta = a1 + b2
        return lin, psi.f * psi.dd - b2 * psi.f**2 + ctx.alpha0 * beta * phi.f
    if sid is S.Q11:
        beta = a1 + b2
        return lin, psi.dd - b2 * psi.f + ctx.alpha0 * beta * phi.f / psi.f
    if sid is S.ODE45:
        d1, d2 = p.d1, p.d2
        s = d1 * phi.f + d2 * psi.f
        return (s * phi.dd + 2 * d2 * phi.d * psi.d - d1 * phi.f**2,
                s * psi.dd + 2 * d1 * phi.d * psi.d - d2 * psi.f**2)
    if sid is S.Q2:
        return lin, psi.dd + psi.f * (a1 - b1 * psi.f)
    if sid is S.Q3_0:
        return phi.dd + phi.f * (a2 / psi.f - b2), psi.dd + psi.f * (a1 - b1 * psi.f) - a2 * phi.f / psi.f
    if sid is S.Q3_0_A2ZERO:
        return lin - f.f / psi.f, psi.dd + psi.f * (a1 - b1 * psi.f) + f.f / psi.f
    if sid is S.Q4:
        return lin, psi.dd + (a1 - ctx.alpha) * psi.f - (p.c1 - b2 * p.d12) * phi.f
    if sid in (S.Q5, S.Q5_PRINTED):
        mu = a2 + b2 * p.d2
        sign = -1.0 if sid is S.Q5 else 1.0
        # (psi^2)' (phi/psi)' = 2 psi psi' (phi' psi - phi psi') / psi^2
        cross = 2 * psi.d * (phi.d * psi.f - phi.f * psi.d) / psi.f
        return lin, (p.d2 * phi.f + p.d1 * psi.f**2) * psi.dd + p.d2 * cross + sign * mu * psi.f**3
    if sid is S.Q8:
        return lin, psi.dd + (a1 - ctx.alpha) * psi.f
    raise ValueError(sid)  # pragma: no cover


def reduced_ode_residual(sid, profiles: tuple[ReducedProfile, ReducedProfile], x_samples,
                         ctx: ReducedContext, tol: float = 1e-8) -> ResidualReport:
    """Maximum residual of a reduced system over ``x_samples``.

    Points where a profile is non-finite, or where ``psi = 0`` for systems
    that divide by it, are skipped and counted.
    """
    sid = ReducedSystemId(sid)
    x = np.asarray(x_samples, dtype=float).ravel()
    phi_p, psi_p = profiles
    phi, psi = phi_p(x), psi_p(x)
    ok = np.ones(x.shape, dtype=bool)
    for j in (phi, psi):
        ok &= np.isfinite(j.f) & np.isfinite(j.d) & np.isfinite(j.dd)
    if sid in _DIVIDES_BY_PSI:
        ok &= psi.f != 0
    if not np.any(ok):
        raise EmptySampleError(f"reduced {sid.value}: no admissible sample")
    with np.errstate(all="ignore"):
        r1, r2 = reduced_equations(sid, ctx, phi, psi, x)
    r1, r2 = np.broadcast_to(r1, x.shape)[ok], np.broadcast_to(r2, x.shape)[ok]
    coords = (None, x[ok], None, None)
    eqs = (summarize(f"{sid.value}.1", r1, coords), summarize(f"{sid.value}.2", r2, coords))
    return ResidualReport(f"reduced:{sid.value}", eqs, tol, x.size, int(x.size - np.count_nonzero(ok)))


ROW_SYSTEM = {
    AnsatzRow.Q1: ReducedSystemId.Q1,
    AnsatzRow.Q1_A2ZERO: ReducedSystemId.Q1_A2ZERO,
    AnsatzRow.Q2: ReducedSystemId.Q2,
    AnsatzRow.Q3_0: ReducedSystemId.Q3_0,
    AnsatzRow.Q3_0_A2ZERO: ReducedSystemId.Q3_0_A2ZERO,
    AnsatzRow.Q4: ReducedSystemId.Q4,
    AnsatzRow.Q5: ReducedSystemId.Q5,
    AnsatzRow.Q8: ReducedSystemId.Q8,
    AnsatzRow.Q11_0: ReducedSystemId.Q11_0,
    AnsatzRow.Q11_0_ALPHA0: ReducedSystemId.Q11_0_ALPHA0,
    AnsatzRow.Q11: ReducedSystemId.Q11,
}


def reduction_consistency(row, ctx: ReducedContext, n: int = 200, seed: int = 0,
                          system=None, tol: float = 1e-8) -> ResidualReport:
    """Check that a reduced system is exactly what its ansatz needs.

    At random ``(t, x)`` with random values of ``phi, phi', psi, psi'``, the
    second derivatives are solved from the reduced system (which is affine in
    them) and the ansatz is substituted into the PDE. A correct reduced system
    gives a zero PDE residual at every point. ``system`` overrides the
    reduced system paired with ``row``.
    """
    row = AnsatzRow(row)
    sid = ReducedSystemId(system) if system is not None else ROW_SYSTEM[row]
    rng = np.random.default_rng(seed)
    t = rng.uniform(0.1, 1.0, n)
    x = rng.uniform(-1.0, 1.0, n)
    vals = rng.uniform(0.5, 1.5, (4, n)) * rng.choice((-1.0, 1.0), (4, n))
    # keep psi and the v-denominator away from zero
    vals[2] = np.abs(vals[2]) + 0.5

    def eqs(dd_phi, dd_psi):
        return reduced_equations(sid, ctx, XJet(vals[0], vals[1], dd_phi),
                                 XJet(vals[2], vals[3], dd_psi), x)

    z, o = np.zeros(n), np.ones(n)
    r0 = np.array(eqs(z, z))
    rp = np.array(eqs(o, z)) - r0
    rs = np.array(eqs(z, o)) - r0
    # solve [rp rs] [phi'' psi'']^T = -r0 pointwise
    M = np.stack([np.stack([rp[0], rs[0]], -1), np.stack([rp[1], rs[1]], -1)], -2)
    det = np.linalg.det(M)
    ok = np.abs(det) > 1e-8
    sol = np.zeros((n, 2))
    sol[ok] = np.linalg.solve(M[ok], -r0.T[ok][..., None])[..., 0]
    phi = XJet(vals[0], vals[1], sol[:, 0])
    psi = XJet(vals[2], vals[3], sol[:, 1])
    den, scale = ansatz_denominator(row, ctx.params, t, phi, psi, ctx.alpha, ctx.alpha0)
    ok &= np.abs(den) > 1e-3 * np.maximum(scale, 1.0)
    if not np.any(ok):
        raise EmptySampleError(f"consistency {row.value}: no admissible sample")
    jet = ansatz_jet(row, ctx.params, t, phi, psi, ctx.f(x), ctx.alpha, ctx.alpha0).take(ok)
    s1, s2 = pde_residual(ctx.params, jet)
    coords = (t[ok], x[ok], jet.u, jet.v)
    name = f"consistency:{row.value}:{sid.value}"
    return ResidualReport(name, (summarize("S1", s1, coords), summarize("S2", s2, coords)), tol, n,
                          int(n - np.count_nonzero(ok)))


def family_profiles(fam: SolutionFamily, alpha0: float = 1.0):
    """The reduced system a family's profiles solve, with the profiles and context.

    Returns ``(system_id, (phi, psi), ctx)``. ``alpha0`` is the free constant
    of the ``phi = 0`` family's reduced system, which that family satisfies
    for every value.

    Raises
    ------
    ShapeError
        For families built without separate profiles.
    """
    p, tag = fam.params, fam.tag
    if tag in (FamilyTag.CASE1_A2_NONZERO, FamilyTag.CASE1_A2_ZERO):
        pr = build_case1_profiles(p, fam.C1, fam.C2, fam.C3, fam.C4)
        return ReducedSystemId.ODE27, (pr.phi, pr.psi), ReducedContext(p)
    if tag is FamilyTag.CASE9_F0:
        return (ReducedSystemId.ODE34, case9_f0_profiles(p, fam.alpha, fam.C1, fam.C2, fam.C3, fam.C4),
                ReducedContext(p, alpha=fam.alpha))
    if tag is FamilyTag.CASE9_EXP:
        phi, psi, (a1, a2) = case9_exp_profiles(p.a1, fam.alpha, fam.C1, fam.C2, fam.C3)
        return ReducedSystemId.ODE34, (phi, psi), ReducedContext(p, alpha=fam.alpha, alpha1=a1, alpha2=a2)
    if tag is FamilyTag.CASE9_PHI0:
        return (ReducedSystemId.ODE35, case9_phi0_profiles(p.b2, fam.C1, fam.C2),
                ReducedContext(p, alpha0=alpha0))
    if tag is FamilyTag.POLYMER49:
        prof = polymer_profiles(p.d1, p.d2, fam.C1, fam.C2, fam.C3, fam.C4, fam.sign)
        return ReducedSystemId.ODE45, prof, ReducedContext(p)
    raise ShapeError(f"{tag.value} is given in closed form without separate profiles")
