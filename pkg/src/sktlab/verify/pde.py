"""PDE residuals of exact solutions and their invariant surface conditions."""

from __future__ import annotations

import numpy as np

from ..catalog.jets import Jet2
from ..catalog.operators import SymmetryOperator, domain_mask, operator_coefficients
from ..errors import EmptySampleError
from ..model import SktParams, reaction_terms
from .report import ResidualReport, SamplingSpec, summarize

__all__ = ["pde_residual", "verify_family", "invariant_surface_residual", "MIN_RETAINED"]

# fraction of requested samples a report must keep
MIN_RETAINED = 0.9


def pde_residual(p: SktParams, jet: Jet2):
    """Residuals ``(S1, S2)`` of the system at a jet.

    ``[(d1 + d12 v) u]_xx`` is expanded by the product rule as
    ``(d1 + d12 v) u_xx + 2 d12 v_x u_x + d12 v_xx u``, and likewise for ``v``.
    Both residuals are affine in ``u_t``, ``v_t`` with coefficient ``-1``.
    """
    j = jet
    f1, f2 = reaction_terms(p, j.u, j.v)
    s1 = (p.d1 + p.d12 * j.v) * j.u_xx + 2 * p.d12 * j.v_x * j.u_x + p.d12 * j.v_xx * j.u - j.u_t + f1
    s2 = (p.d2 + p.d21 * j.u) * j.v_xx + 2 * p.d21 * j.u_x * j.v_x + p.d21 * j.u_xx * j.v - j.v_t + f2
    return s1, s2


def _pde_scale(p: SktParams, j: Jet2):
    f1, f2 = reaction_terms(p, j.u, j.v)
    a1 = (np.abs((p.d1 + p.d12 * j.v) * j.u_xx) + np.abs(2 * p.d12 * j.v_x * j.u_x)
          + np.abs(p.d12 * j.v_xx * j.u) + np.abs(j.u_t) + np.abs(f1))
    a2 = (np.abs((p.d2 + p.d21 * j.u) * j.v_xx) + np.abs(2 * p.d21 * j.u_x * j.v_x)
          + np.abs(p.d21 * j.u_xx * j.v) + np.abs(j.v_t) + np.abs(f2))
    return a1, a2


def _accepted(name, ok, requested):
    kept = int(np.count_nonzero(ok))
    if kept == 0:
        raise EmptySampleError(f"{name}: every sample point was outside the domain")
    if kept < MIN_RETAINED * requested:
        raise EmptySampleError(f"{name}: only {kept} of {requested} samples inside the domain")
    return kept


def verify_family(p: SktParams, fam, spec: SamplingSpec = SamplingSpec(n=200),
                  tol: float = 1e-8) -> ResidualReport:
    """Maximum PDE residual of an exact solution over random ``(t, x)`` samples.

    ``fam`` is any solution object with ``jet_and_mask`` (families, mapped
    solutions, ansatz solutions). Points where it is undefined are skipped.
    """
    t, x = spec.draw_tx()
    with np.errstate(all="ignore"):
        jet, ok = fam.jet_and_mask(t, x)
    ok = ok & jet.is_finite()
    name = f"pde:{getattr(fam, 'tag', 'solution')}"
    kept = _accepted(name, ok, spec.n)
    j = jet.take(ok)
    s1, s2 = pde_residual(p, j)
    sc1, sc2 = _pde_scale(p, j)
    coords = (t[ok], x[ok], j.u, j.v)
    eqs = (summarize("S1", s1, coords, sc1), summarize("S2", s2, coords, sc2))
    return ResidualReport(name, eqs, tol, spec.n, spec.n - kept)


def invariant_surface_residual(op: SymmetryOperator, fam, spec: SamplingSpec = SamplingSpec(n=200),
                               tol: float = 1e-8) -> ResidualReport:
    """Residuals ``u_t + xi u_x - eta1`` and ``v_t + xi v_x - eta2`` along a solution."""
    t, x = spec.draw_tx()
    with np.errstate(all="ignore"):
        jet, ok = fam.jet_and_mask(t, x)
        ok = ok & jet.is_finite() & domain_mask(op, t, x, jet.u, jet.v)
    name = f"surface:{op.kind.value}:{getattr(fam, 'tag', 'solution')}"
    kept = _accepted(name, ok, spec.n)
    j = jet.take(ok)
    tk, xk = t[ok], x[ok]
    B = operator_coefficients(op, tk, xk, j.u, j.v)
    qu = j.u_t + B.xi * j.u_x - B.eta1
    qv = j.v_t + B.xi * j.v_x - B.eta2
    coords = (tk, xk, j.u, j.v)
    eqs = (
        summarize("Q(u)", qu, coords, np.abs(j.u_t) + np.abs(B.xi * j.u_x) + np.abs(B.eta1)),
        summarize("Q(v)", qv, coords, np.abs(j.v_t) + np.abs(B.xi * j.v_x) + np.abs(B.eta2)),
    )
    return ResidualReport(name, eqs, tol, spec.n, spec.n - kept)
