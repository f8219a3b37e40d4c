"""Pointwise residuals of the determining equations for conditional symmetries.

Every equation is written as ``sum(terms) = 0`` where each term is a named
subexpression, so a failure can be broken down term by term.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..catalog.operators import CoefficientBundle, SymmetryOperator, domain_mask, operator_coefficients
from ..errors import EmptySampleError, ShapeError
from ..model import CaseEntry, SktParams, reaction_terms
from .pde import MIN_RETAINED
from .report import AmbiguityReport, ResidualReport, SamplingSpec, summarize

__all__ = ["DeterminingContext", "determining_terms", "determining_residual", "EQUATION_IDS", "D_GUARD"]

EQUATION_IDS = ("9a", "9b", "10a", "10b", "11a", "11b", "12", "13", "14", "15", "16", "17")

# points with |D| below this fraction of its term magnitudes are skipped
D_GUARD = 1e-6


@dataclass(frozen=True)
class DeterminingContext:
    """``D``, the reaction terms and ``Delta`` at a batch of points."""

    D: np.ndarray
    F1: np.ndarray
    F2: np.ndarray
    F1_u: np.ndarray
    F2_v: np.ndarray
    Delta: np.ndarray

    @classmethod
    def build(cls, p: SktParams, u, v, B: CoefficientBundle) -> "DeterminingContext":
        D = p.d1 * p.d2 + p.d1 * p.d21 * u + p.d2 * p.d12 * v
        F1, F2 = reaction_terms(p, u, v)
        F1_u = p.a1 - 2 * p.b1 * u - p.c1 * v
        F2_v = p.a2 - p.b2 * u - 2 * p.c2 * v
        Delta = p.d12 * (F2 - B.eta2) - p.d21 * (F1 - B.eta1)
        return cls(D, F1, F2, F1_u, F2_v, Delta)


def d_scale(p: SktParams, u, v):
    return np.abs(p.d1 * p.d2) + np.abs(p.d1 * p.d21 * u) + np.abs(p.d2 * p.d12 * v)


def determining_terms(p: SktParams, B: CoefficientBundle, u, v) -> dict[str, dict[str, np.ndarray]]:
    """Named terms of each determining equation; each equation is ``sum = 0``."""
    d1, d2, d12, d21 = p.d1, p.d2, p.d12, p.d21
    c = DeterminingContext.build(p, u, v, B)
    D, F1, F2, Dl = c.D, c.F1, c.F2, c.Delta
    xi, xt, xx, xxx = B.xi, B.xi_t, B.xi_x, B.xi_xx
    e1, e2 = B.eta1, B.eta2
    a1u = d1 + d12 * v  # effective diffusivity of u
    a2u = d2 + d21 * u  # effective diffusivity of v
    E = {}
    E["9a"] = {"D eta1_vv": D * B.eta1_vv, "2 d2 d12 eta1_v": 2 * d2 * d12 * B.eta1_v}
    E["9b"] = {"D eta2_uu": D * B.eta2_uu, "2 d1 d21 eta2_u": 2 * d1 * d21 * B.eta2_u}
    E["10a"] = {"D eta1_uu": D * B.eta1_uu, "2 d2 d12 eta2_u": 2 * d2 * d12 * B.eta2_u}
    E["10b"] = {
        "D^2 eta1_uv": D**2 * B.eta1_uv,
        "-d2 d12 (d1 d21 eta1 + d2 d12 eta2)": -d2 * d12 * (d1 * d21 * e1 + d2 * d12 * e2),
        "-D (d1 d21 eta1_v - d2 d12 eta2_v)": -D * (d1 * d21 * B.eta1_v - d2 * d12 * B.eta2_v),
    }
    E["11a"] = {"D eta2_vv": D * B.eta2_vv, "2 d1 d21 eta1_v": 2 * d1 * d21 * B.eta1_v}
    E["11b"] = {
        "D^2 eta2_uv": D**2 * B.eta2_uv,
        "-d1 d21 (d1 d21 eta1 + d2 d12 eta2)": -d1 * d21 * (d1 * d21 * e1 + d2 * d12 * e2),
        "D (d1 d21 eta1_u - d2 d12 eta2_u)": D * (d1 * d21 * B.eta1_u - d2 * d12 * B.eta2_u),
    }
    E["12"] = {
        "2 D^2 eta1_xu": 2 * D**2 * B.eta1_xu,
        "-(d2 + d21 u)(d2 d12 xi eta2 - D xi_t - 2 D xi xi_x)": -a2u * (d2 * d12 * xi * e2 - D * xt - 2 * D * xi * xx),
        "d2 d12 d21 v xi eta1": d2 * d12 * d21 * v * xi * e1,
        "-D^2 xi_xx": -(D**2) * xxx,
        "d21 v D xi eta1_v": d21 * v * D * xi * B.eta1_v,
        "-d12 u D xi eta2_u": -d12 * u * D * xi * B.eta2_u,
        "2 d2 d12 D eta2_x": 2 * d2 * d12 * D * B.eta2_x,
    }
    E["13"] = {
        "2 D eta1_xv": 2 * D * B.eta1_xv,
        "-d2 d12 (d1 + d12 v) xi eta1 / D": -d2 * d12 * a1u * xi * e1 / D,
        "d2 d12^2 u xi eta2 / D": d2 * d12**2 * u * xi * e2 / D,
        "2 d2 d12 eta1_x": 2 * d2 * d12 * B.eta1_x,
        "-(d1 - d2 - d21 u + d12 v) xi eta1_v": -(d1 - d2 - d21 * u + d12 * v) * xi * B.eta1_v,
        "-d12 u (xi_t + 2 xi xi_x - xi eta1_u + xi eta2_v)": -d12 * u * (xt + 2 * xi * xx - xi * B.eta1_u + xi * B.eta2_v),
    }
    E["14"] = {
        "2 D^2 eta2_xv": 2 * D**2 * B.eta2_xv,
        "-(d1 + d12 v)(d1 d21 xi eta1 - D xi_t - 2 D xi xi_x)": -a1u * (d1 * d21 * xi * e1 - D * xt - 2 * D * xi * xx),
        "d1 d12 d21 u xi eta2": d1 * d12 * d21 * u * xi * e2,
        "-D^2 xi_xx": -(D**2) * xxx,
        "-d21 v D xi eta1_v": -d21 * v * D * xi * B.eta1_v,
        "d12 u D xi eta2_u": d12 * u * D * xi * B.eta2_u,
        "2 d1 d21 D eta1_x": 2 * d1 * d21 * D * B.eta1_x,
    }
    E["15"] = {
        "2 D eta2_xu": 2 * D * B.eta2_xu,
        "d1 d21^2 v xi eta1 / D": d1 * d21**2 * v * xi * e1 / D,
        "-d1 d21 (d2 + d21 u) xi eta2 / D": -d1 * d21 * a2u * xi * e2 / D,
        "2 d1 d21 eta2_x": 2 * d1 * d21 * B.eta2_x,
        "-(d2 - d1 + d21 u - d12 v) xi eta2_u": -(d2 - d1 + d21 * u - d12 * v) * xi * B.eta2_u,
        "-d21 v (xi_t + 2 xi xi_x + xi eta1_u - xi eta2_v)": -d21 * v * (xt + 2 * xi * xx + xi * B.eta1_u - xi * B.eta2_v),
    }
    E["16"] = {
        "2 D (eta1 - F1) xi_x": 2 * D * (e1 - F1) * xx,
        "D (eta1_t - (d1 + d12 v) eta1_xx - d12 u eta2_xx)": D * (B.eta1_t - a1u * B.eta1_xx - d12 * u * B.eta2_xx),
        "[d1 d21 u eta1 + (d1 + d12 v)(d2 F1 - u Delta)] eta1_u": (d1 * d21 * u * e1 + a1u * (d2 * F1 - u * Dl)) * B.eta1_u,
        "[D eta2 + (d1 + d12 v)(d1 (F2 - eta2) + v Delta)] eta1_v": (D * e2 + a1u * (d1 * (F2 - e2) + v * Dl)) * B.eta1_v,
        "d12 u [d2 (F1 - eta1) - u Delta] eta2_u": d12 * u * (d2 * (F1 - e1) - u * Dl) * B.eta2_u,
        "d12 u [d1 (F2 - eta2) + v Delta] eta2_v": d12 * u * (d1 * (F2 - e2) + v * Dl) * B.eta2_v,
        "d12 (v eta1 - u eta2) Delta": d12 * (v * e1 - u * e2) * Dl,
        "-d12 (d1 + d2) eta1 eta2": -d12 * (d1 + d2) * e1 * e2,
        "[d1 d12 F2 - D F1_u] eta1": (d1 * d12 * F2 - D * c.F1_u) * e1,
        "[c1 u D + d2 d12 F1] eta2": (p.c1 * u * D + d2 * d12 * F1) * e2,
    }
    E["17"] = {
        "2 D (eta2 - F2) xi_x": 2 * D * (e2 - F2) * xx,
        "D (eta2_t - d21 v eta1_xx - (d2 + d21 u) eta2_xx)": D * (B.eta2_t - d21 * v * B.eta1_xx - a2u * B.eta2_xx),
        "d21 v [d2 (F1 - eta1) - u Delta] eta1_u": d21 * v * (d2 * (F1 - e1) - u * Dl) * B.eta1_u,
        "d21 v [d1 (F2 - eta2) + v Delta] eta1_v": d21 * v * (d1 * (F2 - e2) + v * Dl) * B.eta1_v,
        "[D eta1 + (d2 + d21 u)(d2 (F1 - eta1) - u Delta)] eta2_u": (D * e1 + a2u * (d2 * (F1 - e1) - u * Dl)) * B.eta2_u,
        "[d2 d12 v eta2 + (d2 + d21 u)(d1 F2 + v Delta)] eta2_v": (d2 * d12 * v * e2 + a2u * (d1 * F2 + v * Dl)) * B.eta2_v,
        "d21 (v eta1 - u eta2) Delta": d21 * (v * e1 - u * e2) * Dl,
        "-d21 (d1 + d2) eta1 eta2": -d21 * (d1 + d2) * e1 * e2,
        "[b2 v D + d1 d21 F2] eta1": (p.b2 * v * D + d1 * d21 * F2) * e1,
        "[d2 d21 F1 - D F2_v] eta2": (d2 * d21 * F1 - D * c.F2_v) * e2,
    }
    return E


def determining_residual(entry: CaseEntry | None, op: SymmetryOperator,
                         spec: SamplingSpec = SamplingSpec(), tol: float = 1e-9,
                         metric: str = "abs") -> ResidualReport:
    """Evaluate all determining equations for ``op`` on random ``(t, x, u, v)``.

    Points where ``|D| < D_GUARD * (|d1 d2| + |d1 d21 u| + |d2 d12 v|)`` or
    where the operator is undefined are skipped; at least 90% of the
    requested points must remain.

    By default the pass flag compares raw residuals with ``tol``. With
    ``metric="scaled"`` it compares each residual divided by
    ``max(1, sum of |terms|)`` instead. Both statistics are reported.
    When an equation fails, the report carries its per-term values at the
    worst point.

    Raises
    ------
    ShapeError
        If ``entry`` is given and the operator's system is not of its form.
    EmptySampleError
        If too few samples survive the guards.
    """
    p = op.params
    if entry is not None:
        if op.kind.value not in entry.operators:
            raise ShapeError(f"{op.kind.value} is not listed for case {entry.case_id}")
        if not entry.matches(p, rtol=1e-9):
            raise ShapeError(f"operator system is not of case-{entry.case_id} form")
    t, x, u, v = spec.draw_txuv()
    D = p.d1 * p.d2 + p.d1 * p.d21 * u + p.d2 * p.d12 * v
    ok = np.abs(D) >= D_GUARD * d_scale(p, u, v)
    with np.errstate(all="ignore"):
        ok &= domain_mask(op, t, x, u, v)
    kept = int(np.count_nonzero(ok))
    name = f"determining:case{entry.case_id if entry else '?'}:{op.kind.value}"
    if kept == 0:
        raise EmptySampleError(f"{name}: every sample was rejected by the guards")
    if kept < MIN_RETAINED * spec.n:
        raise EmptySampleError(f"{name}: only {kept} of {spec.n} samples passed the guards")
    t, x, u, v = t[ok], x[ok], u[ok], v[ok]
    B = operator_coefficients(op, t, x, u, v)
    terms = determining_terms(p, B, u, v)
    eqs, totals = [], {}
    for eid in EQUATION_IDS:
        parts = terms[eid]
        total = sum(parts.values())
        scale = sum(np.abs(a) for a in parts.values())
        totals[eid] = total
        eqs.append(summarize(eid, total, (t, x, u, v), scale))
    report = ResidualReport(name, tuple(eqs), tol, spec.n, spec.n - kept, metric)
    failing = report.failing()
    if failing:
        only_last = set(failing) <= {"16", "17"}
        amb = []
        for eid in failing:
            i = int(np.argmax(np.abs(totals[eid])))
            point = {"t": float(t[i]), "x": float(x[i]), "u": float(u[i]), "v": float(v[i])}
            amb.append(AmbiguityReport(eid, point, {k: float(a[i]) for k, a in terms[eid].items()}, only_last))
        report = ResidualReport(name, tuple(eqs), tol, spec.n, spec.n - kept, metric, tuple(amb))
    return report
