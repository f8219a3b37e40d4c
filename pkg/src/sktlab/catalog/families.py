"""Closed-form exact solutions and their analytic derivative jets.

Each :class:`SolutionFamily` is bound to the coefficients of the system it
solves. Evaluation returns a :class:`Jet2`; the ``*_and_mask`` variants
report instead of raising where a formula is undefined, which is what the
residual checks use.
"""

from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from ..errors import DomainError, ParameterError, ShapeError
from ..model import (
    CASES,
    SktParams,
    TransformId,
    VarMap,
    apply_named_transform,
    case1_gamma,
    is_case1_shape,
)
from .ansatz import AnsatzRow, AnsatzSolution, _raise_domain
from .functions import harmonic
from .jets import Jet2, XJet
from .operators import OperatorKind, SymmetryOperator
from .profiles import build_case1_profiles, case9_phi0_profiles

__all__ = [
    "FamilyTag",
    "SolutionFamily",
    "MappedSolution",
    "AdmissibilityReport",
    "eval_solution",
    "eval_solution_jet",
    "admissible_domain",
    "paired_operators",
    "case9_params",
    "polymer_params",
]

DENOMINATOR_GUARD = 1e-30


class FamilyTag(str, enum.Enum):
    CASE1_A2_NONZERO = "Case1_A2NonZero"
    CASE1_A2_ZERO = "Case1_A2Zero"
    CASE1_EXPLICIT30 = "Case1_Explicit30"
    CASE9_F0 = "Case9_F0"
    CASE9_EXP = "Case9_Exp"
    CASE9_PHI0 = "Case9_Phi0"
    POLYMER49 = "Polymer49"


def case9_params(a1: float, b2: float = 1.0) -> SktParams:
    """Case-9 system; ``b2 = 1`` is its scaled canonical form."""
    return SktParams(d1=1, d12=1, d21=1, a1=a1, c1=b2, b2=b2)


def polymer_params(d1: float, d2: float, K: float, a3: float, d3: float) -> SktParams:
    """Two-monomer system with equilibrium-coupled dimer, in SKT form.

    Cross-diffusion ``d3 K``, inter-specific coefficient ``a3 K`` and the
    linear decay rates for which the closed-form family exists.
    """
    s = d3 * (d1 + d2)
    return SktParams(d1=d1, d2=d2, d12=d3 * K, d21=d3 * K, c1=a3 * K, b2=a3 * K,
                     a1=-a3 * d1**2 / s, a2=-a3 * d2**2 / s)


@dataclass(frozen=True)
class SolutionFamily:
    """An exact solution family with its constants.

    Only the constants a tag uses are meaningful: ``C1..C4``, ``x0`` and
    ``alpha`` for the Case-1 and Case-9 families, ``alpha1``/``alpha2`` for
    ``Case9_Phi0``, and ``sign``, ``K``, ``a3``, ``d3`` for ``Polymer49``.
    Use the tag-named constructors, which also bind the right coefficients.
    """

    tag: FamilyTag
    params: SktParams
    C1: float = 0.0
    C2: float = 0.0
    C3: float = 0.0
    C4: float = 0.0
    x0: float = 0.0
    alpha: float = 0.0
    alpha1: float = 0.0
    alpha2: float = 0.0
    sign: int = 1
    K: float = 0.0
    a3: float = 0.0
    d3: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "tag", FamilyTag(self.tag))
        for name in ("C1", "C2", "C3", "C4", "x0", "alpha", "alpha1", "alpha2", "K", "a3", "d3"):
            object.__setattr__(self, name, float(getattr(self, name)))
        object.__setattr__(self, "sign", int(self.sign))
        _check_family(self)

    # -- constructors -----------------------------------------------------

    @classmethod
    def case1_explicit30(cls, p: SktParams, C1, C2, C3, x0=0.0) -> "SolutionFamily":
        return cls(FamilyTag.CASE1_EXPLICIT30, p, C1=C1, C2=C2, C3=C3, x0=x0)

    @classmethod
    def case1_a2_nonzero(cls, p: SktParams, C1, C2, C3, C4) -> "SolutionFamily":
        return cls(FamilyTag.CASE1_A2_NONZERO, p, C1=C1, C2=C2, C3=C3, C4=C4)

    @classmethod
    def case1_a2_zero(cls, p: SktParams, C1, C2, C3, C4) -> "SolutionFamily":
        return cls(FamilyTag.CASE1_A2_ZERO, p, C1=C1, C2=C2, C3=C3, C4=C4)

    @classmethod
    def case9_f0(cls, a1, alpha, C1, C2, C3, C4, b2=1.0) -> "SolutionFamily":
        return cls(FamilyTag.CASE9_F0, case9_params(a1, b2), C1=C1, C2=C2, C3=C3, C4=C4, alpha=alpha)

    @classmethod
    def case9_exp(cls, a1, alpha, C1, C2, C3) -> "SolutionFamily":
        return cls(FamilyTag.CASE9_EXP, case9_params(a1), C1=C1, C2=C2, C3=C3, alpha=alpha)

    @classmethod
    def case9_phi0(cls, a1, C1, C2, alpha1, alpha2, b2=1.0) -> "SolutionFamily":
        return cls(FamilyTag.CASE9_PHI0, case9_params(a1, b2), C1=C1, C2=C2, alpha1=alpha1, alpha2=alpha2)

    @classmethod
    def polymer49(cls, d1, d2, K, a3, d3, C1, C2, C3, C4, sign=1) -> "SolutionFamily":
        return cls(FamilyTag.POLYMER49, polymer_params(d1, d2, K, a3, d3),
                   C1=C1, C2=C2, C3=C3, C4=C4, sign=sign, K=K, a3=a3, d3=d3)

    # -- serialization ----------------------------------------------------

    def to_dict(self) -> dict:
        d = asdict(self)
        d["tag"] = self.tag.value
        d["params"] = self.params.to_dict()
        return d

    @classmethod
    def from_dict(cls, data: dict) -> "SolutionFamily":
        """Build from a record keyed by tag plus constants.

        ``params`` may be omitted for the Case-9 and polymer tags; they are
        then derived from ``a1`` (and ``b2``) or from ``d1, d2, K, a3, d3``.
        """
        allowed = {f for f in cls.__dataclass_fields__} | {"a1", "b2", "d1", "d2"}
        unknown = sorted(set(data) - allowed)
        if unknown:
            raise ParameterError(f"unknown family keys: {', '.join(unknown)}")
        try:
            tag = FamilyTag(data["tag"])
        except (KeyError, ValueError):
            raise ParameterError(f"unknown family tag {data.get('tag')!r}") from None
        kw = {k: v for k, v in data.items() if k in cls.__dataclass_fields__ and k not in ("tag", "params")}
        if "params" in data:
            p = SktParams.from_dict(data["params"])
        elif tag in (FamilyTag.CASE9_F0, FamilyTag.CASE9_EXP, FamilyTag.CASE9_PHI0):
            p = case9_params(data.get("a1", 0.0), data.get("b2", 1.0))
        elif tag is FamilyTag.POLYMER49:
            p = polymer_params(data.get("d1", 0.0), data.get("d2", 0.0), kw.get("K", 0.0),
                               kw.get("a3", 0.0), kw.get("d3", 0.0))
        else:
            raise ParameterError(f"family {tag.value} needs a params block")
        return cls(tag, p, **kw)

    # -- evaluation -------------------------------------------------------

    def jet_and_mask(self, t, x):
        with np.errstate(all="ignore"):
            jet, ok = _EVALUATORS[self.tag](self, *_broadcast(t, x))
        return jet, ok & jet.is_finite()

    def jet(self, t, x) -> Jet2:
        return eval_solution_jet(self, t, x)


def _broadcast(t, x):
    return np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(x, dtype=float))


def _check_family(fam: SolutionFamily):
    p, tag = fam.params, fam.tag
    if tag in (FamilyTag.CASE1_EXPLICIT30, FamilyTag.CASE1_A2_NONZERO, FamilyTag.CASE1_A2_ZERO):
        if not is_case1_shape(p):
            raise ShapeError(f"{tag.value} needs the canonical Case-1 system")
        if tag is FamilyTag.CASE1_A2_NONZERO and p.a2 == 0:
            raise ParameterError("Case1_A2NonZero needs a2 != 0")
        if tag is FamilyTag.CASE1_A2_ZERO and p.a2 != 0:
            raise ParameterError("Case1_A2Zero needs a2 = 0")
        if tag is FamilyTag.CASE1_EXPLICIT30 and not p.a1 - case1_gamma(p) > 0:
            raise ParameterError("Case1_Explicit30 needs a1 - gamma > 0 (sine branch)")
    elif tag in (FamilyTag.CASE9_F0, FamilyTag.CASE9_EXP, FamilyTag.CASE9_PHI0):
        if not CASES[9].matches(p):
            raise ShapeError(f"{tag.value} needs a Case-9 system")
        if tag is FamilyTag.CASE9_EXP:
            if p.b2 != 1:
                raise ShapeError("Case9_Exp needs the scaled Case-9 system (b2 = 1)")
            if fam.alpha == 0:
                raise ParameterError("Case9_Exp needs alpha != 0")
    elif tag is FamilyTag.POLYMER49:
        if fam.sign not in (1, -1):
            raise ParameterError("sign must be +1 or -1")
        if not (fam.K > 0 and fam.a3 > 0 and fam.d3 > 0):
            raise ParameterError("Polymer49 needs K, a3, d3 > 0")
        if p.d1 + p.d2 == 0 or p.d2 == 0 or p.d1 == 0:
            raise ParameterError("Polymer49 needs d1, d2 != 0 and d1 + d2 != 0")
        ref = polymer_params(p.d1, p.d2, fam.K, fam.a3, fam.d3)
        if ref != p:
            raise ShapeError("Polymer49 params do not match d1, d2, K, a3, d3")


def _jet(u: XJet, u_t, v: XJet, v_t, shape) -> Jet2:
    b = lambda a: np.broadcast_to(np.asarray(a, dtype=float), shape).copy()  # noqa: E731
    return Jet2(b(u.f), b(v.f), b(u_t), b(v_t), b(u.d), b(v.d), b(u.dd), b(v.dd))


def _guard(den, *terms):
    scale = np.max(np.abs(np.stack(np.broadcast_arrays(*terms))), axis=0)
    return np.abs(den) > DENOMINATOR_GUARD * scale


# -- Case 1 ---------------------------------------------------------------


def _eval_explicit30(fam: SolutionFamily, t, x):
    # u = e^{(g + a2) t} N,  v = a2 B / N,  N = B + C3 e^{-a2 t} sin(w (x + x0))
    p = fam.params
    g = case1_gamma(p)
    w = math.sqrt(p.a1 - g)
    B = harmonic(p.b2, fam.C1, fam.C2, x)
    s, c = np.sin(w * (x + fam.x0)), np.cos(w * (x + fam.x0))
    G = fam.C3 * np.exp(-p.a2 * t)
    S = XJet(G * s, G * w * c, -G * w * w * s)
    N = B + S
    N_t = -p.a2 * S.f
    E = np.exp((g + p.a2) * t)
    u = N * E
    u_t = (g + p.a2) * E * N.f + E * N_t
    with np.errstate(all="ignore"):
        v = (B * p.a2) / N
        v_t = -p.a2 * B.f * N_t / N.f**2
    ok = _guard(N.f, B.f, S.f)
    return _jet(u, u_t, v, v_t, t.shape), ok


def _case1_ansatz(fam: SolutionFamily) -> AnsatzSolution:
    prof = build_case1_profiles(fam.params, fam.C1, fam.C2, fam.C3, fam.C4)
    row = AnsatzRow.Q1 if fam.tag is FamilyTag.CASE1_A2_NONZERO else AnsatzRow.Q1_A2ZERO
    return AnsatzSolution(row, fam.params, prof.phi, prof.psi)


def _eval_case1_ansatz(fam, t, x):
    return _case1_ansatz(fam).jet_and_mask(t, x)


# -- Case 9 ---------------------------------------------------------------


def _eval_case9_f0(fam: SolutionFamily, t, x):
    # u = psi e^{alpha t}, v = phi / psi with psi'' = (alpha - a1) psi, phi'' = b2 phi
    p = fam.params
    psi = harmonic(fam.alpha - p.a1, fam.C1, fam.C2, x)
    phi = harmonic(p.b2, fam.C3, fam.C4, x)
    e = np.exp(fam.alpha * t)
    u = psi * e
    with np.errstate(all="ignore"):
        v = phi / psi
    ok = _guard(psi.f, psi.f)
    return _jet(u, fam.alpha * u.f, v, 0.0, t.shape), ok


def _eval_case9_exp(fam: SolutionFamily, t, x):
    # u = C1 e^{alpha t - x/2}
    # v = q/3 - q/(4 alpha) u + C2 e^{-x/2} + C3 e^{3x/2},  q = 1 + 4 (a1 - alpha)
    a, q = fam.alpha, 1 + 4 * (fam.params.a1 - fam.alpha)
    w = fam.C1 * np.exp(a * t - 0.5 * x)
    u = XJet(w, -0.5 * w, 0.25 * w)
    k = -q / (4 * a)
    em, ep = fam.C2 * np.exp(-0.5 * x), fam.C3 * np.exp(1.5 * x)
    v = XJet(q / 3 + k * w + em + ep, -0.5 * k * w - 0.5 * em + 1.5 * ep,
             0.25 * k * w + 0.25 * em + 2.25 * ep)
    ok = np.isfinite(u.f) & np.isfinite(v.f)
    return _jet(u, a * w, v, k * a * w, t.shape), ok


def _eval_case9_phi0(fam: SolutionFamily, t, x):
    # u = psi e^{beta t}, v = f / psi - 1, psi'' = b2 psi, f'' = b2 f
    p = fam.params
    beta = p.a1 + p.b2
    psi = harmonic(p.b2, fam.C1, fam.C2, x)
    f = harmonic(p.b2, fam.alpha1, fam.alpha2, x)
    u = psi * np.exp(beta * t)
    with np.errstate(all="ignore"):
        v = f / psi - 1.0
    ok = _guard(psi.f, psi.f)
    return _jet(u, beta * u.f, v, 0.0, t.shape), ok


# -- polymerisation ---------------------------------------------------------


def _eval_polymer49(fam: SolutionFamily, t, x):
    p = fam.params
    d1, d2, s = p.d1, p.d2, fam.a3 / fam.d3
    E = harmonic(s, fam.C1, fam.C2, x)
    arg = E * E + harmonic(s, fam.C3, fam.C4, x)
    ok = arg.f > DENOMINATOR_GUARD * np.maximum(np.abs((E * E).f), 1.0)
    with np.errstate(all="ignore"):
        R = XJet(np.where(ok, arg.f, 1.0), arg.d, arg.dd).sqrt()
    lam = fam.a3 * d1 * d2 / (fam.d3 * (d1 + d2))
    T = np.exp(lam * t)
    su = (E + R * fam.sign) * d2
    sv = (R * fam.sign - E) * d1
    u = su * T - d2**2 / (fam.d3 * (d1 + d2) * fam.K)
    v = sv * T - d1**2 / (fam.d3 * (d1 + d2) * fam.K)
    return _jet(u, lam * T * su.f, v, lam * T * sv.f, t.shape), ok


_EVALUATORS = {
    FamilyTag.CASE1_EXPLICIT30: _eval_explicit30,
    FamilyTag.CASE1_A2_NONZERO: _eval_case1_ansatz,
    FamilyTag.CASE1_A2_ZERO: _eval_case1_ansatz,
    FamilyTag.CASE9_F0: _eval_case9_f0,
    FamilyTag.CASE9_EXP: _eval_case9_exp,
    FamilyTag.CASE9_PHI0: _eval_case9_phi0,
    FamilyTag.POLYMER49: _eval_polymer49,
}

_DOMAIN_EXPR = {
    FamilyTag.CASE1_EXPLICIT30: "B + C3 exp(-a2 t) sin(w (x + x0))",
    FamilyTag.CASE1_A2_NONZERO: "a2 psi + (exp(a2 t) - 1) phi",
    FamilyTag.CASE1_A2_ZERO: "phi t + psi",
    FamilyTag.CASE9_F0: "psi",
    FamilyTag.CASE9_EXP: "overflow",
    FamilyTag.CASE9_PHI0: "psi",
    FamilyTag.POLYMER49: "(C1 e^sx + C2 e^-sx)^2 + C3 e^sx + C4 e^-sx",
}


def eval_solution_jet(fam, t, x) -> Jet2:
    """Values and first/second derivatives of an exact solution.

    Accepts any solution object with ``jet_and_mask``.

    Raises
    ------
    DomainError
        If any point lies outside the family's domain of definition.
    """
    jet, ok = fam.jet_and_mask(t, x)
    if not np.all(ok):
        _raise_domain(getattr(fam, "tag", "solution"), _DOMAIN_EXPR.get(getattr(fam, "tag", None), "denominator"),
                      t, x, ok)
    return jet


def eval_solution(fam, t, x):
    """``(u, v)`` of an exact solution at ``(t, x)``; see :func:`eval_solution_jet`."""
    jet = eval_solution_jet(fam, t, x)
    return jet.u, jet.v


# -- mapped solutions ------------------------------------------------------


@dataclass(frozen=True)
class MappedSolution:
    """A solution carried to another system by a :class:`VarMap`.

    If ``(u, v)(t, x)`` solves the source system then
    ``(u*, v*)(t*, x*) = M (u, v)(t* / t_scale, x* / x_scale)`` solves the
    target system ``params``.
    """

    base: object
    varmap: VarMap
    params: SktParams

    @property
    def tag(self) -> str:
        return f"mapped:{getattr(self.base, 'tag', 'solution')}"

    @classmethod
    def through(cls, base, tid: TransformId | str) -> "MappedSolution":
        """Push ``base`` through a named transform of its own system."""
        p2, vm = apply_named_transform(tid, base.params)
        return cls(base, vm, p2)

    @classmethod
    def pulled_back(cls, base, source: SktParams, tid: TransformId | str) -> "MappedSolution":
        """Express a solution of the transformed system as one of ``source``."""
        p2, vm = apply_named_transform(tid, source)
        if not _params_close(p2, base.params):
            raise ShapeError(f"{TransformId(tid).value} of the source does not give the solution's system")
        return cls(base, vm.inverse(), source)

    def jet_and_mask(self, t, x):
        t, x = _broadcast(t, x)
        vm = self.varmap
        j, ok = self.base.jet_and_mask(t / vm.t_scale, x / vm.x_scale)
        M = vm.field_matrix
        ts, xs = 1.0 / vm.t_scale, 1.0 / vm.x_scale

        def mix(a, b, s):
            return (M[0, 0] * a + M[0, 1] * b) * s, (M[1, 0] * a + M[1, 1] * b) * s

        u, v = mix(j.u, j.v, 1.0)
        u_t, v_t = mix(j.u_t, j.v_t, ts)
        u_x, v_x = mix(j.u_x, j.v_x, xs)
        u_xx, v_xx = mix(j.u_xx, j.v_xx, xs * xs)
        return Jet2(u, v, u_t, v_t, u_x, v_x, u_xx, v_xx), ok

    def jet(self, t, x) -> Jet2:
        return eval_solution_jet(self, t, x)


def _params_close(a: SktParams, b: SktParams, rtol=1e-12) -> bool:
    da, db = a.to_dict(), b.to_dict()
    return all(math.isclose(da[k], db[k], rel_tol=rtol, abs_tol=rtol) for k in da)


# -- admissibility -----------------------------------------------------------


@dataclass(frozen=True)
class AdmissibilityReport:
    admissible: bool
    violated: tuple[str, ...] = ()
    notes: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {"admissible": self.admissible, "violated": list(self.violated), "notes": list(self.notes)}


def admissible_domain(fam: SolutionFamily, domain=(-math.inf, math.inf), t_range=(0.0, 10.0),
                      n_samples: int = 201) -> AdmissibilityReport:
    """Check the conditions under which a family is bounded and nonnegative.

    ``domain`` is the spatial interval ``(a, b)``. Families with explicit
    conditions are checked against them; the polymer family is checked by
    sampling nonnegativity of ``u`` and ``v`` on a finite box. Other
    families report only whether they are defined on a sampled box.
    """
    a, b = domain
    violated, notes = [], []
    tag = fam.tag
    if tag is FamilyTag.CASE1_EXPLICIT30:
        C1, C2, C3 = fam.C1, fam.C2, fam.C3
        if fam.params.b2 <= 0:
            violated.append("b2 > 0")
        if C3 == 0:
            notes.append("C3 = 0 makes v identically a2")
        if C1 > 0 and C2 > 0:
            if not abs(C3) < 2 * math.sqrt(C1 * C2):
                violated.append("|C3| < 2 sqrt(C1 C2)")
        elif C1 * C2 == 0:
            if C2 == 0 and C1 > 0:
                if not abs(C3) < C1:
                    violated.append("|C3| < C1")
                if not a >= 0:
                    violated.append("a >= 0")
            elif C1 == 0 and C2 > 0:
                if not abs(C3) < C2:
                    violated.append("|C3| < C2")
                if not b <= 0:
                    violated.append("b <= 0")
            else:
                violated.append("C1 > 0 or C2 > 0")
        else:
            violated.append("C1 > 0, C2 > 0")
    elif tag is FamilyTag.CASE9_EXP:
        q = 1 + 4 * (fam.params.a1 - fam.alpha)
        if not fam.alpha < 0:
            violated.append("alpha < 0")
        if not fam.C1 > 0:
            violated.append("C1 > 0")
        if fam.C3 != 0:
            violated.append("C3 = 0")
        if not fam.C2 + q / 3 > 0:
            violated.append("C2 + (1 + 4 (a1 - alpha)) / 3 > 0")
        if not (a >= 0):
            notes.append("conditions guarantee boundedness only for x > 0")
    elif tag is FamilyTag.POLYMER49:
        if fam.sign != 1:
            notes.append("the upper sign with large C3, C4 > 0 is the recommended choice")
        if not (fam.C3 > 0 and fam.C4 > 0):
            notes.append("C3 > 0 and C4 > 0 recommended")
        lo, hi = (a if math.isfinite(a) else -5.0), (b if math.isfinite(b) else 5.0)
        tt, xx = np.meshgrid(np.linspace(*t_range, 41), np.linspace(lo, hi, n_samples), indexing="ij")
        jet, ok = fam.jet_and_mask(tt, xx)
        if not np.all(ok):
            violated.append("square-root argument positive")
        elif np.min(jet.u) < 0 or np.min(jet.v) < 0:
            violated.append("u >= 0 and v >= 0 on the sampled box")
    else:
        lo, hi = (a if math.isfinite(a) else -5.0), (b if math.isfinite(b) else 5.0)
        tt, xx = np.meshgrid(np.linspace(*t_range, 41), np.linspace(lo, hi, n_samples), indexing="ij")
        _, ok = fam.jet_and_mask(tt, xx)
        if not np.all(ok):
            violated.append("defined on the sampled box")
        notes.append("no sign conditions are stated for this family")
    return AdmissibilityReport(not violated, tuple(violated), tuple(notes))


# -- operator pairing ------------------------------------------------------


def paired_operators(fam: SolutionFamily) -> list[tuple[SymmetryOperator, object]]:
    """Operators whose invariant surface conditions the family satisfies.

    Returns ``(operator, solution)`` pairs. The solution is usually ``fam``
    itself; for the polymer family it is ``fam`` moved to the scaled system
    on which the operator is defined.
    """
    p, tag = fam.params, fam.tag
    if tag in (FamilyTag.CASE1_EXPLICIT30, FamilyTag.CASE1_A2_NONZERO, FamilyTag.CASE1_A2_ZERO):
        return [(SymmetryOperator(OperatorKind.Q1, p), fam)]
    if tag is FamilyTag.CASE9_F0:
        return [(SymmetryOperator(OperatorKind.Q11_0, p, alpha=fam.alpha), fam)]
    if tag is FamilyTag.CASE9_EXP:
        s = fam.alpha - p.a1 - 0.25
        return [(SymmetryOperator(OperatorKind.Q11_0, p, alpha=fam.alpha, alpha2=fam.C1**2 * s), fam)]
    if tag is FamilyTag.CASE9_PHI0:
        # any alpha0 works; v carries f / psi with the operator's f = -alpha0 f
        ops = []
        for a0 in (1.0, -0.5):
            if (p.a1 + p.b2) - a0 == 0:
                continue
            ops.append((SymmetryOperator(OperatorKind.Q11, p, alpha0=a0, alpha1=-a0 * fam.alpha1,
                                         alpha2=-a0 * fam.alpha2), fam))
        return ops
    if tag is FamilyTag.POLYMER49:
        mapped = MappedSolution.through(fam, TransformId.SCALE_43)
        return [(SymmetryOperator(OperatorKind.Q6, mapped.params), mapped)]
    raise ValueError(tag)  # pragma: no cover
