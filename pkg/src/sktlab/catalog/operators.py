"""Conditional symmetry operators ``Q = d_t + xi d_x + eta1 d_u + eta2 d_v``.

Each operator kind is bound to the coefficients of the system it belongs to;
``operator_coefficients`` returns the coefficient functions together with
every partial derivative the determining equations use. All partials are
written out analytically.
"""

from __future__ import annotations

import enum
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from ..errors import DomainError, ParameterError
from ..model import CASES, SktParams
from .functions import f_jet

__all__ = [
    "OperatorKind",
    "SymmetryOperator",
    "CoefficientBundle",
    "operator_coefficients",
    "domain_mask",
]

# relative size below which a denominator counts as zero
DENOMINATOR_GUARD = 1e-30


class OperatorKind(str, enum.Enum):
    Q1 = "Q1"
    Q2 = "Q2"
    Q3_0 = "Q3_0"
    Q3 = "Q3"
    Q4 = "Q4"
    Q5 = "Q5"
    Q6 = "Q6"
    Q7_0 = "Q7_0"
    Q7 = "Q7"
    Q8 = "Q8"
    Q9 = "Q9"
    Q10 = "Q10"
    Q11_0 = "Q11_0"
    Q11 = "Q11"
    Q12 = "Q12"
    Q13 = "Q13"


# kinds whose eta2 contains f(x)/u
_F_OVER_U = {OperatorKind.Q3_0, OperatorKind.Q3, OperatorKind.Q11_0, OperatorKind.Q11, OperatorKind.Q12}


@dataclass(frozen=True)
class SymmetryOperator:
    """An operator kind with its free constants, bound to a system.

    ``alpha`` and ``alpha0`` are the arbitrary constants of the operator;
    ``alpha1`` and ``alpha2`` parametrize ``f`` (see :func:`eval_f`).
    """

    kind: OperatorKind
    params: SktParams
    alpha: float = 0.0
    alpha0: float = 0.0
    alpha1: float = 0.0
    alpha2: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "kind", OperatorKind(self.kind))
        for name in ("alpha", "alpha0", "alpha1", "alpha2"):
            object.__setattr__(self, name, float(getattr(self, name)))
        self.check()

    @property
    def beta(self) -> float:
        return self.params.a1 + self.params.b2

    def check(self):
        """Enforce the operator-specific restrictions."""
        p, k = self.params, self.kind
        if k is OperatorKind.Q5 and p.a2 + p.b2 * p.d2 == 0:
            raise ParameterError("Q5 requires a2 + b2 d2 != 0")
        if k is OperatorKind.Q6 and (p.b2 == 0 or p.d1 + p.d2 == 0):
            raise ParameterError("Q6 requires b2 != 0 and d1 + d2 != 0")
        if k in (OperatorKind.Q7_0, OperatorKind.Q7, OperatorKind.Q11) and self.beta == 0:
            raise ParameterError(f"{k.value} requires beta = a1 + b2 != 0")
        if k in (OperatorKind.Q9, OperatorKind.Q10, OperatorKind.Q3) and p.a2 == 0:
            raise ParameterError(f"{k.value} requires a2 != 0")

    def cases(self) -> tuple[int, ...]:
        """Ids of the classification rows this operator and its system belong to."""
        return tuple(
            cid for cid, e in CASES.items() if self.kind.value in e.operators and e.matches(self.params)
        )

    def to_dict(self) -> dict:
        d = asdict(self)
        d["kind"] = self.kind.value
        d["params"] = self.params.to_dict()
        return d

    @classmethod
    def from_dict(cls, data: dict) -> "SymmetryOperator":
        allowed = {"kind", "params", "alpha", "alpha0", "alpha1", "alpha2"}
        unknown = sorted(set(data) - allowed)
        if unknown:
            raise ParameterError(f"unknown operator keys: {', '.join(unknown)}")
        kw = dict(data)
        kw["params"] = SktParams.from_dict(data.get("params", {}))
        try:
            kw["kind"] = OperatorKind(data["kind"])
        except (KeyError, ValueError):
            raise ParameterError(f"unknown operator kind {data.get('kind')!r}") from None
        return cls(**kw)


_BUNDLE_FIELDS = (
    "xi", "xi_t", "xi_x", "xi_xx",
    "eta1", "eta1_u", "eta1_v", "eta1_uu", "eta1_uv", "eta1_vv",
    "eta1_x", "eta1_xu", "eta1_xv", "eta1_xx", "eta1_t",
    "eta2", "eta2_u", "eta2_v", "eta2_uu", "eta2_uv", "eta2_vv",
    "eta2_x", "eta2_xu", "eta2_xv", "eta2_xx", "eta2_t",
)


@dataclass
class CoefficientBundle:
    """Coefficients ``xi, eta1, eta2`` and their partials at a batch of points.

    Entries not set by an operator are zero arrays.
    """

    xi: np.ndarray = field(default=None)
    xi_t: np.ndarray = field(default=None)
    xi_x: np.ndarray = field(default=None)
    xi_xx: np.ndarray = field(default=None)
    eta1: np.ndarray = field(default=None)
    eta1_u: np.ndarray = field(default=None)
    eta1_v: np.ndarray = field(default=None)
    eta1_uu: np.ndarray = field(default=None)
    eta1_uv: np.ndarray = field(default=None)
    eta1_vv: np.ndarray = field(default=None)
    eta1_x: np.ndarray = field(default=None)
    eta1_xu: np.ndarray = field(default=None)
    eta1_xv: np.ndarray = field(default=None)
    eta1_xx: np.ndarray = field(default=None)
    eta1_t: np.ndarray = field(default=None)
    eta2: np.ndarray = field(default=None)
    eta2_u: np.ndarray = field(default=None)
    eta2_v: np.ndarray = field(default=None)
    eta2_uu: np.ndarray = field(default=None)
    eta2_uv: np.ndarray = field(default=None)
    eta2_vv: np.ndarray = field(default=None)
    eta2_x: np.ndarray = field(default=None)
    eta2_xu: np.ndarray = field(default=None)
    eta2_xv: np.ndarray = field(default=None)
    eta2_xx: np.ndarray = field(default=None)
    eta2_t: np.ndarray = field(default=None)

    @classmethod
    def zeros(cls, shape) -> "CoefficientBundle":
        return cls(**{name: np.zeros(shape) for name in _BUNDLE_FIELDS})

    def set(self, **values):
        for k, val in values.items():
            setattr(self, k, np.broadcast_to(np.asarray(val, dtype=float), self.xi.shape).copy())
        return self

    def as_dict(self) -> dict[str, np.ndarray]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def _time_factor(op: SymmetryOperator, t):
    """Rational time factor of Q3 and Q11 with its derivative and denominator.

    Q3:  a2 e^{a2 t} / (alpha0 e^{a2 t} + a2 - alpha0)
    Q11: beta e^{beta t} / (alpha0 e^{beta t} + beta - alpha0)
    """
    r = op.params.a2 if op.kind is OperatorKind.Q3 else op.beta
    e = np.exp(r * t)
    den = op.alpha0 * e + r - op.alpha0
    g = r * e / den
    g_t = r * r * e * (r - op.alpha0) / den**2
    return g, g_t, den, e


def domain_mask(op: SymmetryOperator, t, x, u, v) -> np.ndarray:
    """Boolean mask of points where the operator's coefficients are defined."""
    t, x, u, v = np.broadcast_arrays(*(np.asarray(a, dtype=float) for a in (t, x, u, v)))
    ok = np.isfinite(t) & np.isfinite(x) & np.isfinite(u) & np.isfinite(v)
    if op.kind in _F_OVER_U:
        ok &= u != 0
    if op.kind in (OperatorKind.Q3, OperatorKind.Q11):
        r = op.params.a2 if op.kind is OperatorKind.Q3 else op.beta
        e = np.exp(r * t)
        den = op.alpha0 * e + r - op.alpha0
        scale = np.maximum.reduce([np.abs(op.alpha0 * e), np.full_like(e, abs(r)), np.full_like(e, abs(op.alpha0))])
        ok &= np.abs(den) > DENOMINATOR_GUARD * scale
    if op.kind is OperatorKind.Q12:
        ok &= t != 0
    return ok


def operator_coefficients(op: SymmetryOperator, t, x, u, v) -> CoefficientBundle:
    """Evaluate ``xi, eta1, eta2`` and their partials at the given points.

    Inputs broadcast against each other.

    Raises
    ------
    DomainError
        If any point hits a vanishing denominator; the error names it.
    """
    t, x, u, v = np.broadcast_arrays(*(np.asarray(a, dtype=float) for a in (t, x, u, v)))
    ok = domain_mask(op, t, x, u, v)
    if not np.all(ok):
        i = int(np.flatnonzero(~ok.ravel())[0])
        loc = (t.ravel()[i], x.ravel()[i], u.ravel()[i], v.ravel()[i])
        if op.kind in _F_OVER_U and loc[2] == 0:
            expr = "u"
        elif op.kind is OperatorKind.Q12:
            expr = "t"
        else:
            expr = "alpha0 exp(r t) + r - alpha0"
        raise DomainError(f"{op.kind.value} undefined: {expr} vanishes at {loc}", expr, loc)

    p, k = op.params, op.kind
    B = CoefficientBundle.zeros(t.shape)
    K = OperatorKind

    if k is K.Q1:
        gamma = p.a1 + p.b2 * (p.a2 * p.d12 + 1) - p.a2 * (p.c1 + 1)
        B.set(eta1=u * (v + gamma), eta1_u=v + gamma, eta1_v=u, eta1_uv=1.0,
              eta2=v * (p.a2 - v), eta2_v=p.a2 - 2 * v, eta2_vv=-2.0)
    elif k is K.Q2:
        B.set(eta2=p.a2 * v, eta2_v=p.a2)
    elif k in (K.Q3_0, K.Q11_0):
        rate = p.a2 if k is K.Q3_0 else 2 * op.alpha
        e = np.exp(rate * t)
        f = f_jet(p.b2, op.alpha1, op.alpha2, x)
        if k is K.Q11_0:
            B.set(eta1=op.alpha * u, eta1_u=op.alpha)
        B.set(eta2=e * f.f / u, eta2_u=-e * f.f / u**2, eta2_uu=2 * e * f.f / u**3,
              eta2_x=e * f.d / u, eta2_xu=-e * f.d / u**2, eta2_xx=e * f.dd / u,
              eta2_t=rate * e * f.f / u)
    elif k in (K.Q3, K.Q11):
        g, g_t, _, e = _time_factor(op, t)
        f = f_jet(p.b2, op.alpha1, op.alpha2, x)
        # Q3 carries f/u, Q11 carries e^{beta t} f/u
        w = np.ones_like(t) if k is K.Q3 else e
        w_t = np.zeros_like(t) if k is K.Q3 else op.beta * e
        if k is K.Q11:
            B.set(eta1=op.beta * u, eta1_u=op.beta)
        inner = op.alpha0 * (1 + v) + w * f.f / u
        B.set(eta2=g * inner, eta2_v=g * op.alpha0,
              eta2_u=-g * w * f.f / u**2, eta2_uu=2 * g * w * f.f / u**3,
              eta2_x=g * w * f.d / u, eta2_xu=-g * w * f.d / u**2, eta2_xx=g * w * f.dd / u,
              eta2_t=g_t * inner + g * w_t * f.f / u)
    elif k is K.Q4:
        B.set(eta1=op.alpha * u, eta1_u=op.alpha)
    elif k is K.Q5:
        mu = p.a2 + p.b2 * p.d2
        B.set(eta1=mu * (p.d2 + u), eta1_u=mu, eta2=mu * v, eta2_v=mu)
    elif k is K.Q6:
        s = p.d1 + p.d2
        c = p.b2 * p.d1 * p.d2 / s
        B.set(eta1=c * (p.d2**2 / s + u), eta1_u=c, eta2=c * (p.d1**2 / s + v), eta2_v=c)
    elif k in (K.Q7_0, K.Q7):
        b = op.beta
        const = 0.0 if k is K.Q7_0 else b + p.a2
        B.set(eta1=b * u * (1 + v), eta1_u=b * (1 + v), eta1_v=b * u, eta1_uv=b,
              eta2=const + p.a2 * v - b * v**2, eta2_v=p.a2 - 2 * b * v, eta2_vv=-2 * b)
    elif k is K.Q8:
        B.set(eta1=op.alpha * u, eta1_u=op.alpha, eta2=p.a2 * v, eta2_v=p.a2)
    elif k is K.Q9:
        B.set(eta1=-2 * p.a2 * u, eta1_u=-2 * p.a2, eta2=-p.a2 * (1 + v), eta2_v=-p.a2)
    elif k is K.Q10:
        B.set(eta1=-p.a2 * u * (3 + v), eta1_u=-p.a2 * (3 + v), eta1_v=-p.a2 * u, eta1_uv=-p.a2,
              eta2=p.a2 * (1 + v) * v, eta2_v=p.a2 * (1 + 2 * v), eta2_vv=2 * p.a2)
    elif k is K.Q12:
        f = f_jet(p.b2, op.alpha1, op.alpha2, x)
        B.set(eta2=(1 + v) / t + f.f / (t * u), eta2_v=1 / t,
              eta2_u=-f.f / (t * u**2), eta2_uu=2 * f.f / (t * u**3),
              eta2_x=f.d / (t * u), eta2_xu=-f.d / (t * u**2), eta2_xx=f.dd / (t * u),
              eta2_t=-(1 + v) / t**2 - f.f / (t**2 * u))
    elif k is K.Q13:
        B.set(eta1=op.alpha, eta2=op.alpha)
    else:  # pragma: no cover
        raise ValueError(k)
    return B
