"""Coefficients of the simplified SKT system and the transformations between them.

The system is::

    u_t = [(d1 + d12 v) u]_xx + u (a1 - b1 u - c1 v)
    v_t = [(d2 + d21 u) v]_xx + v (a2 - b2 u - c2 v)

Everything here is an immutable value or a pure function.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import asdict, dataclass, fields, replace
from typing import Callable, Mapping

import numpy as np

from .errors import ParameterError, ShapeError, TransformError

__all__ = [
    "SktParams",
    "ValidationResult",
    "validate_params",
    "reaction_terms",
    "is_constant_steady_state",
    "CaseEntry",
    "CASES",
    "VarMap",
    "TransformId",
    "apply_named_transform",
    "Scenario",
    "ScenarioReport",
    "classify_scenario",
    "is_case1_shape",
    "TIE_TOLERANCE",
]

PARAM_NAMES = ("a1", "a2", "b1", "b2", "c1", "c2", "d1", "d2", "d12", "d21")

# relative tolerance for the gamma = -a2 tie in scenario classification
TIE_TOLERANCE = 1e-12


@dataclass(frozen=True)
class SktParams:
    """The ten coefficients of the simplified SKT system.

    Unset coefficients default to zero, so a system is written by naming only
    the terms it has, e.g. ``SktParams(d1=1, d12=1, d21=1, a1=2, c1=1, b2=1)``.
    """

    a1: float = 0.0
    a2: float = 0.0
    b1: float = 0.0
    b2: float = 0.0
    c1: float = 0.0
    c2: float = 0.0
    d1: float = 0.0
    d2: float = 0.0
    d12: float = 0.0
    d21: float = 0.0

    def __post_init__(self):
        for f in fields(self):
            object.__setattr__(self, f.name, float(getattr(self, f.name)))

    def to_dict(self) -> dict[str, float]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Mapping[str, float]) -> "SktParams":
        unknown = sorted(set(data) - set(PARAM_NAMES))
        if unknown:
            raise ParameterError(f"unknown parameter keys: {', '.join(unknown)}")
        try:
            return cls(**{k: float(v) for k, v in data.items()})
        except (TypeError, ValueError) as exc:
            raise ParameterError(f"parameter values must be numbers: {exc}") from None

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "SktParams":
        data = json.loads(text)
        if not isinstance(data, dict):
            raise ParameterError("parameter JSON must be an object")
        return cls.from_dict(data)

    def is_finite(self) -> bool:
        return all(math.isfinite(getattr(self, k)) for k in PARAM_NAMES)


@dataclass(frozen=True)
class ValidationResult:
    violations: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok


# (identifier, predicate that must be nonzero)
_RESTRICTIONS: tuple[tuple[str, Callable[[SktParams], float]], ...] = (
    ("d12^2 + d21^2 != 0", lambda p: p.d12**2 + p.d21**2),
    ("d1^2 + d12^2 != 0", lambda p: p.d1**2 + p.d12**2),
    ("d2^2 + d21^2 != 0", lambda p: p.d2**2 + p.d21**2),
    ("d1^2 + d2^2 != 0", lambda p: p.d1**2 + p.d2**2),
    ("d12^2 + c1^2 != 0", lambda p: p.d12**2 + p.c1**2),
    ("d21^2 + b2^2 != 0", lambda p: p.d21**2 + p.b2**2),
)


def validate_params(p: SktParams) -> ValidationResult:
    """Check the six non-degeneracy restrictions.

    The first four keep both equations second order and genuinely
    cross-diffusive; the last two keep the species coupled. Coefficients are
    compared to exactly 0.0.

    Raises
    ------
    ParameterError
        If any coefficient is NaN or infinite.
    """
    if not p.is_finite():
        bad = [k for k in PARAM_NAMES if not math.isfinite(getattr(p, k))]
        raise ParameterError(f"non-finite coefficients: {', '.join(bad)}")
    return ValidationResult(tuple(name for name, expr in _RESTRICTIONS if expr(p) == 0.0))


def reaction_terms(p: SktParams, u, v):
    """Return ``(u (a1 - b1 u - c1 v), v (a2 - b2 u - c2 v))``."""
    return u * (p.a1 - p.b1 * u - p.c1 * v), v * (p.a2 - p.b2 * u - p.c2 * v)


def is_constant_steady_state(p: SktParams, u0, v0, tol: float = 1e-12) -> bool:
    if tol <= 0:
        raise ValueError("tol must be positive")
    f1, f2 = reaction_terms(p, u0, v0)
    return bool(abs(f1) <= tol and abs(f2) <= tol)


# ---------------------------------------------------------------------------
# Table of systems admitting conditional symmetries
# ---------------------------------------------------------------------------


def _case_params(case_id: int, q: Mapping[str, float]) -> SktParams:
    g = q.get
    if case_id == 1:
        return SktParams(d1=1, d12=g("d12"), d21=1, a1=g("a1"), c1=g("c1"),
                         a2=g("a2"), b2=g("b2"), c2=1)
    if case_id == 2:
        return SktParams(d1=1, d12=1, d21=1, a1=g("a1"), b1=g("b1"), c1=g("b2"),
                         a2=g("a2"), b2=g("b2"))
    if case_id == 3:
        return SktParams(d1=1, d12=g("d12"), d21=1, a1=g("a1"), c1=g("c1"), b2=g("b2"))
    if case_id == 4:
        return SktParams(d1=g("d1"), d12=1, d2=g("d2"), d21=1, c1=g("b2"),
                         a2=g("a2"), b2=g("b2"))
    if case_id == 5:
        d1, d2, b2 = g("d1"), g("d2"), g("b2")
        s = d1 + d2
        return SktParams(d1=d1, d12=1, d2=d2, d21=1, a1=-b2 * d1**2 / s, c1=b2,
                         a2=-b2 * d2**2 / s, b2=b2)
    if case_id == 6:
        a1, b2 = g("a1"), g("b2")
        return SktParams(d1=1, d12=1, d21=1, a1=a1, c1=-a1, a2=g("a2"), b2=b2, c2=a1 + b2)
    if case_id == 7:
        return SktParams(d1=1, d12=1, d21=1, a1=g("a1"), c1=g("b2"), a2=g("a2"), b2=g("b2"))
    if case_id == 8:
        a1, a2 = g("a1"), g("a2")
        k = a1 + 2 * a2
        return SktParams(d1=1, d12=1, d21=1, a1=a1, c1=-k, a2=a2, b2=-k, c2=-a2)
    if case_id == 9:
        return SktParams(d1=1, d12=1, d21=1, a1=g("a1"), c1=g("b2"), b2=g("b2"))
    if case_id == 10:
        b2 = g("b2")
        return SktParams(d1=1, d12=1, d21=1, a1=-b2, c1=b2, a2=g("a2"), b2=b2)
    if case_id == 11:
        b2 = g("b2")
        return SktParams(d1=1, d12=1, d21=1, a1=-b2, c1=b2, b2=b2)
    if case_id == 12:
        return SktParams(d1=1, d12=1, d2=-1, d21=1)
    raise KeyError(case_id)


_CASE_SPECS = {
    # case: (free coefficients, operator tags, extra inequalities)
    1: (("a1", "a2", "b2", "c1", "d12"), ("Q1",), None),
    2: (("a1", "a2", "b1", "b2"), ("Q2", "Q3_0"), lambda p: p.b1 != 0),
    3: (("a1", "b2", "c1", "d12"), ("Q4",), None),
    4: (("d1", "d2", "a2", "b2"), ("Q5",), lambda p: p.a2 + p.b2 * p.d2 != 0),
    5: (("d1", "d2", "b2"), ("Q6",), lambda p: p.b2 != 0 and p.d1 + p.d2 != 0),
    6: (("a1", "a2", "b2"), ("Q7_0", "Q7"), lambda p: p.a1 + p.b2 != 0),
    7: (("a1", "a2", "b2"), ("Q3_0", "Q8"), lambda p: p.a1 != -p.b2 and p.a2 != 0),
    8: (("a1", "a2"), ("Q9", "Q10"), lambda p: p.a2 != 0),
    9: (("a1", "b2"), ("Q11_0", "Q11"), lambda p: p.a1 + p.b2 != 0),
    10: (("a2", "b2"), ("Q8", "Q3"), lambda p: p.a2 != 0),
    11: (("b2",), ("Q11_0", "Q12"), None),
    12: ((), ("Q13",), None),
}


@dataclass(frozen=True)
class CaseEntry:
    """One row of the conditional-symmetry classification.

    ``free`` names the coefficients left arbitrary by the row; every other
    coefficient is fixed (possibly as a function of the free ones).
    """

    case_id: int
    free: tuple[str, ...]
    operators: tuple[str, ...]
    extra: Callable[[SktParams], bool] | None = None

    def params(self, **free: float) -> SktParams:
        missing = set(self.free) - set(free)
        extra = set(free) - set(self.free)
        if missing or extra:
            raise ParameterError(
                f"case {self.case_id} takes coefficients {self.free}; "
                f"missing {sorted(missing)}, unexpected {sorted(extra)}"
            )
        return _case_params(self.case_id, {k: float(v) for k, v in free.items()})

    def matches(self, p: SktParams, rtol: float = 1e-12) -> bool:
        """True if ``p`` has this row's structure and obeys every restriction."""
        if not p.is_finite() or not validate_params(p).ok:
            return False
        try:
            ref = self.params(**{k: getattr(p, k) for k in self.free})
        except (ArithmeticError, ParameterError):
            return False
        for k in PARAM_NAMES:
            a, b = getattr(p, k), getattr(ref, k)
            if not math.isclose(a, b, rel_tol=rtol, abs_tol=rtol * 1e-3):
                return False
        return self.extra is None or bool(self.extra(p))

    def draw(self, rng: np.random.Generator, low: float = 0.3, high: float = 1.5) -> SktParams:
        """Random admissible coefficients with magnitudes in ``[low, high]``.

        Diffusivities are drawn positive; every other free coefficient gets a
        random sign.
        """
        for _ in range(1000):
            q = {}
            for k in self.free:
                mag = rng.uniform(low, high)
                q[k] = mag if k.startswith("d") else mag * rng.choice((-1.0, 1.0))
            p = self.params(**q)
            if self.matches(p):
                return p
        raise RuntimeError(f"could not draw admissible parameters for case {self.case_id}")


CASES: dict[int, CaseEntry] = {
    cid: CaseEntry(cid, free, ops, extra) for cid, (free, ops, extra) in _CASE_SPECS.items()
}


# ---------------------------------------------------------------------------
# Equivalence and scale transformations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VarMap:
    """Linear change of variables between two SKT systems.

    New variables are ``t* = t_scale t``, ``x* = x_scale x``,
    ``u* = uu u + uv v`` and ``v* = vu u + vv v``. A solution of the source
    system becomes a solution of the target system under this map.
    """

    t_scale: float = 1.0
    x_scale: float = 1.0
    uu: float = 1.0
    uv: float = 0.0
    vu: float = 0.0
    vv: float = 1.0

    @property
    def field_matrix(self) -> np.ndarray:
        return np.array([[self.uu, self.uv], [self.vu, self.vv]])

    @property
    def swap(self) -> bool:
        return self.uu == 0 and self.vv == 0 and self.uv != 0 and self.vu != 0

    def then(self, other: "VarMap") -> "VarMap":
        """Composite map: apply ``self`` first, then ``other``."""
        m = other.field_matrix @ self.field_matrix
        return VarMap(
            self.t_scale * other.t_scale,
            self.x_scale * other.x_scale,
            m[0, 0], m[0, 1], m[1, 0], m[1, 1],
        )

    def inverse(self) -> "VarMap":
        m = np.linalg.inv(self.field_matrix)
        return VarMap(1.0 / self.t_scale, 1.0 / self.x_scale, m[0, 0], m[0, 1], m[1, 0], m[1, 1])

    def to_dict(self) -> dict[str, float]:
        return asdict(self)


class TransformId(str, enum.Enum):
    REDUCE_24_TO_23 = "Reduce24To23"
    REDUCE_39_TO_31 = "Reduce39To31"
    SCALE_43 = "Scale43"
    SCALE_76 = "Scale76"
    TABLE2_CASE2 = "Table2Case2"
    TABLE2_CASE5 = "Table2Case5"
    TABLE2_CASE7 = "Table2Case7"
    TABLE2_CASE8 = "Table2Case8"
    TABLE2_CASE10 = "Table2Case10"
    SWAP_50 = "Swap50"


def _require(cond: bool, message: str):
    if not cond:
        raise TransformError(message)


def _close(a: float, b: float) -> bool:
    return math.isclose(a, b, rel_tol=1e-12, abs_tol=1e-300)


def _reduce_24_to_23(p):
    _require(p.d2 == 0 and p.b1 == 0, "source must have d2 = b1 = 0")
    _require(p.d1 != 0, "d1 must be nonzero")
    _require(p.d21 != 0, "d21 must be nonzero")
    _require(p.c2 != 0, "c2 must be nonzero, otherwise the system has no canonical form")
    q = SktParams(d1=1, d12=p.d12 / p.c2, d21=1, c2=1, a1=p.a1 / p.d1, a2=p.a2 / p.d1,
                  c1=p.c1 / p.c2, b2=p.b2 / p.d21)
    return q, VarMap(t_scale=p.d1, uu=p.d21 / p.d1, vv=p.c2 / p.d1)


def _reduce_39_to_31(p):
    _require(p.d2 == 0 and p.b1 == 0 and p.c2 == 0 and p.a2 == 0,
             "source must have d2 = b1 = c2 = a2 = 0")
    _require(p.d1 != 0 and p.d12 != 0 and p.d21 != 0, "d1, d12, d21 must be nonzero")
    _require(p.c1 != 0, "inter-specific coefficient c1 must be nonzero")
    _require(_close(p.b2, p.c1 * p.d21 / p.d12), "requires b2 = c1 d21 / d12")
    ratio = p.c1 / p.d12
    _require(ratio > 0, "requires c1 / d12 > 0")
    lam = p.c1 * p.d1 / p.d12
    q = SktParams(d1=1, d12=1, d21=1, a1=p.a1 / lam, c1=1, b2=1)
    return q, VarMap(t_scale=lam, x_scale=math.sqrt(ratio), uu=p.d21 / p.d1, vv=p.d12 / p.d1)


def _scale_43(p):
    _require(p.b1 == 0 and p.c2 == 0, "source must have b1 = c2 = 0")
    _require(p.d12 != 0 and _close(p.d12, p.d21), "requires d12 = d21 != 0")
    _require(p.c1 != 0 and _close(p.c1, p.b2), "requires c1 = b2 != 0")
    ratio = p.c1 / p.d12
    _require(ratio > 0, "requires c1 / d12 > 0")
    q = SktParams(d1=ratio * p.d1, d2=ratio * p.d2, d12=1, d21=1, a1=p.a1, a2=p.a2, c1=1, b2=1)
    return q, VarMap(x_scale=math.sqrt(ratio), uu=p.c1, vv=p.c1)


def _scale_76(p):
    _require(p.d2 == 0 and p.c2 == 0, "source must have d2 = c2 = 0")
    _require(p.d1 != 0 and p.d12 != 0 and p.d21 != 0, "d1, d12, d21 must be nonzero")
    _require(_close(p.c1, p.d12 * p.b2 / p.d21), "requires c1 = d12 b2 / d21")
    b2 = p.b2 / p.d21
    q = SktParams(d1=1, d12=1, d21=1, a1=p.a1 / p.d1, a2=p.a2 / p.d1, b1=p.b1 / p.d21,
                  b2=b2, c1=b2)
    return q, VarMap(t_scale=p.d1, uu=p.d21 / p.d1, vv=p.d12 / p.d1)


def _rescale_time(p, designated: str, case_id: int):
    _require(CASES[case_id].matches(p, rtol=1e-9), f"parameters are not of case-{case_id} form")
    lam = abs(getattr(p, designated))
    _require(lam != 0, f"{designated} must be nonzero")
    q = replace(p, **{k: getattr(p, k) / lam for k in ("a1", "a2", "b1", "b2", "c1", "c2")})
    # exact +-1 for the designated coefficient
    q = replace(q, **{designated: math.copysign(1.0, getattr(p, designated))})
    return q, VarMap(t_scale=lam, x_scale=math.sqrt(lam))


def _swap(p):
    q = SktParams(a1=p.a2, a2=p.a1, b1=p.c2, c2=p.b1, b2=p.c1, c1=p.b2,
                  d1=p.d2, d2=p.d1, d12=p.d21, d21=p.d12)
    return q, VarMap(uu=0.0, uv=1.0, vu=1.0, vv=0.0)


_TRANSFORMS = {
    TransformId.REDUCE_24_TO_23: _reduce_24_to_23,
    TransformId.REDUCE_39_TO_31: _reduce_39_to_31,
    TransformId.SCALE_43: _scale_43,
    TransformId.SCALE_76: _scale_76,
    TransformId.TABLE2_CASE2: lambda p: _rescale_time(p, "b1", 2),
    TransformId.TABLE2_CASE5: lambda p: _rescale_time(p, "b2", 5),
    TransformId.TABLE2_CASE7: lambda p: _rescale_time(p, "a2", 7),
    TransformId.TABLE2_CASE8: lambda p: _rescale_time(p, "a2", 8),
    TransformId.TABLE2_CASE10: lambda p: _rescale_time(p, "a2", 10),
    TransformId.SWAP_50: _swap,
}


def apply_named_transform(tid: TransformId | str, p: SktParams) -> tuple[SktParams, VarMap]:
    """Apply one of the named reductions and return ``(new_params, var_map)``.

    Every solution ``(u, v)(t, x)`` of the ``p`` system is carried by
    ``var_map`` to a solution of the returned system.

    The Table-2 rescalings use ``t* = |k| t, x* = sqrt(|k|) x`` for the
    designated coefficient ``k``, which sends ``k`` to ``sign(k)`` exactly and
    keeps every diffusivity unchanged.

    Raises
    ------
    TransformError
        If ``p`` lacks the structure the transform needs or a divisor vanishes.
    """
    try:
        tid = TransformId(tid)
    except ValueError:
        raise TransformError(f"unknown transform {tid!r}") from None
    if not p.is_finite():
        raise ParameterError("non-finite coefficients")
    return _TRANSFORMS[tid](p)


# ---------------------------------------------------------------------------
# Competition scenarios of the canonical Case-1 system
# ---------------------------------------------------------------------------


class Scenario(str, enum.Enum):
    EXTINCTION = "Extinction"
    UNBOUNDED_GROWTH = "UnboundedGrowth"
    COEXISTENCE = "Coexistence"


@dataclass(frozen=True)
class ScenarioReport:
    gamma: float
    threshold: float
    d12_special: float | None
    classification: Scenario
    tie_tolerance: float

    def to_dict(self) -> dict:
        d = asdict(self)
        d["classification"] = self.classification.value
        return d


def is_case1_shape(p: SktParams) -> bool:
    return p.b1 == 0 and p.d2 == 0 and p.d1 == 1 and p.d21 == 1 and p.c2 == 1


def case1_gamma(p: SktParams) -> float:
    return p.a1 + p.b2 - p.a2 * (1 + p.c1 - p.b2 * p.d12)


def classify_scenario(p: SktParams, rel_tol: float = TIE_TOLERANCE) -> ScenarioReport:
    """Long-time fate of the species ``u`` for the canonical Case-1 system.

    The growth exponent of ``u`` is ``gamma + a2``: negative means extinction,
    positive means unbounded growth, zero means coexistence. The zero test is
    made with tolerance ``rel_tol`` times the magnitude of the terms entering
    ``gamma + a2``.
    """
    if not is_case1_shape(p):
        raise ShapeError("scenario classification needs b1 = d2 = 0 and d1 = d21 = c2 = 1")
    if p.a2 < 0:
        raise ShapeError("scenario classification needs a2 >= 0")
    gamma = case1_gamma(p)
    scale = abs(p.a1) + abs(p.b2) + abs(p.a2) * (1 + abs(p.c1) + abs(p.b2 * p.d12)) + abs(p.a2)
    eps = rel_tol * max(scale, 1e-300)
    gap = gamma + p.a2
    if gap < -eps:
        cls = Scenario.EXTINCTION
    elif gap > eps:
        cls = Scenario.UNBOUNDED_GROWTH
    else:
        cls = Scenario.COEXISTENCE
    special = (p.a2 * p.c1 - p.a1 - p.b2) / (p.a2 * p.b2) if p.a2 * p.b2 != 0 else None
    return ScenarioReport(gamma, -p.a2, special, cls, eps)
