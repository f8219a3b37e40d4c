"""Method-of-lines finite-difference integrator for the SKT system on an interval.

The cross-diffusion terms are discretized in non-divergence product form:
``w1 = (d1 + d12 v) u`` is formed at the nodes and its central second
difference is taken, likewise for ``w2 = (d2 + d21 u) v``. Time stepping is
classical RK4 with a CFL-limited step.
"""

from __future__ import annotations

import csv
import enum
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .catalog.families import SolutionFamily
from .catalog.jets import Jet2
from .errors import DomainError, ParameterError, ShapeError
from .model import Scenario, SktParams, classify_scenario, reaction_terms, validate_params

__all__ = [
    "Grid1D", "FieldState", "BoundaryKind", "BoundarySpec", "TimeSpec", "Termination", "Trajectory",
    "ConstantSolution", "integrate", "stable_dt", "initial_state", "ConvergenceReport",
    "convergence_study", "AsymptoticsReport", "asymptotic_probe", "BvpReport", "bvp_interval",
    "dirichlet_bvp_run",
]


@dataclass(frozen=True)
class Grid1D:
    """Uniform grid of ``n`` nodes on ``[x_min, x_max]``, endpoints included."""

    x_min: float
    x_max: float
    n: int

    def __post_init__(self):
        if not (math.isfinite(self.x_min) and math.isfinite(self.x_max) and self.x_max > self.x_min):
            raise ShapeError("grid needs finite x_min < x_max")
        if int(self.n) < 3:
            raise ShapeError("grid needs at least 3 nodes")
        object.__setattr__(self, "n", int(self.n))

    @property
    def h(self) -> float:
        return (self.x_max - self.x_min) / (self.n - 1)

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n)

    def refined(self) -> "Grid1D":
        """The grid with ``h`` halved."""
        return Grid1D(self.x_min, self.x_max, 2 * self.n - 1)

    def to_dict(self) -> dict:
        return {"x_min": self.x_min, "x_max": self.x_max, "n": self.n}


@dataclass(frozen=True)
class FieldState:
    """Node values of ``u`` and ``v`` at time ``t``."""

    t: float
    u: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        u = np.array(self.u, dtype=float)
        v = np.array(self.v, dtype=float)
        if u.ndim != 1 or u.shape != v.shape:
            raise ShapeError("u and v must be 1D arrays of equal length")
        if not (np.all(np.isfinite(u)) and np.all(np.isfinite(v))):
            raise ShapeError("field state has non-finite entries")
        u.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "t", float(self.t))


class BoundaryKind(str, enum.Enum):
    DIRICHLET_FROM_FAMILY = "DirichletFromFamily"
    DIRICHLET_CONSTANT = "DirichletConstant"
    NEUMANN_ZERO = "NeumannZero"
    PERIODIC = "Periodic"


@dataclass(frozen=True)
class BoundarySpec:
    """Boundary treatment.

    ``first_order`` applies to ``DirichletFromFamily`` only: instead of
    overwriting the end nodes with the exact trace, they are set from the
    exact boundary slope by a one-sided first-order difference. It exists as a
    negative control for convergence studies.
    """

    kind: BoundaryKind
    family: object = None
    ua: float = 0.0
    ub: float = 0.0
    va: float = 0.0
    vb: float = 0.0
    first_order: bool = False

    def __post_init__(self):
        object.__setattr__(self, "kind", BoundaryKind(self.kind))
        if self.kind is BoundaryKind.DIRICHLET_FROM_FAMILY and self.family is None:
            raise ShapeError("DirichletFromFamily needs a family")
        if self.first_order and self.kind is not BoundaryKind.DIRICHLET_FROM_FAMILY:
            raise ShapeError("first_order applies to DirichletFromFamily only")

    @classmethod
    def from_family(cls, family, first_order: bool = False) -> "BoundarySpec":
        return cls(BoundaryKind.DIRICHLET_FROM_FAMILY, family=family, first_order=first_order)

    @classmethod
    def constant(cls, ua, ub, va, vb) -> "BoundarySpec":
        return cls(BoundaryKind.DIRICHLET_CONSTANT, ua=ua, ub=ub, va=va, vb=vb)

    @classmethod
    def neumann(cls) -> "BoundarySpec":
        return cls(BoundaryKind.NEUMANN_ZERO)

    @classmethod
    def periodic(cls) -> "BoundarySpec":
        return cls(BoundaryKind.PERIODIC)

    def to_dict(self) -> dict:
        d = {"kind": self.kind.value}
        if self.kind is BoundaryKind.DIRICHLET_CONSTANT:
            d.update(ua=self.ua, ub=self.ub, va=self.va, vb=self.vb)
        if self.kind is BoundaryKind.DIRICHLET_FROM_FAMILY:
            d["family"] = getattr(self.family, "tag", "solution")
            d["family"] = getattr(d["family"], "value", d["family"])
            d["first_order"] = self.first_order
        return d


@dataclass(frozen=True)
class TimeSpec:
    """Time horizon and step control."""

    t_end: float
    cfl_factor: float = 0.2
    max_steps: int = 10_000_000
    blowup_threshold: float = 1e12
    store_every: int = 1

    def __post_init__(self):
        if not (math.isfinite(self.t_end) and self.t_end > 0):
            raise ShapeError("t_end must be positive and finite")
        if not self.cfl_factor > 0:
            raise ShapeError("cfl_factor must be positive")
        if int(self.max_steps) < 1 or int(self.store_every) < 1:
            raise ShapeError("max_steps and store_every must be positive")

    def to_dict(self) -> dict:
        return {"t_end": self.t_end, "cfl_factor": self.cfl_factor, "max_steps": self.max_steps,
                "blowup_threshold": self.blowup_threshold, "store_every": self.store_every}


class Termination(str, enum.Enum):
    COMPLETED = "Completed"
    BLOWUP = "BlowupDetected"
    MAX_STEPS = "MaxSteps"


@dataclass
class Trajectory:
    """Stored states of a run.

    ``negative_diffusivity`` counts stored states having a node with
    ``d1 + d12 v < 0`` (key ``"u"``) or ``d2 + d21 u < 0`` (key ``"v"``).
    """

    grid: Grid1D
    params: SktParams
    states: list[FieldState]
    termination: Termination
    steps: int
    negative_diffusivity: dict = field(default_factory=lambda: {"u": 0, "v": 0})

    @property
    def times(self) -> np.ndarray:
        return np.array([s.t for s in self.states])

    @property
    def final(self) -> FieldState:
        return self.states[-1]

    def u_array(self) -> np.ndarray:
        return np.stack([s.u for s in self.states])

    def v_array(self) -> np.ndarray:
        return np.stack([s.v for s in self.states])

    def to_csv(self) -> str:
        """Long-format CSV with columns ``t, x, u, v``."""
        from .verify.report import fmt17

        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("t", "x", "u", "v"))
        x = self.grid.x
        for s in self.states:
            for xi, ui, vi in zip(x, s.u, s.v):
                w.writerow((fmt17(s.t), fmt17(xi), fmt17(ui), fmt17(vi)))
        return buf.getvalue()

    def metadata(self) -> dict:
        return {"grid": self.grid.to_dict(), "params": self.params.to_dict(),
                "termination": self.termination.value, "steps": self.steps,
                "stored_states": len(self.states), "negative_diffusivity": dict(self.negative_diffusivity)}

    def to_json(self) -> str:
        return json.dumps(self.metadata(), indent=2, sort_keys=True)


@dataclass(frozen=True)
class ConstantSolution:
    """A constant state; an exact solution when it is a root of the reactions."""

    u0: float
    v0: float
    tag: str = "Constant"

    def jet_and_mask(self, t, x):
        t, x = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(x, dtype=float))
        z = np.zeros(t.shape)
        return Jet2(z + self.u0, z + self.v0, z, z, z, z, z, z), np.ones(t.shape, dtype=bool)


def _trace_at(fam, t, x):
    jet, ok = fam.jet_and_mask(t, x)
    if not np.all(ok):
        i = int(np.flatnonzero(~np.ravel(ok))[0])
        loc = (float(np.ravel(t)[i]), float(np.ravel(x)[i]))
        raise DomainError(f"solution undefined at (t, x) = {loc}", "family trace", loc)
    return jet


def _trace(fam, t: float, x):
    x = np.asarray(x, dtype=float)
    return _trace_at(fam, np.full(x.shape, float(t)), x)


def initial_state(fam, grid: Grid1D, t0: float = 0.0) -> FieldState:
    """The trace of an exact solution on ``grid`` at ``t0``."""
    jet = _trace(fam, t0, grid.x)
    return FieldState(t0, jet.u, jet.v)


def stable_dt(p: SktParams, u, v, h: float, cfl: float) -> float:
    """``cfl h^2 / max_node(|d1 + d12 v| + |d2 + d21 u|)``."""
    dmax = float(np.max(np.abs(p.d1 + p.d12 * v) + np.abs(p.d2 + p.d21 * u)))
    return math.inf if dmax == 0 else cfl * h * h / dmax


class _Stepper:
    """Right-hand side and boundary imposition for one run."""

    def __init__(self, p: SktParams, bc: BoundarySpec, grid: Grid1D):
        self.p, self.bc, self.grid = p, bc, grid
        self.h2 = grid.h**2
        self.xb = np.array([grid.x_min, grid.x_max])

    def _lap(self, w):
        out = np.empty_like(w)
        out[1:-1] = w[2:] - 2 * w[1:-1] + w[:-2]
        kind = self.bc.kind
        if kind is BoundaryKind.NEUMANN_ZERO:
            # mirror ghost node
            out[0] = 2 * (w[1] - w[0])
            out[-1] = 2 * (w[-2] - w[-1])
        elif kind is BoundaryKind.PERIODIC:
            # node n-1 duplicates node 0
            out[0] = w[1] - 2 * w[0] + w[-2]
            out[-1] = out[0]
        else:
            out[0] = out[-1] = 0.0
        return out / self.h2

    def rhs(self, u, v):
        p = self.p
        f1, f2 = reaction_terms(p, u, v)
        du = self._lap((p.d1 + p.d12 * v) * u) + f1
        dv = self._lap((p.d2 + p.d21 * u) * v) + f2
        return du, dv

    def stage_data(self, times):
        """Boundary data at the given times, one family evaluation for all."""
        if self.bc.kind is not BoundaryKind.DIRICHLET_FROM_FAMILY:
            return [None] * len(times)
        tt = np.repeat(np.asarray(times, dtype=float), 2)
        jet = _trace_at(self.bc.family, tt, np.tile(self.xb, len(times)))
        if self.bc.first_order:
            return [(jet.u_x[2 * i:2 * i + 2], jet.v_x[2 * i:2 * i + 2]) for i in range(len(times))]
        return [(jet.u[2 * i:2 * i + 2], jet.v[2 * i:2 * i + 2]) for i in range(len(times))]

    def impose(self, u, v, data):
        kind = self.bc.kind
        if kind is BoundaryKind.DIRICHLET_CONSTANT:
            u[0], u[-1], v[0], v[-1] = self.bc.ua, self.bc.ub, self.bc.va, self.bc.vb
        elif kind is BoundaryKind.DIRICHLET_FROM_FAMILY:
            bu, bv = data
            if self.bc.first_order:
                h = self.grid.h
                u[0], u[-1] = u[1] - h * bu[0], u[-2] + h * bu[1]
                v[0], v[-1] = v[1] - h * bv[0], v[-2] + h * bv[1]
            else:
                u[0], u[-1] = bu
                v[0], v[-1] = bv
        elif kind is BoundaryKind.PERIODIC:
            u[-1], v[-1] = u[0], v[0]


def integrate(p: SktParams, init: FieldState, bc: BoundarySpec, ts: TimeSpec, grid: Grid1D) -> Trajectory:
    """Advance the system from ``init`` to ``ts.t_end`` with RK4.

    Each step uses ``dt = cfl h^2 / max(|d1 + d12 v| + |d2 + d21 u|)``,
    shortened to land on ``t_end``. Boundary values are imposed after every
    stage at the stage time. The run stops early with ``BlowupDetected``
    when a value exceeds ``blowup_threshold`` or turns non-finite.

    Raises
    ------
    ParameterError
        If ``p`` violates the model restrictions.
    ShapeError
        If ``init`` does not match ``grid``.
    """
    check = validate_params(p)
    if not check.ok:
        raise ParameterError("; ".join(check.violations))
    if init.u.shape != (grid.n,):
        raise ShapeError(f"initial state has {init.u.size} nodes, grid has {grid.n}")
    if not init.t < ts.t_end:
        raise ShapeError("initial time must precede t_end")
    st = _Stepper(p, bc, grid)
    u, v = init.u.copy(), init.v.copy()
    t = init.t
    st.impose(u, v, st.stage_data([t])[0])
    states = [FieldState(t, u, v)]
    neg = {"u": 0, "v": 0}
    _flag(p, u, v, neg)
    reason, steps = Termination.COMPLETED, 0
    while t < ts.t_end:
        if steps >= ts.max_steps:
            reason = Termination.MAX_STEPS
            break
        dt = min(stable_dt(p, u, v, grid.h, ts.cfl_factor), ts.t_end - t)
        last = dt >= ts.t_end - t
        t_new = ts.t_end if last else t + dt
        bh, b1 = st.stage_data([t + 0.5 * dt, t_new])
        with np.errstate(all="ignore"):
            k1u, k1v = st.rhs(u, v)
            u2, v2 = u + 0.5 * dt * k1u, v + 0.5 * dt * k1v
            st.impose(u2, v2, bh)
            k2u, k2v = st.rhs(u2, v2)
            u3, v3 = u + 0.5 * dt * k2u, v + 0.5 * dt * k2v
            st.impose(u3, v3, bh)
            k3u, k3v = st.rhs(u3, v3)
            u4, v4 = u + dt * k3u, v + dt * k3v
            st.impose(u4, v4, b1)
            k4u, k4v = st.rhs(u4, v4)
            u = u + dt / 6 * (k1u + 2 * k2u + 2 * k3u + k4u)
            v = v + dt / 6 * (k1v + 2 * k2v + 2 * k3v + k4v)
        t = t_new
        steps += 1
        blown = not (np.all(np.isfinite(u)) and np.all(np.isfinite(v)))
        if not blown:
            st.impose(u, v, b1)
            blown = max(np.max(np.abs(u)), np.max(np.abs(v))) > ts.blowup_threshold
        if blown:
            reason = Termination.BLOWUP
            break
        if steps % ts.store_every == 0 or t >= ts.t_end:
            states.append(FieldState(t, u, v))
            _flag(p, u, v, neg)
    if reason is not Termination.COMPLETED and states[-1].t != t and np.all(np.isfinite(u)) and np.all(np.isfinite(v)):
        states.append(FieldState(t, u, v))
        _flag(p, u, v, neg)
    return Trajectory(grid, p, states, reason, steps, neg)


def _flag(p, u, v, neg):
    if np.any(p.d1 + p.d12 * v < 0):
        neg["u"] += 1
    if np.any(p.d2 + p.d21 * u < 0):
        neg["v"] += 1


# -- convergence -----------------------------------------------------------


@dataclass(frozen=True)
class ConvergenceReport:
    """Errors at ``t_end`` per grid and observed orders between consecutive grids.

    ``orders_linf[k] = log2(linf[k] / linf[k + 1])``; it is ``nan`` when the
    errors are at rounding level, in which case ``exact`` is set.
    """

    n: tuple[int, ...]
    h: tuple[float, ...]
    linf: tuple[float, ...]
    l2: tuple[float, ...]
    orders_linf: tuple[float, ...]
    orders_l2: tuple[float, ...]
    exact: bool
    first_order_boundary: bool = False

    def order_in(self, lo: float = 1.8, hi: float = 2.2) -> bool:
        return bool(self.orders_linf) and all(lo <= o <= hi for o in self.orders_linf)

    @property
    def monotone(self) -> bool:
        return all(b <= a for a, b in zip(self.linf, self.linf[1:]))

    def to_dict(self) -> dict:
        return {"n": list(self.n), "h": list(self.h), "linf": list(self.linf), "l2": list(self.l2),
                "orders_linf": list(self.orders_linf), "orders_l2": list(self.orders_l2),
                "exact": self.exact, "first_order_boundary": self.first_order_boundary}

    def to_csv(self) -> str:
        from .verify.report import fmt17

        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("n", "h", "linf", "l2", "order_linf", "order_l2"))
        for k in range(len(self.n)):
            o1 = self.orders_linf[k - 1] if k else None
            o2 = self.orders_l2[k - 1] if k else None
            w.writerow((self.n[k], fmt17(self.h[k]), fmt17(self.linf[k]), fmt17(self.l2[k]),
                        fmt17(o1), fmt17(o2)))
        return buf.getvalue()


# errors below this count as exact reproduction
EXACT_ERROR = 1e-12


def _orders(errs):
    out = []
    for a, b in zip(errs, errs[1:]):
        out.append(math.log2(a / b) if a > EXACT_ERROR and b > EXACT_ERROR else math.nan)
    return tuple(out)


def convergence_study(p: SktParams, fam, grids, t_end: float, cfl_factor: float = 0.2,
                      first_order_boundary: bool = False) -> ConvergenceReport:
    """Manufactured-solution errors of :func:`integrate` against an exact solution.

    Each run starts from the family trace at ``t = 0`` with boundary data
    from the family.

    Raises
    ------
    DomainError
        If the family is undefined anywhere on the space-time box.
    """
    grids = list(grids)
    if len(grids) < 2:
        raise ShapeError("convergence study needs at least two grids")
    box_t = np.linspace(0.0, t_end, 21)
    for g in grids:
        tt, xx = np.meshgrid(box_t, g.x, indexing="ij")
        _, ok = fam.jet_and_mask(tt, xx)
        if not np.all(ok):
            raise DomainError("family not admissible on the space-time box", "family", None)
    bc = BoundarySpec.from_family(fam, first_order=first_order_boundary)
    linf, l2 = [], []
    for g in grids:
        traj = integrate(p, initial_state(fam, g), bc, TimeSpec(t_end, cfl_factor, store_every=10**9), g)
        if traj.termination is not Termination.COMPLETED:
            raise DomainError(f"run on n = {g.n} ended with {traj.termination.value}", "integrate", None)
        jet = _trace(fam, t_end, g.x)
        e = np.concatenate([traj.final.u - jet.u, traj.final.v - jet.v])
        linf.append(float(np.max(np.abs(e))))
        l2.append(float(math.sqrt(g.h * np.sum(e * e))))
    exact = max(linf) <= EXACT_ERROR
    return ConvergenceReport(tuple(g.n for g in grids), tuple(g.h for g in grids), tuple(linf), tuple(l2),
                             _orders(linf), _orders(l2), exact, first_order_boundary)


# -- asymptotics -----------------------------------------------------------


@dataclass(frozen=True)
class AsymptoticsReport:
    """Probe series of a closed-form solution and the resulting verdict."""

    times: tuple[float, ...]
    sup_u: tuple[float, ...]
    dist_v_to_a2: tuple[float, ...]
    verdict: Scenario
    predicted: Scenario
    profile_error: float

    @property
    def agrees(self) -> bool:
        return self.verdict is self.predicted

    def to_dict(self) -> dict:
        return {"verdict": self.verdict.value, "predicted": self.predicted.value, "agrees": self.agrees,
                "profile_error": self.profile_error, "times": list(self.times),
                "sup_u": list(self.sup_u), "dist_v_to_a2": list(self.dist_v_to_a2)}


def asymptotic_probe(p: SktParams, fam: SolutionFamily, T: float, x_range=(-3.0, 3.0),
                     n_x: int = 121, n_t: int = 41) -> AsymptoticsReport:
    """Long-time verdict for a Case-1 explicit solution from its closed form.

    Extinction needs ``sup u(T) <= 1e-3 sup u(0)`` and
    ``max |v(T) - a2| <= 1e-3 a2``; unbounded growth needs
    ``sup u(T) >= 1e3 sup u(0)``; otherwise the verdict is coexistence and
    ``profile_error`` is the relative deviation of ``u(T)`` from
    ``C1 exp(sqrt(b2) x) + C2 exp(-sqrt(b2) x)``.
    """
    from .catalog.families import FamilyTag

    if getattr(fam, "tag", None) is not FamilyTag.CASE1_EXPLICIT30:
        raise ShapeError("asymptotic_probe needs a Case1_Explicit30 family")
    predicted = classify_scenario(p).classification
    x = np.linspace(*x_range, n_x)
    times = np.linspace(0.0, T, n_t)
    sup_u, dist_v = [], []
    for t in times:
        jet, ok = fam.jet_and_mask(np.full_like(x, t), x)
        if not np.all(ok):
            raise DomainError(f"family undefined at t = {t}", "family", (float(t), None))
        sup_u.append(float(np.max(np.abs(jet.u))))
        dist_v.append(float(np.max(np.abs(jet.v - p.a2))))
    uT = fam.jet(np.full_like(x, T), x).u
    limit = fam.C1 * np.exp(math.sqrt(p.b2) * x) + fam.C2 * np.exp(-math.sqrt(p.b2) * x)
    profile_error = float(np.max(np.abs(uT - limit) / np.abs(limit)))
    if sup_u[-1] <= 1e-3 * sup_u[0] and dist_v[-1] <= 1e-3 * abs(p.a2):
        verdict = Scenario.EXTINCTION
    elif sup_u[-1] >= 1e3 * sup_u[0]:
        verdict = Scenario.UNBOUNDED_GROWTH
    else:
        verdict = Scenario.COEXISTENCE
    return AsymptoticsReport(tuple(times), tuple(sup_u), tuple(dist_v), verdict, predicted, profile_error)


# -- boundary value problem -------------------------------------------------


def bvp_interval(p: SktParams, k1: int, k2: int) -> tuple[float, float]:
    """``(a, b) = pi (k1, k2) / sqrt(a1 + a2)``."""
    if not k1 < k2:
        raise ShapeError("need k1 < k2")
    if not p.a1 + p.a2 > 0:
        raise ParameterError("need a1 + a2 > 0")
    s = math.pi / math.sqrt(p.a1 + p.a2)
    return k1 * s, k2 * s


@dataclass
class BvpReport:
    trajectory: Trajectory
    interval: tuple[float, float]
    max_v_deviation: float
    max_v_boundary_deviation: float


def dirichlet_bvp_run(p: SktParams, k1: int, k2: int, Ua, Ub, T: float, n: int = 101,
                      init: FieldState | None = None, cfl_factor: float = 0.2,
                      store_every: int = 1) -> BvpReport:
    """Integrate on ``(a, b)`` with ``u = Ua, Ub`` and ``v = a2`` at the ends.

    The system must have the Case-1 shape with ``gamma = -a2``; for
    ``a2 b2 != 0`` this fixes ``d12`` at its special value. Without ``init``
    the run starts from ``u = 0, v = a2``.
    """
    from .model import case1_gamma, is_case1_shape

    if not is_case1_shape(p):
        raise ShapeError("the boundary value problem is posed for the canonical Case-1 system")
    rep = classify_scenario(p)
    if abs(case1_gamma(p) + p.a2) > rep.tie_tolerance:
        need = f"d12 = {rep.d12_special!r}" if rep.d12_special is not None else "a1 + b2 = 0"
        raise ParameterError(f"the boundary value problem needs gamma = -a2 ({need})")
    a, b = bvp_interval(p, k1, k2)
    grid = Grid1D(a, b, n)
    if init is None:
        init = FieldState(0.0, np.zeros(n), np.full(n, p.a2))
    bc = BoundarySpec.constant(Ua, Ub, p.a2, p.a2)
    traj = integrate(p, init, bc, TimeSpec(T, cfl_factor, store_every=store_every), grid)
    V = traj.v_array() - p.a2
    return BvpReport(traj, (a, b), float(np.max(np.abs(V))), float(np.max(np.abs(V[:, [0, -1]]))))
