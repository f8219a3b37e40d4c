"""Residual reports and sampling specifications."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import EmptySampleError

__all__ = ["SamplingSpec", "EquationResidual", "AmbiguityReport", "ResidualReport", "summarize", "fmt17"]

CSV_COLUMNS = ("equation_id", "max_abs", "mean_abs", "samples", "worst_t", "worst_x",
               "worst_u", "worst_v", "pass", "max_scaled")


def fmt17(value) -> str:
    """Round-trip float formatting used in every CSV."""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if value is None:
        return ""
    return format(float(value), ".17g")


@dataclass(frozen=True)
class SamplingSpec:
    """Uniform random sample box, deterministic given ``seed``.

    Ranges that an operation does not use are ignored.
    """

    t_range: tuple[float, float] = (0.1, 2.0)
    x_range: tuple[float, float] = (-3.0, 3.0)
    u_range: tuple[float, float] = (0.2, 5.0)
    v_range: tuple[float, float] = (0.2, 5.0)
    n: int = 100
    seed: int = 0

    def __post_init__(self):
        for name in ("t_range", "x_range", "u_range", "v_range"):
            lo, hi = (float(a) for a in getattr(self, name))
            if not (math.isfinite(lo) and math.isfinite(hi) and lo <= hi):
                raise ValueError(f"{name} must be a finite interval (lo <= hi)")
            object.__setattr__(self, name, (lo, hi))
        if int(self.n) < 1:
            raise ValueError("n must be positive")
        object.__setattr__(self, "n", int(self.n))

    def draw_tx(self):
        rng = np.random.default_rng(self.seed)
        return rng.uniform(*self.t_range, self.n), rng.uniform(*self.x_range, self.n)

    def draw_txuv(self):
        rng = np.random.default_rng(self.seed)
        return (rng.uniform(*self.t_range, self.n), rng.uniform(*self.x_range, self.n),
                rng.uniform(*self.u_range, self.n), rng.uniform(*self.v_range, self.n))

    def to_dict(self) -> dict:
        return {"t_range": list(self.t_range), "x_range": list(self.x_range),
                "u_range": list(self.u_range), "v_range": list(self.v_range),
                "n": self.n, "seed": self.seed}

    @classmethod
    def from_dict(cls, data: dict) -> "SamplingSpec":
        allowed = {"t_range", "x_range", "u_range", "v_range", "n", "seed"}
        unknown = sorted(set(data) - allowed)
        if unknown:
            raise ValueError(f"unknown sampling keys: {', '.join(unknown)}")
        kw = {k: tuple(v) if k.endswith("range") else v for k, v in data.items()}
        return cls(**kw)


@dataclass(frozen=True)
class EquationResidual:
    equation_id: str
    max_abs: float
    mean_abs: float
    samples: int
    worst: tuple[float, float, float, float]
    max_scaled: float = math.nan


@dataclass(frozen=True)
class AmbiguityReport:
    """Per-term breakdown of a failing identity at its worst sample point."""

    equation_id: str
    point: dict
    terms: dict
    only_last_pair: bool

    def to_dict(self) -> dict:
        return {"equation_id": self.equation_id, "point": self.point, "terms": self.terms,
                "only_last_pair": self.only_last_pair}


@dataclass(frozen=True)
class ResidualReport:
    """Per-equation residual statistics.

    ``metric`` is ``"abs"`` when the pass flag compares ``max_abs`` with the
    tolerance and ``"scaled"`` when it compares ``max_scaled`` (the residual
    divided by ``max(1, sum of |terms|)``).
    """

    name: str
    equations: tuple[EquationResidual, ...]
    tolerance: float
    requested: int
    skipped: int = 0
    metric: str = "abs"
    ambiguities: tuple[AmbiguityReport, ...] = ()

    def value(self, eq: EquationResidual) -> float:
        return eq.max_scaled if self.metric == "scaled" else eq.max_abs

    @property
    def max_residual(self) -> float:
        return max((self.value(e) for e in self.equations), default=0.0)

    @property
    def max_abs(self) -> float:
        return max((e.max_abs for e in self.equations), default=0.0)

    @property
    def passed(self) -> bool:
        return all(self.value(e) <= self.tolerance for e in self.equations)

    def __getitem__(self, equation_id: str) -> EquationResidual:
        for e in self.equations:
            if e.equation_id == equation_id:
                return e
        raise KeyError(equation_id)

    def failing(self) -> list[str]:
        return [e.equation_id for e in self.equations if not self.value(e) <= self.tolerance]

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "tolerance": self.tolerance,
            "metric": self.metric,
            "requested": self.requested,
            "skipped": self.skipped,
            "pass": self.passed,
            "max_residual": self.max_residual,
            "equations": [
                {"equation_id": e.equation_id, "max_abs": e.max_abs, "mean_abs": e.mean_abs,
                 "samples": e.samples, "worst_t": e.worst[0], "worst_x": e.worst[1],
                 "worst_u": e.worst[2], "worst_v": e.worst[3],
                 "pass": self.value(e) <= self.tolerance, "max_scaled": e.max_scaled}
                for e in self.equations
            ],
            "ambiguities": [a.to_dict() for a in self.ambiguities],
        }

    def to_json(self) -> str:
        return json.dumps(_jsonable(self.to_dict()), indent=2, sort_keys=True)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for e in self.equations:
            w.writerow([e.equation_id, fmt17(e.max_abs), fmt17(e.mean_abs), e.samples,
                        *(fmt17(c) for c in e.worst), fmt17(self.value(e) <= self.tolerance),
                        fmt17(e.max_scaled)])
        return buf.getvalue()


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        f = float(obj)
        return f if math.isfinite(f) else str(f)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def summarize(equation_id: str, residual, coords, scale=None) -> EquationResidual:
    """Reduce a residual array over accepted samples.

    ``coords`` is ``(t, x, u, v)`` with arrays or ``None`` for unused axes.
    """
    r = np.abs(np.asarray(residual, dtype=float))
    if r.size == 0:
        raise EmptySampleError(f"no samples for {equation_id}")
    i = int(np.argmax(r))
    worst = tuple(math.nan if c is None else float(np.broadcast_to(c, r.shape)[i]) for c in coords)
    scaled = math.nan
    if scale is not None:
        scaled = float(np.max(r / np.maximum(1.0, np.asarray(scale, dtype=float))))
    return EquationResidual(equation_id, float(r[i]), float(np.mean(r)), int(r.size), worst, scaled)
