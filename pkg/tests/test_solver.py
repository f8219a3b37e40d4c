import csv
import io
import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sktlab import CASES, DomainError, ParameterError, Scenario, ShapeError, SktParams
from sktlab.catalog import SolutionFamily
from sktlab.solver import (
    BoundarySpec,
    ConstantSolution,
    FieldState,
    Grid1D,
    Termination,
    TimeSpec,
    asymptotic_probe,
    bvp_interval,
    convergence_study,
    dirichlet_bvp_run,
    initial_state,
    integrate,
    stable_dt,
)

from .conftest import FIG_D12, fig_family, fig_params

COUPLED = SktParams(d1=1.0, d2=0.5, d12=0.5, d21=0.3, a1=0.2, c1=0.4, a2=0.1, b2=0.3)


def _smooth(grid):
    x = grid.x
    return FieldState(0.0, 1 + 0.5 * np.cos(np.pi * x / 2), 0.5 + 0.25 * np.cos(np.pi * x))


class TestGrid:
    def test_spacing_and_nodes(self):
        g = Grid1D(-1.0, 1.0, 5)
        assert g.h == 0.5
        assert np.array_equal(g.x, [-1.0, -0.5, 0.0, 0.5, 1.0])

    def test_refined_halves_h(self):
        g = Grid1D(-3.0, 3.0, 51)
        assert g.refined().n == 101 and g.refined().h == pytest.approx(g.h / 2)

    @pytest.mark.parametrize("args", [(1.0, 0.0, 5), (0.0, 1.0, 2), (0.0, math.inf, 5)])
    def test_invalid(self, args):
        with pytest.raises(ShapeError):
            Grid1D(*args)


class TestFieldState:
    def test_read_only(self):
        s = FieldState(0.0, [1.0, 2.0], [3.0, 4.0])
        with pytest.raises(ValueError):
            s.u[0] = 5.0

    def test_non_finite(self):
        with pytest.raises(ShapeError):
            FieldState(0.0, [1.0, math.nan], [0.0, 0.0])

    def test_shape_mismatch(self):
        with pytest.raises(ShapeError):
            FieldState(0.0, [1.0, 2.0], [0.0])


class TestStableDt:
    def test_formula(self):
        u, v = np.array([1.0, 2.0]), np.array([0.5, -3.0])
        dmax = max(abs(1.0 + 0.5 * 0.5) + abs(0.5 + 0.3 * 1.0), abs(1.0 - 0.5 * 3.0) + abs(0.5 + 0.3 * 2.0))
        assert stable_dt(COUPLED, u, v, 0.1, 0.2) == pytest.approx(0.2 * 0.01 / dmax)

    def test_steps_respect_bound(self):
        g = Grid1D(0.0, 2.0, 21)
        init = _smooth(g)
        tr = integrate(COUPLED, init, BoundarySpec.neumann(), TimeSpec(0.01), g)
        dts = np.diff(tr.times)
        bounds = [stable_dt(COUPLED, s.u, s.v, g.h, 0.2) for s in tr.states[:-1]]
        assert np.all(dts <= np.array(bounds) * (1 + 1e-12))
        assert np.all(dts > 0)


class TestIntegrate:
    def test_steady_state_preserved(self):
        p = fig_params(1.0)
        g = Grid1D(-3.0, 3.0, 101)
        init = FieldState(0.0, np.zeros(101), np.full(101, p.a2))
        tr = integrate(p, init, BoundarySpec.neumann(), TimeSpec(1e6, max_steps=1000), g)
        assert tr.termination is Termination.MAX_STEPS and tr.steps == 1000
        assert np.max(np.abs(tr.final.u)) <= 1e-10
        assert np.max(np.abs(tr.final.v - p.a2)) <= 1e-10

    def test_zero_state_is_fixed(self):
        g = Grid1D(0.0, 1.0, 11)
        z = FieldState(0.0, np.zeros(11), np.zeros(11))
        for bc in (BoundarySpec.neumann(), BoundarySpec.periodic(), BoundarySpec.constant(0, 0, 0, 0)):
            tr = integrate(COUPLED, z, bc, TimeSpec(0.05), g)
            assert np.all(tr.u_array() == 0) and np.all(tr.v_array() == 0)

    def test_invalid_params(self):
        g = Grid1D(0.0, 1.0, 11)
        with pytest.raises(ParameterError, match="d12"):
            integrate(SktParams(d1=1, a1=1), _smooth(g), BoundarySpec.neumann(), TimeSpec(0.1), g)

    def test_grid_mismatch(self):
        with pytest.raises(ShapeError):
            integrate(COUPLED, _smooth(Grid1D(0, 1, 11)), BoundarySpec.neumann(), TimeSpec(0.1), Grid1D(0, 1, 21))

    def test_deterministic(self):
        g = Grid1D(0.0, 2.0, 21)
        a = integrate(COUPLED, _smooth(g), BoundarySpec.neumann(), TimeSpec(0.05), g)
        b = integrate(COUPLED, _smooth(g), BoundarySpec.neumann(), TimeSpec(0.05), g)
        assert a.to_csv() == b.to_csv()

    def test_dirichlet_tracks_exact_solution(self, extinction_family):
        g = Grid1D(-3.0, 3.0, 61)
        tr = integrate(extinction_family.params, initial_state(extinction_family, g),
                       BoundarySpec.from_family(extinction_family), TimeSpec(0.2), g)
        ex = initial_state(extinction_family, g, 0.2)
        assert tr.final.t == 0.2
        assert np.max(np.abs(tr.final.u - ex.u)) < 1e-2 * np.max(np.abs(ex.u))

    def test_constant_dirichlet_values_held(self):
        g = Grid1D(0.0, 2.0, 21)
        tr = integrate(COUPLED, _smooth(g), BoundarySpec.constant(1.5, 0.5, 0.75, 0.25), TimeSpec(0.02), g)
        for s in tr.states[1:]:
            assert (s.u[0], s.u[-1], s.v[0], s.v[-1]) == (1.5, 0.5, 0.75, 0.25)

    def test_blowup_detected(self):
        g = Grid1D(0.0, 2.0, 21)
        tr = integrate(COUPLED, _smooth(g), BoundarySpec.neumann(), TimeSpec(1.0, blowup_threshold=1.2), g)
        assert tr.termination is Termination.BLOWUP
        assert tr.final.t < 1.0

    def test_store_every_keeps_final(self):
        g = Grid1D(0.0, 2.0, 21)
        tr = integrate(COUPLED, _smooth(g), BoundarySpec.neumann(), TimeSpec(0.05, store_every=7), g)
        assert tr.times[-1] == 0.05
        assert np.all(np.diff(tr.times) > 0)

    def test_family_domain_error(self):
        # psi = cos(w x) + 0.5 sin(w x) vanishes at the right end node
        fam = SolutionFamily.case9_f0(0.5, -0.7, 1.0, 0.5, 0.3, 0.2)
        w = math.sqrt(0.5 + 0.7)
        g = Grid1D(0.0, (math.pi - math.atan(2.0)) / w, 11)
        with pytest.raises(DomainError):
            initial_state(fam, g)

    def test_negative_diffusivity_counted(self):
        g = Grid1D(0.0, 2.0, 11)
        init = FieldState(0.0, np.ones(11), np.full(11, -3.0))
        tr = integrate(COUPLED, init, BoundarySpec.neumann(), TimeSpec(1e-4), g)
        assert tr.negative_diffusivity["u"] == len(tr.states)


class TestPeriodic:
    @settings(max_examples=10, deadline=None)
    @given(st.integers(1, 19))
    def test_shift_equivariance(self, k):
        # the periodic scheme commutes with a cyclic shift of the nodes
        g = Grid1D(0.0, 2.0, 21)
        x = g.x[:-1]
        u0 = 1 + 0.3 * np.sin(np.pi * x)
        v0 = 0.5 + 0.2 * np.cos(np.pi * x)
        close = lambda a: np.append(a, a[0])  # noqa: E731
        a = integrate(COUPLED, FieldState(0, close(u0), close(v0)), BoundarySpec.periodic(), TimeSpec(0.02), g)
        b = integrate(COUPLED, FieldState(0, close(np.roll(u0, k)), close(np.roll(v0, k))),
                      BoundarySpec.periodic(), TimeSpec(0.02), g)
        assert np.allclose(np.roll(a.final.u[:-1], k), b.final.u[:-1], atol=1e-13)
        assert a.final.u[0] == a.final.u[-1]


class TestTrajectoryOutput:
    def test_csv_long_format(self):
        g = Grid1D(0.0, 1.0, 5)
        tr = integrate(COUPLED, _smooth(g), BoundarySpec.neumann(), TimeSpec(0.001), g)
        rows = list(csv.reader(io.StringIO(tr.to_csv())))
        assert rows[0] == ["t", "x", "u", "v"]
        assert len(rows) == 1 + 5 * len(tr.states)
        assert float(rows[-1][0]) == 0.001

    def test_json_metadata(self):
        g = Grid1D(0.0, 1.0, 5)
        tr = integrate(COUPLED, _smooth(g), BoundarySpec.neumann(), TimeSpec(0.001), g)
        meta = json.loads(tr.to_json())
        assert meta["termination"] == "Completed" and meta["grid"]["n"] == 5


class TestConvergence:
    def test_second_order(self, extinction_family):
        grids = [Grid1D(-3.0, 3.0, n) for n in (21, 41, 81)]
        rep = convergence_study(extinction_family.params, extinction_family, grids, 0.1)
        assert rep.order_in(1.8, 2.2), rep.orders_linf
        assert rep.monotone

    def test_first_order_boundary_control(self, extinction_family):
        grids = [Grid1D(-3.0, 3.0, n) for n in (21, 41, 81)]
        rep = convergence_study(extinction_family.params, extinction_family, grids, 0.1, first_order_boundary=True)
        assert rep.first_order_boundary
        assert not rep.order_in(1.8, 2.2)
        assert min(rep.orders_linf) < 1.8

    def test_constant_solution_is_exact(self):
        p = fig_params(1.0)
        rep = convergence_study(p, ConstantSolution(0.0, p.a2), [Grid1D(-3, 3, n) for n in (11, 21, 41)], 0.5)
        assert rep.exact and max(rep.linf) <= 1e-12
        assert all(math.isnan(o) for o in rep.orders_linf)

    def test_csv_columns(self, extinction_family):
        rep = convergence_study(extinction_family.params, extinction_family,
                                [Grid1D(-3, 3, 11), Grid1D(-3, 3, 21)], 0.05)
        header = rep.to_csv().splitlines()[0].split(",")
        assert header[:4] == ["n", "h", "linf", "l2"]


class TestAsymptotics:
    @pytest.mark.parametrize("key,T,label", [
        ("extinction", 10.0, Scenario.EXTINCTION),
        ("growth", 20.0, Scenario.UNBOUNDED_GROWTH),
        ("coexistence", 20.0, Scenario.COEXISTENCE),
    ])
    def test_verdicts(self, key, T, label):
        fam = fig_family(FIG_D12[key])
        rep = asymptotic_probe(fam.params, fam, T)
        assert rep.verdict is label and rep.agrees

    def test_extinction_decay(self, extinction_family):
        rep = asymptotic_probe(extinction_family.params, extinction_family, 10.0)
        assert rep.sup_u[-1] <= 1e-3 * rep.sup_u[0]

    def test_coexistence_profile(self):
        fam = fig_family(FIG_D12["coexistence"])
        assert asymptotic_probe(fam.params, fam, 20.0).profile_error <= 0.1

    def test_needs_explicit_family(self):
        fam = SolutionFamily.polymer49(1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 4.0, 4.0)
        with pytest.raises(ShapeError):
            asymptotic_probe(fam.params, fam, 1.0)


class TestSolverScenarios:
    def test_extinction_run(self, extinction_family):
        g = Grid1D(-3.0, 3.0, 31)
        tr = integrate(extinction_family.params, initial_state(extinction_family, g),
                       BoundarySpec.from_family(extinction_family), TimeSpec(10.0, store_every=1000), g)
        assert tr.termination is Termination.COMPLETED
        assert np.max(np.abs(tr.final.u)) * 10 <= np.max(np.abs(tr.states[0].u))

    @pytest.mark.slow
    def test_growth_run(self):
        fam = fig_family(FIG_D12["growth"])
        g = Grid1D(-3.0, 3.0, 21)
        tr = integrate(fam.params, initial_state(fam, g), BoundarySpec.from_family(fam),
                       TimeSpec(6.0, store_every=1000), g)
        grown = np.max(np.abs(tr.final.u)) >= 10 * np.max(np.abs(tr.states[0].u))
        assert tr.termination is Termination.BLOWUP or grown


class TestBvp:
    def test_interval_length(self):
        a, b = bvp_interval(fig_params(FIG_D12["coexistence"]), 0, 1)
        assert (a, b) == (0.0, pytest.approx(math.pi / math.sqrt(3)))

    def test_interval_order(self):
        with pytest.raises(ShapeError):
            bvp_interval(fig_params(11.0), 2, 1)

    def test_zero_data_zero_trajectory(self):
        p = CASES[1].params(a1=1.0, a2=0.0, b2=-1.0, c1=0.5, d12=0.8)
        r = dirichlet_bvp_run(p, 0, 1, 0.0, 0.0, 0.5, n=21)
        assert np.all(r.trajectory.u_array() == 0) and r.max_v_deviation == 0

    def test_exact_start_keeps_v(self):
        p = fig_params(FIG_D12["coexistence"])
        fam = SolutionFamily.case1_explicit30(p, 3.0, 2.0, 4.0)
        a, b = bvp_interval(p, 0, 1)
        ex = initial_state(fam, Grid1D(a, b, 41))
        # u of the exact solution is constant in time at both ends
        r = dirichlet_bvp_run(p, 0, 1, float(ex.u[0]), float(ex.u[-1]), 0.5, n=41, init=ex)
        exT = initial_state(fam, Grid1D(a, b, 41), 0.5)
        assert r.max_v_boundary_deviation <= 1e-12
        assert np.max(np.abs(r.trajectory.final.u - exT.u)) <= 1e-3 * np.max(np.abs(exT.u))
        assert np.max(np.abs(r.trajectory.final.v - exT.v)) <= 1e-3

    def test_requires_special_d12(self):
        with pytest.raises(ParameterError, match="d12"):
            dirichlet_bvp_run(fig_params(1.0), 0, 1, 0.0, 0.0, 0.1)
