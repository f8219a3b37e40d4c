import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sktlab import ParameterError, ShapeError, SktParams
from sktlab.catalog import SolutionFamily
from sktlab.solver import BoundarySpec, FieldState, Grid1D, TimeSpec, initial_state, integrate
from sktlab.verify import ConservedWeight, conservation_check

POLY = SolutionFamily.polymer49(1.0, 0.7, 2.0, 0.4, 0.5, 1.0, 0.5, 4.0, 3.0)
WEIGHTS = [("u", 1), ("u", -1), ("v", 1), ("v", -1)]
pos = st.floats(0.1, 3.0)


def _run(n, t_end=0.05):
    g = Grid1D(-1.0, 1.0, n)
    return integrate(POLY.params, initial_state(POLY, g), BoundarySpec.from_family(POLY), TimeSpec(t_end), g)


class TestWeight:
    @given(pos, pos, pos, pos, st.floats(-2, 2), st.sampled_from([1, -1]))
    def test_weight_solves_adjoint_equation(self, d1, d12, c1, d21, a1, sign):
        # Phi_t + d1 Phi_xx + a1 Phi = 0 and d12 Phi_xx = c1 Phi
        p = SktParams(d1=d1, d12=d12, c1=c1, d21=d21, a1=a1, b2=0.5)
        w = ConservedWeight("u", sign, p)
        t, x = 0.3, 0.4
        phi = w.phi(t, x)
        phi_xx = w.k * w.k * phi
        assert d12 * phi_xx == pytest.approx(c1 * phi, rel=1e-12)
        tol = 1e-10 * (1 + abs(phi)) * (1 + abs(w.lam))
        assert w.phi_t(t, x) + d1 * phi_xx + a1 * phi == pytest.approx(0.0, abs=tol)

    def test_exact_solution_balances(self):
        # the continuous identity along an exact solution, by finite differences in t
        p = POLY.params
        w = ConservedWeight("u", 1, p)
        x = np.linspace(-1, 1, 2001)
        h = x[1] - x[0]

        def mass(t):
            m = w.phi(t, x) * initial_state(POLY, Grid1D(-1, 1, 2001), t).u
            return h * (m.sum() - 0.5 * (m[0] + m[-1]))

        dt = 1e-5
        rate = (mass(0.1 + dt) - mass(0.1 - dt)) / (2 * dt)
        jet = POLY.jet(np.full(2, 0.1), np.array([-1.0, 1.0]))
        pot = (p.d1 + p.d12 * jet.v) * jet.u
        pot_x = p.d12 * jet.v_x * jet.u + (p.d1 + p.d12 * jet.v) * jet.u_x
        ph = w.phi(0.1, np.array([-1.0, 1.0]))
        flux = ph * pot_x - w.k * ph * pot
        assert rate == pytest.approx(flux[1] - flux[0], rel=1e-5)

    @pytest.mark.parametrize("bad", [dict(d12=0.0, c1=1.0), dict(d12=1.0, c1=-1.0)])
    def test_invalid_u_weight(self, bad):
        with pytest.raises(ParameterError):
            ConservedWeight("u", 1, SktParams(d1=1, d21=1, b2=1, **bad))

    def test_invalid_species_and_sign(self):
        p = POLY.params
        with pytest.raises(ShapeError):
            ConservedWeight("w", 1, p)
        with pytest.raises(ShapeError):
            ConservedWeight("u", 2, p)


class TestConservationCheck:
    @pytest.mark.parametrize("species,sign", WEIGHTS)
    def test_defect_shrinks_with_refinement(self, species, sign):
        w = ConservedWeight(species, sign, POLY.params)
        d = [conservation_check(POLY.params, _run(n, 0.02), w).max_defect for n in (21, 41)]
        assert 3.0 <= d[0] / d[1] <= 5.0

    def test_report_shape(self):
        tr = _run(21, 0.01)
        r = conservation_check(POLY.params, tr, ConservedWeight("v", 1, POLY.params))
        assert len(r.masses) == len(tr.states) and len(r.defects) == len(tr.states) - 1
        assert r.to_dict()["max_defect"] == r.max_defect

    def test_zero_field_has_no_defect(self):
        p = POLY.params
        g = Grid1D(-1, 1, 21)
        tr = integrate(p, FieldState(0, np.zeros(21), np.zeros(21)), BoundarySpec.neumann(), TimeSpec(0.01), g)
        assert conservation_check(p, tr, ConservedWeight("u", 1, p)).max_defect == 0.0

    def test_needs_system_without_self_competition(self):
        p = SktParams(d1=1, d12=1, d21=1, c1=1, b2=1, b1=0.5)
        g = Grid1D(0, 1, 11)
        tr = integrate(p, FieldState(0, np.ones(11), np.ones(11)), BoundarySpec.neumann(), TimeSpec(0.001), g)
        with pytest.raises(ShapeError):
            conservation_check(p, tr, ConservedWeight("u", 1, p))
