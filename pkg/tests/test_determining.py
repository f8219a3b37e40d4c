import dataclasses

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sktlab import CASES, EmptySampleError, ShapeError
from sktlab.catalog import OperatorKind, SymmetryOperator, operator_coefficients
from sktlab.verify import EQUATION_IDS, SamplingSpec, determining_residual, determining_terms

CONSTANTS = dict(alpha=0.5, alpha0=0.6, alpha1=0.3, alpha2=-0.2)
PAIRS = [(cid, k) for cid, e in CASES.items() for k in e.operators]


class TestDeterminingResidual:
    @pytest.mark.parametrize("cid,kind", PAIRS)
    def test_listed_operators_vanish(self, cid, kind):
        rng = np.random.default_rng(cid)
        for draw in range(3):
            op = SymmetryOperator(kind, CASES[cid].draw(rng), **CONSTANTS)
            r = determining_residual(CASES[cid], op, SamplingSpec(n=100, seed=draw), 1e-12, "scaled")
            assert r.passed, r.failing()
            assert not r.ambiguities

    @settings(max_examples=25, deadline=None)
    @given(st.floats(-2, 2), st.floats(0.2, 2), st.floats(-2, 2), st.floats(-2, 2), st.integers(0, 10**6))
    def test_arbitrary_constants(self, alpha, alpha0, alpha1, alpha2, seed):
        # the free constants are unrestricted; residuals are compared relative to term size
        rng = np.random.default_rng(seed)
        consts = dict(alpha=alpha, alpha0=alpha0, alpha1=alpha1, alpha2=alpha2)
        for cid, kind in ((3, "Q4"), (7, "Q8"), (9, "Q11"), (10, "Q3"), (11, "Q12"), (12, "Q13")):
            op = SymmetryOperator(kind, CASES[cid].draw(rng), **consts)
            r = determining_residual(CASES[cid], op, SamplingSpec(n=40, seed=seed), 1e-12, "scaled")
            assert r.passed, (kind, r.failing())

    def test_equation_ids_reported(self):
        op = SymmetryOperator("Q13", CASES[12].params(), alpha=0.4)
        r = determining_residual(CASES[12], op)
        assert tuple(e.equation_id for e in r.equations) == EQUATION_IDS

    def test_operator_not_listed(self):
        op = SymmetryOperator("Q4", CASES[3].draw(np.random.default_rng(0)), alpha=0.5)
        with pytest.raises(ShapeError):
            determining_residual(CASES[1], op)

    def test_guarded_samples_exhausted(self):
        # D = 1 - u + v vanishes on u = v + 1
        op = SymmetryOperator("Q13", CASES[12].params(), alpha=0.4)
        spec = SamplingSpec(n=50, u_range=(2.0, 2.0), v_range=(1.0, 1.0))
        with pytest.raises(EmptySampleError):
            determining_residual(CASES[12], op, spec)

    def test_abs_metric_is_not_scale_free(self):
        # large e^{beta t} factors leave rounding far above 1e-9 in absolute terms
        rng = np.random.default_rng(9)
        CASES[9].draw(rng)
        op = SymmetryOperator("Q11", CASES[9].draw(rng), **CONSTANTS)
        r = determining_residual(CASES[9], op, SamplingSpec(n=100, seed=1))
        assert r.max_abs > 1e-9
        assert max(e.max_scaled for e in r.equations) < 1e-15


class TestNegativeControls:
    def test_shifted_eta1_breaks_q4(self):
        p = CASES[3].draw(np.random.default_rng(0))
        op = SymmetryOperator("Q4", p, alpha=0.5)
        t, x, u, v = SamplingSpec(n=100, seed=1).draw_txuv()
        B = operator_coefficients(op, t, x, u, v)
        shifted = dataclasses.replace(B, eta1=B.eta1 + 1.0)
        worst = {k: np.max(np.abs(sum(d.values()))) for k, d in determining_terms(p, shifted, u, v).items()}
        assert max(worst.values()) > 1e-3
        assert worst["16"] > 1e-3 and worst["17"] > 1e-3

    @pytest.mark.parametrize("cid,kind", [(1, "Q4"), (2, "Q8"), (4, "Q1")])
    def test_operator_on_foreign_system(self, cid, kind):
        p = CASES[cid].draw(np.random.default_rng(3))
        op = SymmetryOperator(kind, p, **CONSTANTS)
        r = determining_residual(None, op, SamplingSpec(n=100))
        assert not r.passed and r.max_abs > 1e-3
        assert r.ambiguities

    def test_failure_carries_term_breakdown(self):
        p = CASES[1].draw(np.random.default_rng(3))
        r = determining_residual(None, SymmetryOperator("Q4", p, alpha=0.5), SamplingSpec(n=100))
        amb = r.ambiguities[0]
        assert amb.equation_id in r.failing()
        assert set(amb.point) == {"t", "x", "u", "v"}
        assert amb.terms


class TestOperatorKinds:
    def test_every_kind_is_used(self):
        listed = {k for e in CASES.values() for k in e.operators}
        assert listed == {k.value for k in OperatorKind}
