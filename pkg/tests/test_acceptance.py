"""Acceptance criteria, one test each, each printing a single PASS/FAIL line."""

import time

import numpy as np
import pytest

from sktlab import CASES, Scenario, SktParams, TransformId, apply_named_transform, classify_scenario
from sktlab.catalog import (
    Case8Solution,
    MappedSolution,
    SolutionFamily,
    build_case1_profiles,
    case2_constant_solution,
    case9_exp_profiles,
    case9_params,
    case9_phi0_profiles,
    paired_operators,
    polymer_params,
    polymer_profiles,
    q8_solution,
)
from sktlab.catalog.operators import SymmetryOperator
from sktlab.solver import (
    BoundarySpec,
    FieldState,
    Grid1D,
    TimeSpec,
    asymptotic_probe,
    convergence_study,
    initial_state,
    integrate,
)
from sktlab.verify import (
    ConservedWeight,
    ReducedContext,
    SamplingSpec,
    conservation_check,
    determining_residual,
    invariant_surface_residual,
    reduced_ode_residual,
    verify_family,
)

from .conftest import FIG_D12, fig_family, fig_params, generic_case1


@pytest.fixture
def report(capsys):
    def _report(number, title, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}: {detail}")
        assert ok, detail

    return _report


def test_criterion_1_determining_equations(report):
    rng = np.random.default_rng(1)
    t0 = time.perf_counter()
    worst, runs, amb = 0.0, 0, []
    for entry in CASES.values():
        for kind in entry.operators:
            for draw in range(3):
                p = entry.draw(rng)
                op = SymmetryOperator(kind, p, alpha=rng.uniform(-1, 1), alpha0=rng.uniform(0.3, 1),
                                      alpha1=rng.uniform(-1, 1), alpha2=rng.uniform(-1, 1))
                r = determining_residual(entry, op, SamplingSpec(n=100, seed=draw), tol=1e-9)
                worst = max(worst, r.max_abs)
                amb += list(r.ambiguities)
                runs += 1
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-9 and elapsed < 10 and not amb
    report(1, "determining equations", ok,
           f"{runs} runs, max residual {worst:.2e} (tol 1e-9), {len(amb)} ambiguity reports, {elapsed:.2f} s (< 10 s)")


def _exact_families():
    fams = {f"Explicit30 d12={d:g}": fig_family(d) for d in FIG_D12.values()}
    fams["A2NonZero"] = SolutionFamily.case1_a2_nonzero(generic_case1(), 0.6, 0.4, 0.5, 0.3)
    fams["A2Zero"] = SolutionFamily.case1_a2_zero(generic_case1(0.0), 0.6, 0.4, 0.5, 0.3)
    fams["Case9_F0"] = SolutionFamily.case9_f0(0.5, -0.7, 1.0, 0.5, 0.3, 0.2)
    fams["Case9_Exp"] = SolutionFamily.case9_exp(0.5, 0.6, 1.0, 0.5, 0.3)
    fams["Case9_Phi0"] = SolutionFamily.case9_phi0(0.5, 1.0, 0.5, 0.3, 0.2)
    fams["Polymer49"] = SolutionFamily.polymer49(1.0, 0.7, 2.0, 0.4, 0.5, 1.0, 0.5, 4.0, 4.0)
    return fams


def test_criterion_2_exact_solutions(report):
    t0 = time.perf_counter()
    worst = {k: verify_family(f.params, f, SamplingSpec(n=200)).max_abs for k, f in _exact_families().items()}
    elapsed = time.perf_counter() - t0
    bad = [k for k, v in worst.items() if not v <= 1e-8]
    ok = not bad and elapsed < 5
    report(2, "exact-solution residuals", ok,
           f"{len(worst)} families, max {max(worst.values()):.2e} (tol 1e-8), failing {bad}, {elapsed:.2f} s (< 5 s)")


def test_criterion_3_invariant_surfaces(report):
    worst, pairs = 0.0, 0
    for fam in _exact_families().values():
        for op, sol in paired_operators(fam):
            worst = max(worst, invariant_surface_residual(op, sol, SamplingSpec(n=200)).max_abs)
            pairs += 1
    for sol in (case2_constant_solution(CASES[2].params(a1=0.8, a2=0.5, b1=1.3, b2=0.6), 0.4, 0.3),
                q8_solution(CASES[7].params(a1=0.8, a2=-0.5, b2=0.6), 0.3, 0.4, 0.3, 0.5, 0.2),
                Case8Solution(CASES[8].params(a1=0.8, a2=0.5), 0.4, 0.3)):
        worst = max(worst, invariant_surface_residual(sol.operator(), sol, SamplingSpec(n=200)).max_abs)
        pairs += 1
    # negative controls: operators paired with the wrong solution
    q1, _ = paired_operators(fig_family(1.0))[0]
    q6, _ = paired_operators(_exact_families()["Polymer49"])[0]
    controls = [invariant_surface_residual(q1, fig_family(16.0), SamplingSpec(n=200)).max_abs,
                invariant_surface_residual(q6, fig_family(1.0), SamplingSpec(n=200)).max_abs]
    ok = worst <= 1e-8 and min(controls) > 1e-3
    report(3, "invariant surfaces", ok,
           f"{pairs} pairs, max {worst:.2e} (tol 1e-8); controls min {min(controls):.2e} (> 1e-3)")


def test_criterion_4_reduced_odes(report):
    x = np.linspace(-2.0, 2.0, 201)
    res = {}
    for a2 in (0.4, 0.0):
        p = generic_case1(a2)
        pr = build_case1_profiles(p, 0.6, 0.4, 0.5, 0.3)
        res[f"Ode27 a2={a2:g}"] = reduced_ode_residual("Ode27", (pr.phi, pr.psi), x, ReducedContext(p)).max_abs
    phi, psi, (f1, f2) = case9_exp_profiles(0.5, 0.6, 1.0, 0.5, 0.3)
    ctx = ReducedContext(case9_params(0.5), alpha=0.6, alpha1=f1, alpha2=f2)
    res["Ode34"] = reduced_ode_residual("Ode34", (phi, psi), x, ctx).max_abs
    phi, psi = case9_phi0_profiles(1.0, 1.0, 0.5)
    res["Ode35"] = reduced_ode_residual("Ode35", (phi, psi), x, ReducedContext(case9_params(0.5), alpha0=0.7)).max_abs
    prof = polymer_profiles(1.0, 0.7, 1.0, 0.5, 4.0, 4.0, 1)
    res["Ode45"] = reduced_ode_residual("Ode45", prof[:2], x, ReducedContext(SktParams(d1=1.0, d2=0.7))).max_abs
    ok = max(res.values()) <= 1e-8
    report(4, "reduced ODEs", ok, ", ".join(f"{k} {v:.2e}" for k, v in res.items()) + " (tol 1e-8)")


def test_criterion_5_scenarios(report):
    t0 = time.perf_counter()
    horizon = {"extinction": 10.0, "growth": 20.0, "coexistence": 20.0}
    expect = {"extinction": Scenario.EXTINCTION, "growth": Scenario.UNBOUNDED_GROWTH,
              "coexistence": Scenario.COEXISTENCE}
    parts, ok = [], True
    for key, d12 in FIG_D12.items():
        p = fig_params(d12)
        rep = asymptotic_probe(p, fig_family(d12), horizon[key])
        cls = classify_scenario(p)
        good = rep.agrees and rep.verdict is expect[key]
        if key == "extinction":
            good &= rep.sup_u[-1] <= 1e-3 * rep.sup_u[0]
            parts.append(f"gamma={cls.gamma:g} {rep.verdict.value} ratio {rep.sup_u[-1] / rep.sup_u[0]:.1e}")
        elif key == "coexistence":
            good &= rep.profile_error <= 0.1
            parts.append(f"gamma={cls.gamma:g} {rep.verdict.value} profile error {rep.profile_error:.1e}")
        else:
            parts.append(f"gamma={cls.gamma:g} {rep.verdict.value} growth {rep.sup_u[-1] / rep.sup_u[0]:.1e}")
        ok &= good
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 5
    report(5, "scenario reproduction", ok, "; ".join(parts) + f"; {elapsed:.2f} s (< 5 s)")


def test_criterion_6_solver_convergence(report):
    t0 = time.perf_counter()
    fam = fig_family(FIG_D12["extinction"])
    rep = convergence_study(fam.params, fam, [Grid1D(-3.0, 3.0, n) for n in (51, 101, 201)], 0.5)
    p = fam.params
    init = FieldState(0.0, np.zeros(101), np.full(101, p.a2))
    tr = integrate(p, init, BoundarySpec.neumann(), TimeSpec(1e6, max_steps=1000), Grid1D(-3.0, 3.0, 101))
    drift = max(np.max(np.abs(tr.final.u)), np.max(np.abs(tr.final.v - p.a2)))
    elapsed = time.perf_counter() - t0
    ok = rep.order_in(1.8, 2.2) and tr.steps == 1000 and drift <= 1e-10 and elapsed < 60
    orders = ", ".join(f"{o:.4f}" for o in rep.orders_linf)
    report(6, "solver convergence", ok,
           f"orders {orders} (in [1.8, 2.2]); steady drift {drift:.1e} over {tr.steps} steps; {elapsed:.1f} s (< 60 s)")


def test_criterion_7_conservation(report):
    t0 = time.perf_counter()
    fam = SolutionFamily.polymer49(1.0, 0.7, 2.0, 0.4, 0.5, 1.0, 0.5, 4.0, 3.0)
    p = fam.params
    weights = [ConservedWeight(s, sg, p) for s in ("u", "v") for sg in (1, -1)]
    defects = {(w.species, w.sign): [] for w in weights}
    # dt = cfl h^2 / D, so doubling cfl while halving h halves dt
    for n, cfl in ((51, 0.05), (101, 0.1), (201, 0.2)):
        g = Grid1D(-1.0, 1.0, n)
        tr = integrate(p, initial_state(fam, g), BoundarySpec.from_family(fam), TimeSpec(0.05, cfl_factor=cfl), g)
        for w in weights:
            defects[(w.species, w.sign)].append(conservation_check(p, tr, w).max_defect)
    ratios = {k: [d[i] / d[i + 1] for i in range(2)] for k, d in defects.items()}
    elapsed = time.perf_counter() - t0
    ok = all(3.0 <= r <= 5.0 for rs in ratios.values() for r in rs) and elapsed < 30
    txt = "; ".join(f"{s}{'+' if sg > 0 else '-'} {rs[0]:.2f},{rs[1]:.2f}" for (s, sg), rs in ratios.items())
    report(7, "conservation law", ok, f"defect ratios {txt} (in [3, 5]); {elapsed:.1f} s (< 30 s)")


def _transform_cases():
    polymer = SolutionFamily.polymer49(1.0, 0.7, 2.0, 0.4, 0.5, 1.0, 1.0, 4.0, 4.0)
    fwd = {
        TransformId.TABLE2_CASE2: case2_constant_solution(CASES[2].params(a1=0.8, a2=0.5, b1=1.3, b2=0.6), 0.4, 0.3),
        TransformId.TABLE2_CASE5: polymer,
        TransformId.TABLE2_CASE7: q8_solution(CASES[7].params(a1=0.8, a2=-0.5, b2=0.6), 0.3, 0.4, 0.3, 0.5, 0.2),
        TransformId.TABLE2_CASE8: Case8Solution(CASES[8].params(a1=0.8, a2=0.5), 0.4, 0.3),
        TransformId.TABLE2_CASE10: q8_solution(CASES[10].params(a2=0.7, b2=0.6), 0.3, 0.4, 0.3, 0.5, 0.2),
        TransformId.SCALE_43: polymer,
        TransformId.SWAP_50: polymer,
    }
    for tid, base in fwd.items():
        yield tid, base, MappedSolution.through(base, tid)
    src = SktParams(d1=2, d12=1.5, d21=3, c2=0.5, a1=4, a2=2, c1=1.6, b2=0.3)
    q, _ = apply_named_transform(TransformId.REDUCE_24_TO_23, src)
    tgt = SolutionFamily.case1_explicit30(q, 3.0, 2.0, 4.0)
    yield TransformId.REDUCE_24_TO_23, tgt, MappedSolution.pulled_back(tgt, src, TransformId.REDUCE_24_TO_23)
    src = SktParams(d1=2, d12=1.5, d21=3, c1=0.6, b2=1.2, a1=0.5)
    q, _ = apply_named_transform(TransformId.REDUCE_39_TO_31, src)
    tgt = SolutionFamily.case9_f0(q.a1, -0.7, 1.0, 0.5, 0.3, 0.2)
    yield TransformId.REDUCE_39_TO_31, tgt, MappedSolution.pulled_back(tgt, src, TransformId.REDUCE_39_TO_31)
    src = SktParams(d1=2, d12=1.5, d21=3, b2=0.6, c1=0.3, a1=0.5, a2=0.4, b1=0.7)
    q, _ = apply_named_transform(TransformId.SCALE_76, src)
    tgt = case2_constant_solution(q, 0.4, 0.3)
    yield TransformId.SCALE_76, tgt, MappedSolution.pulled_back(tgt, src, TransformId.SCALE_76)


def test_criterion_8_transform_round_trips(report):
    spec = SamplingSpec(n=200, t_range=(0.1, 1.0), x_range=(-1.0, 1.0))
    worst, seen = 0.0, set()
    for tid, verified, mapped in _transform_cases():
        worst = max(worst, verify_family(verified.params, verified, spec).max_abs,
                    verify_family(mapped.params, mapped, spec).max_abs)
        seen.add(tid)
    units = {
        TransformId.TABLE2_CASE2: ("b1", CASES[2].params(a1=0.8, a2=0.5, b1=1.3, b2=0.6)),
        TransformId.TABLE2_CASE5: ("b2", polymer_params(1.0, 0.7, 2.0, 0.4, 0.5)),
        TransformId.TABLE2_CASE7: ("a2", CASES[7].params(a1=0.8, a2=-0.5, b2=0.6)),
        TransformId.TABLE2_CASE8: ("a2", CASES[8].params(a1=0.8, a2=0.5)),
        TransformId.TABLE2_CASE10: ("a2", CASES[10].params(a2=0.7, b2=0.6)),
    }
    scaled = {tid.value: getattr(apply_named_transform(tid, p)[0], key) for tid, (key, p) in units.items()}
    exact_units = all(abs(v) == 1.0 for v in scaled.values())
    ok = seen == set(TransformId) and worst <= 1e-8 and exact_units
    report(8, "transform round trips", ok,
           f"{len(seen)}/{len(TransformId)} transforms, max residual {worst:.2e} (tol 1e-8); "
           f"designated coefficients {scaled}")
