"""The three competition regimes of the canonical system, from the closed form and the solver."""

import numpy as np

from sktlab import CASES, classify_scenario
from sktlab.catalog import SolutionFamily
from sktlab.solver import BoundarySpec, Grid1D, TimeSpec, asymptotic_probe, initial_state, integrate


def main():
    for d12, T in ((1.0, 10.0), (16.0, 20.0), (11.0, 20.0)):
        p = CASES[1].params(a1=2.0, a2=1.0, b2=0.1, c1=3.2, d12=d12)
        fam = SolutionFamily.case1_explicit30(p, 3.0, 2.0, 4.0)
        cls = classify_scenario(p)
        rep = asymptotic_probe(p, fam, T)
        print(f"d12={d12:4g}  gamma={cls.gamma:5g}  predicted {cls.classification.value:16s}"
              f"probe {rep.verdict.value:16s}  sup u(T)/sup u(0) = {rep.sup_u[-1] / rep.sup_u[0]:.2e}")

    p = CASES[1].params(a1=2.0, a2=1.0, b2=0.1, c1=3.2, d12=1.0)
    fam = SolutionFamily.case1_explicit30(p, 3.0, 2.0, 4.0)
    g = Grid1D(-3.0, 3.0, 31)
    tr = integrate(p, initial_state(fam, g), BoundarySpec.from_family(fam), TimeSpec(10.0, store_every=2000), g)
    print("\nsolver, extinction regime")
    for s in tr.states:
        print(f"t={s.t:6.2f}  sup u={np.max(np.abs(s.u)):.3e}  max|v - a2|={np.max(np.abs(s.v - p.a2)):.3e}")


if __name__ == "__main__":
    main()
