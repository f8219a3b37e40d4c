"""Residuals of every listed symmetry operator and every exact solution family."""

import numpy as np

from sktlab import CASES
from sktlab.catalog import SolutionFamily, SymmetryOperator, paired_operators
from sktlab.verify import SamplingSpec, determining_residual, invariant_surface_residual, verify_family


def main():
    rng = np.random.default_rng(0)
    print("case  operator  max residual")
    for entry in CASES.values():
        for kind in entry.operators:
            op = SymmetryOperator(kind, entry.draw(rng), alpha=0.5, alpha0=0.6, alpha1=0.3, alpha2=-0.2)
            r = determining_residual(entry, op, SamplingSpec(n=100))
            print(f"{entry.case_id:4d}  {kind:8s}  {r.max_abs:.2e}")

    p = CASES[1].params(a1=2.0, a2=1.0, b2=0.1, c1=3.2, d12=1.0)
    families = [
        SolutionFamily.case1_explicit30(p, 3.0, 2.0, 4.0),
        SolutionFamily.case9_exp(0.5, 0.6, 1.0, 0.5, 0.3),
        SolutionFamily.polymer49(1.0, 0.7, 2.0, 0.4, 0.5, 1.0, 0.5, 4.0, 4.0),
    ]
    print("\nfamily            pde residual  surface residual")
    for fam in families:
        pde = verify_family(fam.params, fam).max_abs
        surf = max(invariant_surface_residual(op, sol).max_abs for op, sol in paired_operators(fam))
        print(f"{fam.tag.value:16s}  {pde:.2e}      {surf:.2e}")


if __name__ == "__main__":
    main()
