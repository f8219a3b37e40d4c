"""Spatial order of the method of lines against an exact solution, with the first-order boundary control."""

from sktlab import CASES
from sktlab.catalog import SolutionFamily
from sktlab.solver import Grid1D, convergence_study


def main():
    p = CASES[1].params(a1=2.0, a2=1.0, b2=0.1, c1=3.2, d12=1.0)
    fam = SolutionFamily.case1_explicit30(p, 3.0, 2.0, 4.0)
    grids = [Grid1D(-3.0, 3.0, n) for n in (51, 101, 201)]
    for first_order in (False, True):
        rep = convergence_study(p, fam, grids, 0.5, first_order_boundary=first_order)
        print(f"first_order_boundary={first_order}")
        print(rep.to_csv())


if __name__ == "__main__":
    main()
