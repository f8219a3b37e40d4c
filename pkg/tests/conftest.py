import pytest

from sktlab import CASES
from sktlab.catalog import SolutionFamily

# caption constants of the three competition scenarios, with c1 = 3.2
FIG_D12 = {"extinction": 1.0, "growth": 16.0, "coexistence": 11.0}


def fig_params(d12):
    return CASES[1].params(a1=2.0, a2=1.0, b2=0.1, c1=3.2, d12=d12)


def fig_family(d12):
    return SolutionFamily.case1_explicit30(fig_params(d12), 3.0, 2.0, 4.0)


def generic_case1(a2=0.4):
    return CASES[1].params(a1=0.7, a2=a2, b2=0.3, c1=0.5, d12=0.8)


def all_families():
    """Named verified families with generic constants."""
    fams = {f"explicit30_{k}": fig_family(d) for k, d in FIG_D12.items()}
    fams["a2_nonzero"] = SolutionFamily.case1_a2_nonzero(generic_case1(), 0.6, 0.4, 0.5, 0.3)
    fams["a2_zero"] = SolutionFamily.case1_a2_zero(generic_case1(0.0), 0.6, 0.4, 0.5, 0.3)
    fams["case9_f0"] = SolutionFamily.case9_f0(0.5, -0.7, 1.0, 0.5, 0.3, 0.2)
    fams["case9_exp"] = SolutionFamily.case9_exp(0.5, 0.6, 1.0, 0.5, 0.3)
    fams["case9_phi0"] = SolutionFamily.case9_phi0(0.5, 1.0, 0.5, 0.3, 0.2)
    fams["polymer49"] = SolutionFamily.polymer49(1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 4.0, 4.0)
    return fams


@pytest.fixture
def extinction_family():
    return fig_family(FIG_D12["extinction"])
