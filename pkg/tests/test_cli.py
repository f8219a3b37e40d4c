import csv
import io
import json

import pytest

from sktlab.catalog import polymer_params
from sktlab.cli import SCHEMAS, main, validate_config
from sktlab.errors import ConfigError

FIG = {"d1": 1, "d12": 1, "d21": 1, "c2": 1, "a1": 2, "a2": 1, "b2": 0.1, "c1": 3.2}
FIG1 = {"tag": "Case1_Explicit30", "params": FIG, "C1": 3, "C2": 2, "C3": 4}
POLY = {"tag": "Polymer49", "d1": 1, "d2": 0.7, "K": 2, "a3": 0.4, "d3": 0.5, "C1": 1, "C2": 0.5, "C3": 4, "C4": 3}
POLY_PARAMS = polymer_params(1, 0.7, 2, 0.4, 0.5).to_dict()


@pytest.fixture
def run(tmp_path, capsys):
    def _run(command, config=None, out=None):
        argv = [command]
        if config is not None:
            path = tmp_path / "config.json"
            path.write_text(config if isinstance(config, str) else json.dumps(config))
            argv += ["--config", str(path)]
        if out is not None:
            argv += ["--out", str(tmp_path / out)]
        code = main(argv)
        cap = capsys.readouterr()
        return code, cap.out, cap.err

    return _run


class TestVerifyCommands:
    def test_case12_determining(self, run):
        code, out, _ = run("verify-determining", {"case": 12, "params": {}})
        rows = list(csv.DictReader(io.StringIO(out)))
        assert code == 0 and len(rows) == 12
        assert all(float(r["max_abs"]) <= 1e-10 for r in rows)

    def test_determining_all_draws(self, run):
        code, out, _ = run("verify-determining", {"case": 9, "draws": 2, "metric": "scaled"})
        rows = list(csv.DictReader(io.StringIO(out)))
        assert code == 0 and {r["report"] for r in rows} == {"determining:case9:Q11_0", "determining:case9:Q11"}

    def test_determining_failure_exit_1(self, run):
        # a Case-1 system with a Case-3 operator parameter set is not of case-1 form
        code, _, err = run("verify-determining", {"case": 1, "operator": "Q4"})
        assert code == 2 and "Q4" in err

    def test_solution(self, run):
        assert run("verify-solution", {"family": FIG1})[0] == 0

    def test_surface(self, run):
        assert run("verify-surface", {"family": FIG1})[0] == 0

    def test_surface_mismatch_exit_1(self, run):
        fam = dict(FIG1, params=dict(FIG, d12=16))
        op = {"kind": "Q1", "params": FIG}
        assert run("verify-surface", {"family": fam, "operator": op})[0] == 1

    def test_ode_family(self, run):
        assert run("verify-ode", {"family": POLY})[0] == 0

    def test_ode_consistency(self, run):
        cfg = {"row": "Q5", "params": {"d1": 1.2, "d12": 1, "d2": 0.6, "d21": 1, "c1": 0.5, "a2": 0.7, "b2": 0.5},
               "constants": {"alpha": 0.3}}
        assert run("verify-ode", cfg)[0] == 0
        assert run("verify-ode", dict(cfg, system="Q5_Printed"))[0] == 1

    def test_json_output(self, run, tmp_path):
        code, out, _ = run("verify-solution", {"family": POLY}, out="r.json")
        data = json.loads((tmp_path / "r.json").read_text())
        assert code == 0 and out == "" and data[0]["pass"]


class TestRunCommands:
    def test_scenario_fig1(self, run):
        code, out, _ = run("scenario", {"family": FIG1, "T": 10})
        assert code == 0 and json.loads(out)["verdict"] == "Extinction"

    def test_simulate_writes_sidecar(self, run, tmp_path):
        cfg = {"params": FIG, "grid": {"x_min": -3, "x_max": 3, "n": 11}, "time": {"t_end": 0.01},
               "boundary": {"kind": "DirichletFromFamily", "family": FIG1}, "initial": {"family": FIG1}}
        assert run("simulate", cfg, out="traj.csv")[0] == 0
        assert (tmp_path / "traj.csv").read_text().startswith("t,x,u,v\n")
        assert json.loads((tmp_path / "traj.json").read_text())["termination"] == "Completed"

    def test_converge_constant(self, run):
        cfg = {"params": FIG, "constant": [0, 1], "grids": [11, 21, 41], "t_end": 0.1}
        assert run("converge", cfg)[0] == 0

    def test_converge_first_order_exit_1(self, run):
        cfg = {"family": FIG1, "grids": [21, 41, 81], "t_end": 0.1, "first_order_boundary": True}
        assert run("converge", cfg)[0] == 1

    def test_conserve(self, run):
        cfg = {"params": POLY_PARAMS, "grid": {"x_min": -1, "x_max": 1, "n": 21}, "time": {"t_end": 0.01},
               "boundary": {"kind": "DirichletFromFamily", "family": POLY}, "initial": {"family": POLY},
               "weights": [{"species": "v", "sign": -1}], "tolerance": 1.0}
        code, out, _ = run("conserve", cfg)
        data = json.loads(out)
        assert code == 0 and data["weights"][0]["species"] == "v"

    def test_list_catalog(self, run):
        code, out, _ = run("list-catalog")
        data = json.loads(out)
        assert code == 0
        assert [c["case"] for c in data["cases"]] == list(range(1, 13))
        assert len(data["families"]) == 7


class TestInvalidConfig:
    def test_restriction_named(self, run):
        cfg = {"params": {"d1": 1, "a1": 1}, "grid": {"x_min": 0, "x_max": 1, "n": 11}, "time": {"t_end": 0.1},
               "boundary": {"kind": "NeumannZero"}, "initial": {"constant": [1, 1]}}
        code, _, err = run("simulate", cfg)
        assert code == 2 and "d12^2 + d21^2 != 0" in err

    def test_unknown_nested_key(self, run):
        code, _, err = run("verify-determining", {"case": 3, "sampling": {"nn": 3}})
        assert code == 2 and "config.sampling.nn: unknown key" in err

    def test_bad_json(self, run):
        assert run("scenario", "{not json")[0] == 2

    def test_missing_file(self, run, tmp_path):
        assert main(["scenario", "--config", str(tmp_path / "missing.json")]) == 2

    def test_unknown_command(self, run):
        assert run("simulate-all")[0] == 2

    def test_missing_required_key(self, run):
        code, _, err = run("scenario", {"family": FIG1})
        assert code == 2 and "config.T" in err

    def test_wrong_type(self):
        with pytest.raises(ConfigError, match=r"config.grid.n: expected an integer"):
            validate_config("simulate", {"grid": {"n": 1.5}})

    def test_every_command_has_schema(self):
        assert set(SCHEMAS) == {"verify-determining", "verify-solution", "verify-surface", "verify-ode",
                                "simulate", "converge", "scenario", "conserve", "list-catalog"}


class TestReproducible:
    def test_byte_identical(self, run):
        a = run("verify-determining", {"case": 6, "seed": 4})[1]
        b = run("verify-determining", {"case": 6, "seed": 4})[1]
        assert a == b
