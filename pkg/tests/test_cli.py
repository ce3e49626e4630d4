import json

import pytest

from idcep.cli import main


def run(args):
    return main([str(a) for a in args])


class TestSimulateCommand:
    def test_writes_csv(self, tmp_path, capsys):
        out = tmp_path / "d.csv"
        assert run(["simulate", "--scenario", 2, "--n", 600, "--seed", 7, "--out", out]) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "id,z,s_time,s_event,t_time,t_event"
        assert len(lines) == 601
        assert "perfect surrogate" in capsys.readouterr().out

    def test_byte_identical_reruns(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        run(["simulate", "--scenario", 3, "--n", 200, "--seed", 9, "--out", a])
        run(["simulate", "--scenario", 3, "--n", 200, "--seed", 9, "--out", b])
        assert a.read_bytes() == b.read_bytes()

    def test_bad_scenario_exit_code(self, tmp_path, capsys):
        assert run(["simulate", "--scenario", 42, "--out", tmp_path / "x.csv"]) == 1

    def test_missing_out_exit_code(self):
        assert run(["simulate", "--scenario", 2]) == 1


class TestConfigFile:
    def test_config_file_with_flag_override(self, tmp_path):
        cfg = tmp_path / "run.json"
        cfg.write_text(json.dumps({"scenario": 4, "n": 100, "seed": 3,
                                   "out": str(tmp_path / "c.csv")}))
        assert run(["simulate", "--config", cfg]) == 0
        assert (tmp_path / "c.csv").exists()
        # flag wins over the file
        assert run(["simulate", "--config", cfg, "--out", tmp_path / "d.csv"]) == 0
        assert (tmp_path / "d.csv").exists()

    def test_yaml_config(self, tmp_path):
        cfg = tmp_path / "run.yaml"
        cfg.write_text(f"scenario: 2\nn: 80\nout: {tmp_path / 'y.csv'}\n")
        assert run(["simulate", "--config", cfg]) == 0

    def test_unknown_key_rejected(self, tmp_path):
        cfg = tmp_path / "run.json"
        cfg.write_text(json.dumps({"bogus": 1}))
        assert run(["simulate", "--config", cfg]) == 1

    def test_config_round_trip_losslessly(self, tmp_path):
        values = {"scenario": 5, "n": 150, "seed": 12, "out": str(tmp_path / "r1.csv")}
        cfg = tmp_path / "run.json"
        cfg.write_text(json.dumps(values))
        assert json.loads(cfg.read_text()) == values
        run(["simulate", "--config", cfg])
        run(["simulate", "--scenario", 5, "--n", 150, "--seed", 12,
             "--out", tmp_path / "r2.csv"])
        assert (tmp_path / "r1.csv").read_bytes() == (tmp_path / "r2.csv").read_bytes()


class TestPipeline:
    @pytest.fixture(scope="class")
    def workdir(self, tmp_path_factory):
        d = tmp_path_factory.mktemp("pipe")
        run(["simulate", "--scenario", 2, "--n", 150, "--seed", 7, "--out", d / "d.csv"])
        rc = run(["fit", "--data", d / "d.csv", "--iters", 250, "--burnin", 80,
                  "--seed", 1, "--out-prefix", d / "run"])
        assert rc == 0
        return d

    def test_fit_artifacts(self, workdir):
        for suffix in ("_chain.csv", "_summary.json", "_manifest.json",
                       "_frailty_arm0.npy", "_frailty_arm1.npy"):
            assert (workdir / f"run{suffix}").exists()
        header = (workdir / "run_chain.csv").read_text().splitlines()[0]
        assert "gamma12_0" in header and "theta23_1" in header

    def test_cep_from_artifacts(self, workdir, capsys):
        rc = run(["cep", "--chain-prefix", workdir / "run", "--data", workdir / "d.csv",
                  "--seed", 2, "--out", workdir / "cep.json", "--svg", workdir / "cep.svg"])
        assert rc == 0
        out = json.loads((workdir / "cep.json").read_text())
        assert set(out) == {"config", "points", "lines", "summary"}
        assert len(out["points"]) == 150
        svg = (workdir / "cep.svg").read_text()
        assert svg.lstrip().startswith("<?xml")

    def test_cep_deterministic_artifact(self, workdir):
        run(["cep", "--chain-prefix", workdir / "run", "--data", workdir / "d.csv",
             "--seed", 2, "--out", workdir / "cep2.json"])
        a = json.loads((workdir / "cep.json").read_text())
        b = json.loads((workdir / "cep2.json").read_text())
        assert a == b

    def test_missing_data_exit_code(self, workdir):
        assert run(["cep", "--chain-prefix", workdir / "run",
                    "--data", workdir / "nope.csv", "--out", workdir / "x.json"]) == 2

    def test_prentice_command(self, workdir):
        rc = run(["prentice", "--data", workdir / "d.csv", "--out", workdir / "p.json"])
        assert rc == 0
        rep = json.loads((workdir / "p.json").read_text())
        assert set(rep) == {"s_on_z", "t_on_z", "t_on_z_plus_s"}

    def test_numerical_failure_exit_code(self, workdir, monkeypatch):
        from idcep import cli as cli_mod
        from idcep.prentice import NumericalError

        def boom(_data):
            raise NumericalError("no convergence after 200 iterations; gradient norm 1.2e+00")

        monkeypatch.setattr(cli_mod, "prentice_report", boom)
        assert run(["prentice", "--data", workdir / "d.csv"]) == 3


class TestTruthCommands:
    def test_truth_cep_output(self, tmp_path, capsys):
        rc = run(["truth-cep", "--scenario", 2, "--n-draws", 5000, "--seed", 1,
                  "--out", tmp_path / "t.json", "--max-points", 500])
        assert rc == 0
        out = json.loads((tmp_path / "t.json").read_text())
        assert len(out["points"]) <= 500
        assert len(out["lines"]) == 1
        assert "truth-cep:" in capsys.readouterr().out

    def test_truth_cep_byte_identical(self, tmp_path):
        for name in ("a", "b"):
            run(["truth-cep", "--scenario", 5, "--n-draws", 2000, "--seed", 3,
                 "--out", tmp_path / f"{name}.json"])
        assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()

    def test_explicit_scales(self, tmp_path):
        rc = run(["truth-cep", "--control-scales", "1,0.5,1",
                  "--treated-scales", "0.61,0.5,1", "--n-draws", 2000,
                  "--out", tmp_path / "e.json"])
        assert rc == 0

    def test_sweep_rows(self, tmp_path):
        rc = run(["sweep", "--scenario", 2, "--rho-s-grid", "0.25,0.5,0.75",
                  "--rho-t-grid", "0.25,0.5,0.75", "--n-draws", 2000,
                  "--out", tmp_path / "s.json"])
        assert rc == 0
        rows = json.loads((tmp_path / "s.json").read_text())
        assert len(rows) == 9
