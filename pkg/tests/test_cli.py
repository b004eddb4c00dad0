import csv
import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from grassmann_sph import cli
from grassmann_sph.series import SeriesReport
from grassmann_sph.bounds import RatioSweepReport


def invoke(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestParse:
    def test_eval(self):
        cfg = cli.parse_args(["eval", "--p", "3", "--q", "2", "--t", "1/5,1/7", "--m", "3,1"])
        assert (cfg.subcommand, cfg.p, cfg.q, cfg.point, cfg.weight) == ("eval", 3, 2, "1/5,1/7", (3, 1))
        assert cfg.mode == "auto" and cfg.format == "text"

    def test_series(self):
        cfg = cli.parse_args(["series", "--p", "3", "--q", "2", "--t", "1/5,1/7", "--k", "2",
                              "--nmax", "60", "--format", "json", "--s", "1/2"])
        assert cfg.k == 2 and cfg.n_max == 60 and cfg.format == "json" and cfg.s == Fraction(1, 2)

    def test_threads_env(self, monkeypatch):
        monkeypatch.setenv(cli.THREADS_ENV, "3")
        assert cli.parse_args(["thresholds", "--p", "3", "--q", "2"]).threads == 3

    @pytest.mark.parametrize("argv,needle", [
        (["eval", "--p", "2", "--q", "3", "--t", "1/5,1/7", "--m", "1,0"], "invalid rank parameters"),
        (["eval", "--p", "3", "--q", "2", "--m", "1,0"], "--t"),
        (["eval", "--p", "3", "--q", "2", "--t", "1/5,1/7"], "--m"),
        (["eval", "--p", "3", "--q", "2", "--t", "1/5", "--m", "1,0"], "--t"),
        (["eval", "--p", "3", "--q", "2", "--t", "1/5,1/7", "--m", "0,1"], "--m"),
        (["eval", "--p", "3", "--q", "2", "--t", "1/5,1/7", "--m", "1,0", "--n", "2,0"], "--n"),
        (["series", "--p", "3", "--q", "2", "--t", "1/5,1/7"], "--k"),
        (["series", "--p", "3", "--q", "2", "--t", "1/5,1/7", "--k", "0"], "--k"),
        (["sweep", "--p", "3", "--q", "2", "--t", "1/5,1/7"], "--kind"),
        (["sweep", "--p", "3", "--q", "2", "--t", "1/5,1/7", "--kind", "bogus"], "--kind"),
        (["classify", "--p", "3", "--q", "2", "--t", "a,b"], "--t"),
        (["thresholds", "--p", "3"], "--q"),
        (["frobnicate"], "invalid choice"),
    ])
    def test_usage_errors(self, capsys, argv, needle):
        with pytest.raises(SystemExit) as exc:
            cli.parse_args(argv)
        assert exc.value.code == 2
        assert needle in capsys.readouterr().err


class TestRun:
    def test_thresholds(self, capsys):
        code, out, _ = invoke(capsys, "thresholds", "--p", "3", "--q", "2")
        assert code == 0
        for line in ("k_main=6", "k_regular=2", "k_prior=3"):
            assert line in out.splitlines()

    def test_kmin(self, capsys):
        code, out, _ = invoke(capsys, "kmin", "--p", "3", "--q", "2", "--t", "1/5,1/7", "--kcap", "6")
        assert code == 0 and out.strip() == "2"

    def test_kmin_none(self, capsys):
        code, out, _ = invoke(capsys, "kmin", "--p", "2", "--q", "2", "--t", "1/2,1/2", "--kcap", "4")
        assert code == 0 and out.strip() == "none <= 4"

    def test_eval_json(self, capsys):
        code, out, _ = invoke(capsys, "eval", "--p", "2", "--q", "2", "--t", "1/4,0", "--m", "1,0",
                              "--format", "json")
        doc = json.loads(out)
        assert code == 0
        assert set(doc) == {"space", "point", "params", "results", "calibration", "version"}
        assert doc["results"]["value"] == pytest.approx(0.5)
        assert doc["space"] == {"p": 2, "q": 2}

    def test_eval_oracle_nodes(self, capsys):
        code, out, _ = invoke(capsys, "eval", "--p", "2", "--q", "2", "--nodes", "1/2,-1/3",
                              "--m", "1,0", "--mode", "oracle")
        assert code == 0 and "value=1/12" in out

    def test_check_normalization(self, capsys):
        code, out, _ = invoke(capsys, "check", "--suite", "normalization")
        assert code == 0 and "passed=True" in out

    @pytest.mark.parametrize("suite", ["boundedness", "oracle", "calibration"])
    def test_other_suites(self, capsys, suite):
        assert invoke(capsys, "check", "--suite", suite)[0] == 0

    def test_failed_check(self, capsys, monkeypatch):
        monkeypatch.setattr(cli, "run_suite", lambda name, threads=1: {"passed": False})
        assert invoke(capsys, "check", "--suite", "oracle")[0] == 3

    def test_computation_error(self, capsys):
        code, _, err = invoke(capsys, "eval", "--p", "3", "--q", "2", "--t", "1/5,1/5", "--m", "1,0",
                              "--mode", "generic")
        assert code == 1 and "confluent point" in err
        code, _, err = invoke(capsys, "eval", "--p", "3", "--q", "2", "--t", "1/5,1/7", "--m", "1,0",
                              "--mode", "oracle")
        assert code == 1 and "irrational node" in err

    def test_inconclusive_is_error(self, capsys):
        code, _, err = invoke(capsys, "kmin", "--p", "4", "--q", "3", "--t", "1/2,1/2,1/2")
        assert code == 1 and "inconclusive at boundary" in err

    def test_output_file(self, capsys, tmp_path):
        target = tmp_path / "out.json"
        code, out, _ = invoke(capsys, "classify", "--p", "3", "--q", "2", "--t", "1/6,1/6",
                              "--format", "json", "--output", str(target))
        assert code == 0 and out == ""
        assert json.loads(target.read_text())["results"]["blocks"] == [[0, 1]]


class TestFormats:
    args = ["series", "--p", "3", "--q", "2", "--t", "1/5,1/7", "--k", "2", "--nmax", "30"]

    def test_csv_json_agree(self, capsys):
        _, as_json, _ = invoke(capsys, *self.args, "--format", "json")
        _, as_csv, _ = invoke(capsys, *self.args, "--format", "csv")
        res = json.loads(as_json)["results"]
        rows = list(csv.DictReader(io.StringIO(as_csv)))
        assert [int(r["shell"]) for r in rows] == res["shells"]
        assert [float(r["shell_sum"]) for r in rows] == res["shell_sums"]
        assert [float(r["partial_sum"]) for r in rows] == res["partial_sums"]

    def test_sweep_csv_json_agree(self, capsys):
        args = ["sweep", "--p", "3", "--q", "2", "--t", "1/2,1/2", "--kind", "minus_one", "--nmax", "20"]
        _, as_json, _ = invoke(capsys, *args, "--format", "json")
        _, as_csv, _ = invoke(capsys, *args, "--format", "csv")
        res = json.loads(as_json)["results"]
        rows = list(csv.DictReader(io.StringIO(as_csv)))
        assert [float(r["max_ratio"]) for r in rows] == res["max_ratio_per_shell"]
        assert RatioSweepReport.from_dict(res).to_dict() == res

    def test_json_round_trip(self, capsys):
        _, as_json, _ = invoke(capsys, *self.args, "--format", "json")
        res = json.loads(as_json)["results"]
        assert SeriesReport.from_dict(res).to_dict() == res

    def test_threads_reproducible(self, capsys):
        _, one, _ = invoke(capsys, *self.args, "--format", "json", "--threads", "1")
        _, many, _ = invoke(capsys, *self.args, "--format", "json", "--threads", "5")
        assert one == many


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "grassmann_sph", "eval", "--p", "2", "--q", "3",
                           "--t", "0,0,0", "--m", "0,0,0"], capture_output=True, text=True)
    assert proc.returncode == 2
    assert "invalid rank parameters" in proc.stderr
