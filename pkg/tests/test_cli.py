"""Command-line driver: flag validation, exit codes, outputs, config
file precedence, and the manifest."""

import json

import pytest

from mimodetect import cli
from mimodetect.cli import main, parse_ebn0_grid, read_config_file


def _simulate_args(tmp_path, *extra):
    out = tmp_path / "sweep.csv"
    return ["simulate", "--mod", "qpsk", "--detector", "mmse",
            "--ebn0", "0,6", "--target-errors", "20",
            "--max-symbols", "4096", "--out", str(out), *extra], out


class TestGridParsing:
    def test_colon_syntax(self):
        assert parse_ebn0_grid("0:2:6") == (0.0, 2.0, 4.0, 6.0)

    def test_inclusive_stop_with_float_step(self):
        grid = parse_ebn0_grid("0:1.5:6")
        assert grid == (0.0, 1.5, 3.0, 4.5, 6.0)

    def test_comma_list(self):
        assert parse_ebn0_grid("1,3,9.5") == (1.0, 3.0, 9.5)

    def test_reversed_range_is_empty(self):
        assert parse_ebn0_grid("10:2:4") == ()

    def test_nonpositive_step_rejected(self):
        with pytest.raises(ValueError):
            parse_ebn0_grid("0:-1:10")

    def test_malformed_rejected(self):
        with pytest.raises(ValueError):
            parse_ebn0_grid("0:1:2:3")


class TestSimulateValidation:
    def test_missing_mod_exits_2(self, tmp_path, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["simulate", "--detector", "mmse",
                  "--out", str(tmp_path / "x.csv")])
        assert exc.value.code == 2

    def test_empty_grid_exits_2(self, tmp_path):
        args, _ = _simulate_args(tmp_path)
        args[args.index("0,6")] = "10:2:4"
        with pytest.raises(SystemExit) as exc:
            main(args)
        assert exc.value.code == 2

    def test_missing_detector_exits_2(self, tmp_path):
        with pytest.raises(SystemExit) as exc:
            main(["simulate", "--mod", "qpsk",
                  "--out", str(tmp_path / "x.csv")])
        assert exc.value.code == 2

    def test_unknown_detector_exits_2(self, tmp_path):
        with pytest.raises(SystemExit) as exc:
            main(["simulate", "--mod", "qpsk", "--detector", "sphere",
                  "--out", str(tmp_path / "x.csv")])
        assert exc.value.code == 2

    def test_unknown_mod_exits_2(self, tmp_path):
        with pytest.raises(SystemExit):
            main(["simulate", "--mod", "1024apsk", "--detector", "mmse",
                  "--out", str(tmp_path / "x.csv")])


class TestSimulateRun:
    def test_writes_csv_and_manifest(self, tmp_path):
        args, out = _simulate_args(tmp_path)
        assert main(args) == 0
        assert out.exists()
        manifest = json.loads(
            (tmp_path / "sweep.manifest.json").read_text())
        assert manifest["config"]["constellation"] == "qpsk"
        assert manifest["config"]["detectors"] == ["mmse"]
        assert manifest["config"]["ebn0_db"] == [0.0, 6.0]
        assert manifest["outputs"] == [str(out)]
        header = out.read_text().splitlines()[0]
        assert header == ("detector,constellation,nr,ebn0_db,symbols,"
                          "bits,bit_errors,ber,ns_per_symbol")

    def test_identical_invocations_identical_csv(self, tmp_path):
        args_a, out_a = _simulate_args(tmp_path / "a")
        args_b, out_b = _simulate_args(tmp_path / "b")
        (tmp_path / "a").mkdir()
        (tmp_path / "b").mkdir()
        assert main(args_a) == 0
        assert main(args_b) == 0
        a = out_a.read_bytes()
        # ns_per_symbol is wall-clock and varies run to run; compare the
        # deterministic columns
        strip = lambda raw: [",".join(line.split(",")[:8])
                             for line in raw.decode().splitlines()]
        assert strip(a) == strip(out_b.read_bytes())

    def test_strict_flags_under_sampled(self, tmp_path):
        args, _ = _simulate_args(tmp_path, "--strict")
        args[args.index("--target-errors") + 1] = "1000000"
        assert main(args) == 3

    def test_plot_emits_svg(self, tmp_path):
        args, out = _simulate_args(tmp_path, "--plot")
        assert main(args) == 0
        svg = tmp_path / "sweep.svg"
        assert svg.exists()
        assert b"<svg" in svg.read_bytes()

    def test_maxlog_flag_renames_approx_detectors(self, tmp_path):
        args, out = _simulate_args(tmp_path, "--maxlog")
        args[args.index("mmse")] = "ring-t1"
        assert main(args) == 0
        manifest = json.loads(
            (tmp_path / "sweep.manifest.json").read_text())
        assert manifest["config"]["detectors"] == ["ring-t1-max"]


class TestConfigFile:
    def test_key_value_parsing(self, tmp_path):
        cfgfile = tmp_path / "run.cfg"
        cfgfile.write_text("# comment\nmod = 8psk\n\nseed=9 # trailing\n")
        assert read_config_file(cfgfile) == {"mod": "8psk", "seed": "9"}

    def test_malformed_line_rejected(self, tmp_path):
        cfgfile = tmp_path / "run.cfg"
        cfgfile.write_text("mod 8psk\n")
        with pytest.raises(ValueError):
            read_config_file(cfgfile)

    def test_file_values_fill_defaults_flags_win(self, tmp_path):
        cfgfile = tmp_path / "run.cfg"
        cfgfile.write_text("mod=8psk\nseed=9\ntarget-errors=20\n"
                           "max-symbols=4096\ndetector=mmse\nebn0=0,6\n")
        out = tmp_path / "s.csv"
        # --mod given on the command line overrides the file; everything
        # else comes from the file
        assert main(["simulate", "--mod", "qpsk", "--config", str(cfgfile),
                     "--out", str(out)]) == 0
        manifest = json.loads((tmp_path / "s.manifest.json").read_text())
        assert manifest["config"]["constellation"] == "qpsk"
        assert manifest["config"]["seed"] == 9
        assert manifest["config"]["detectors"] == ["mmse"]

    def test_unknown_config_key_exits_2(self, tmp_path):
        cfgfile = tmp_path / "run.cfg"
        cfgfile.write_text("modulation=qpsk\n")
        with pytest.raises(SystemExit) as exc:
            main(["simulate", "--mod", "qpsk", "--detector", "mmse",
                  "--config", str(cfgfile),
                  "--out", str(tmp_path / "s.csv")])
        assert exc.value.code == 2


class TestBenchCommand:
    def test_prints_table(self, capsys):
        assert main(["bench", "--mod", "qpsk", "--detector", "mmse",
                     "--detector", "ring-t1", "--symbols", "8192"]) == 0
        out = capsys.readouterr().out
        assert "mmse" in out
        assert "ring-t1" in out
        assert "ns/symbol" in out


class TestVerifyCommand:
    def test_exit_zero_when_all_pass(self, capsys, monkeypatch):
        monkeypatch.setattr(cli, "run_all",
                            lambda seed=0: [("a", True, "ok"),
                                            ("b", True, "ok")])
        assert main(["verify"]) == 0
        out = capsys.readouterr().out
        assert out.count("PASS") == 2

    def test_exit_nonzero_on_failure(self, capsys, monkeypatch):
        monkeypatch.setattr(cli, "run_all",
                            lambda seed=0: [("a", True, "ok"),
                                            ("b", False, "bad")])
        assert main(["verify"]) == 1
        assert "FAIL" in capsys.readouterr().out


class TestThreadsEnvFallback:
    def test_env_var_sets_default(self, tmp_path, monkeypatch):
        monkeypatch.setenv("MIMO_DETECT_THREADS", "2")
        args, _ = _simulate_args(tmp_path)
        assert main(args) == 0
        manifest = json.loads(
            (tmp_path / "sweep.manifest.json").read_text())
        assert manifest["config"]["threads"] == 2
