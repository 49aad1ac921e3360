import csv
import io
import json

import pytest

from qeclab import cli


def run(*argv):
    out = io.StringIO()
    code = cli.main(list(argv), out=out)
    return code, out.getvalue()


class TestCodes:
    def test_list(self):
        code, text = run("codes", "list")
        assert code == 0
        assert "steane7" in text and "[[7,1,3]]" in text

    def test_list_json(self):
        code, text = run("codes", "list", "--format", "json")
        rows = json.loads(text)
        assert {"family": "surface", "example": "surface(3)", "n": 18, "k": 1, "d": 3} in rows

    def test_show(self):
        code, text = run("codes", "show", "steane7")
        assert code == 0 and "+IIIXXXX" in text

    def test_show_params(self):
        code, text = run("codes", "show", "bacon_shor", "3", "3", "--format", "json")
        assert code == 0 and json.loads(text)["n"] == 9

    def test_unknown(self):
        assert run("codes", "show", "nosuch")[0] == cli.EXIT_USAGE


class TestDemo:
    def test_single_flip(self):
        code, text = run("demo", "rep3", "--error", "IXI")
        assert code == 0
        assert "seed: 0" in text and "syndrome: 10" in text
        assert "correction: IXI" in text and "outcome: success" in text

    def test_double_flip(self):
        code, text = run("demo", "rep3", "--error", "XXI", "--format", "json")
        data = json.loads(text)
        assert data["syndrome"] == "01" and data["correction"] == "IIX"
        assert data["outcome"] == "logical_failure"

    def test_detection_only(self):
        code, text = run("demo", "detect4", "--error", "ZIII")
        assert "detection: detected" in text and "syndrome: 01" in text

    def test_surface(self):
        code, text = run("demo", "surface", "3", "--error", "X" + "I" * 17, "--format", "json")
        assert json.loads(text)["outcome"] == "success"

    @pytest.mark.parametrize("err", ["XX", "QII"])
    def test_bad_error(self, err):
        assert run("demo", "rep3", "--error", err)[0] == cli.EXIT_USAGE


class TestRate:
    def test_text_reports_seed(self):
        code, text = run("rate", "--code", "rep3", "--channel", "bitflip", "--p", "0.1", "--trials", "500",
                         "--workers", "1")
        assert code == 0 and "seed=0" in text

    def test_csv_worker_independent(self):
        args = ["rate", "--code", "steane7", "--channel", "depolarizing", "--p", "0.05", "--trials", "6000",
                "--seed", "3", "--format", "csv"]
        a = run(*args, "--workers", "1")[1]
        b = run(*args, "--workers", "2")[1]
        assert a == b
        rows = list(csv.DictReader(io.StringIO(a)))
        assert rows[0]["code"] == "steane7" and rows[0]["seed"] == "3"

    def test_config_file(self, tmp_path):
        cfg = tmp_path / "run.ini"
        cfg.write_text("[code]\nname = rep3\n[channel]\ntype = bitflip\np = 0.2\n[run]\ntrials = 300\nseed = 7\n")
        code, text = run("rate", "--config", str(cfg), "--format", "json", "--workers", "1")
        data = json.loads(text)
        assert code == 0 and data["config"]["seed"] == 7 and data["estimate"]["trials"] == 300

    def test_config_unknown_key(self, tmp_path):
        cfg = tmp_path / "bad.ini"
        cfg.write_text("[run]\ntrails = 10\n")
        assert run("rate", "--config", str(cfg))[0] == cli.EXIT_USAGE

    def test_trace(self, tmp_path):
        trace = tmp_path / "t.jsonl"
        run("rate", "--code", "rep3", "--p", "0.3", "--trials", "50", "--trace", str(trace), "--workers", "1")
        lines = trace.read_text().splitlines()
        assert len(lines) == 50
        assert set(json.loads(lines[0])) == {"trial", "syndrome_bits", "correction", "outcome"}

    def test_output_file(self, tmp_path):
        dest = tmp_path / "r.csv"
        run("rate", "--code", "rep3", "--p", "0.1", "--trials", "100", "--format", "csv", "--output", str(dest))
        assert dest.read_text().startswith("code,N,p")

    def test_bad_values(self):
        assert run("rate", "--p", "1.5")[0] == cli.EXIT_USAGE
        assert run("rate", "--code", "detect4", "--p", "0.1")[0] == cli.EXIT_USAGE
        assert run("rate", "--trials", "x")[0] == cli.EXIT_USAGE


class TestScan:
    def test_csv(self):
        code, text = run("scan", "--N", "2", "3", "--p", "0.02", "0.05", "--trials", "400", "--format", "csv",
                         "--workers", "1")
        rows = list(csv.DictReader(io.StringIO(text)))
        assert code == 0 and len(rows) == 4
        assert [r["N"] for r in rows] == ["2", "2", "3", "3"]


    def test_config_without_channel_p(self, tmp_path):
        cfg = tmp_path / "scan.ini"
        cfg.write_text("[channel]\ntype = bitflip\n[run]\ntrials = 200\n[scan]\nn = 2, 3\np = 0.05\n")
        code, text = run("scan", "--config", str(cfg), "--format", "csv", "--workers", "1")
        assert code == 0 and len(text.splitlines()) == 3


class TestFtcheck:
    def test_fanout_fails(self):
        code, text = run("ftcheck", "fanout")
        assert code == cli.EXIT_CHECK
        assert "residual: XIIXXX (weight 4)" in text and "A=1, B=3" in text

    def test_pairwise_passes(self):
        code, text = run("ftcheck", "pairwise", "--format", "json")
        assert code == 0 and json.loads(text)["pass"] is True

    def test_file(self, tmp_path):
        f = tmp_path / "c.txt"
        f.write_text("QUBITS 2\nBLOCK A 0\nBLOCK B 1\nGATE CNOT 0 1\n")
        assert run("ftcheck", str(f))[0] == 0

    def test_parse_error(self, tmp_path):
        f = tmp_path / "c.txt"
        f.write_text("GATE\n")
        assert run("ftcheck", str(f))[0] == cli.EXIT_USAGE

    def test_missing_file(self):
        assert run("ftcheck", "/nonexistent/circuit")[0] == cli.EXIT_USAGE


class TestPrep:
    def test_noiseless(self):
        code, text = run("prep", "--format", "json")
        data = json.loads(text)
        assert code == 0 and data["seed"] == 0 and data["data_error_weight"] == 0


def test_no_command():
    assert run()[0] == cli.EXIT_USAGE
