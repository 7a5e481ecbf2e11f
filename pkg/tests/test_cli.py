import json

import pytest

from haarlaw.cli import main
from haarlaw.harness import COMPARISONS


def run_json(argv, tmp_path, name="out.json"):
    out = tmp_path / name
    code = main(argv + ["--out", str(out)])
    return code, json.loads(out.read_text())


def strip_timing(data):
    data["metadata"].pop("wall_time", None)
    data["metadata"]["config"].pop("out", None)
    return data


class TestSample:
    def test_documented_example(self, capsys):
        assert main(["sample", "unitary-product", "--n", "1", "--count", "3", "--seed", "0"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "index,re,im" and len(lines) == 4
        for line in lines[1:]:
            _, re, im = line.split(",")
            assert abs(complex(float(re), float(im)) - 1) == pytest.approx(1.0)

    def test_byte_identical(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for path in (a, b):
            assert main(["sample", "permutation-det", "--n", "5", "--count", "500", "--seed", "9",
                         "--out", str(path)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_workers_do_not_change_output(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        main(["sample", "unitary-product", "--count", "5000", "--out", str(a)])
        main(["sample", "unitary-product", "--count", "5000", "--workers", "2", "--out", str(b)])
        assert a.read_bytes() == b.read_bytes()

    def test_json(self, tmp_path):
        out = tmp_path / "s.json"
        assert main(["sample", "first-column-law", "--n", "4", "--count", "7", "--format", "json",
                     "--out", str(out)]) == 0
        data = json.loads(out.read_text())
        assert data["count"] == 7 and len(data["values"]) == 7
        assert data["config"]["target"] == "first-column-law"

    def test_unknown_sampler(self):
        with pytest.raises(SystemExit) as exc:
            main(["sample", "nope"])
        assert exc.value.code == 2


class TestCompare:
    def test_pass_and_config(self, tmp_path):
        code, data = run_json(["compare", "cor11", "--n", "6", "--count", "3000", "--seed", "4"], tmp_path)
        assert code == 0 and data["verdict"] == "pass"
        assert data["metadata"]["config"]["n"] == 6

    def test_reproducible_up_to_timing(self, tmp_path):
        argv = ["compare", "cor12", "--n", "6", "--count", "2000", "--seed", "5"]
        _, a = run_json(argv, tmp_path, "a.json")
        _, b = run_json(argv, tmp_path, "b.json")
        assert strip_timing(a) == strip_timing(b)

    def test_help_lists_comparisons(self, capsys):
        with pytest.raises(SystemExit):
            main(["compare", "--help"])
        text = capsys.readouterr().out
        for name in COMPARISONS:
            assert name in text


class TestOtherCommands:
    def test_cycles(self, tmp_path):
        code, data = run_json(["cycles", "--n", "3", "--count", "20000"], tmp_path)
        assert code == 0
        assert set(data["metadata"]["exact_law"]) == {"1", "2", "3"}

    def test_clt(self, tmp_path):
        code, data = run_json(["clt", "--n", "50", "--n-small", "10", "--count", "2000"], tmp_path)
        assert code in (0, 1)
        assert len(data["moments"]) == 2 and data["functionals"][0]["name"].startswith("normality")

    def test_process_csv(self, tmp_path):
        out = tmp_path / "p.csv"
        assert main(["process", "--n", "20", "--count", "2", "--tgrid", "0,0.5", "--out", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "path,t,re,im" and len(lines) == 5

    def test_bench(self, tmp_path):
        out = tmp_path / "b.json"
        assert main(["bench", "--n", "8", "--count", "1", "--out", str(out)]) == 0
        assert json.loads(out.read_text())["speedup"] > 0


class TestErrors:
    @pytest.mark.parametrize("argv", [
        ["process", "--tgrid", "0,1.0"],
        ["process", "--tgrid", "0.5,0.2"],
        ["sample", "unitary-product", "--n", "0"],
        ["sample", "unitary-product", "--count", "0"],
        ["sample", "unitary-product", "--seed", "-1"],
        ["clt", "--n", "10", "--n-small", "20"],
        ["sample", "unitary-product", "--out", "/nonexistent/dir/x.csv"],
    ])
    def test_exit_code_2(self, argv, capsys):
        assert main(argv) == 2
        assert "error" in capsys.readouterr().err

    def test_failing_verdict_exit_code(self, tmp_path):
        # 40-sample cycle law cannot reach TV < 0.01
        code, data = run_json(["cycles", "--n", "8", "--count", "40"], tmp_path)
        assert code == 1 and data["verdict"] == "fail"
