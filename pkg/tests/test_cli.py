import csv
import io
import json

import pytest
from hypothesis import given, settings, strategies as st

from genbessel.cli import _COMPLEX_RE, parse_complex, run


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestComplexGrammar:
    @pytest.mark.parametrize("text,value", [
        ("1", 1), ("0.75", 0.75), ("-2", -2), ("2i", 2j), ("-.5i", -0.5j), ("1.5+0.5i", 1.5 + 0.5j),
        ("1.5-0.5i", 1.5 - 0.5j), ("1e-3+2E2i", 0.001 + 200j), ("+3", 3), (".25", 0.25),
    ])
    def test_accepted(self, text, value):
        assert parse_complex(text) == value

    @pytest.mark.parametrize("text", ["", "i", "1+i", "1 + 2i", "1+2j", "nan", "inf", "1+2i3", "--1", "1e", "0x1"])
    def test_rejected(self, text):
        with pytest.raises(ValueError):
            parse_complex(text)

    @settings(max_examples=60, deadline=None)
    @given(st.text(alphabet="0123456789.+-eEij xa", min_size=1, max_size=8))
    def test_malformed_literal_exits_2(self, text):
        if _COMPLEX_RE.match(text):
            return
        assert run(["eval", "gamma", f"--s={text}"]) == 2


class TestExitCodes:
    def test_watson_example(self, capsys):
        code, out, _ = call(capsys, "verify", "watson", "--x", "1", "--z", "0.75", "--tol", "1e-8",
                            "--no-timestamp")
        assert code == 0
        (rep,) = json.loads(out)
        assert rep["passed"] and rep["rel_residual"] <= 1e-8
        assert "wall_time_ms" not in rep

    def test_failed_verification_exits_1(self, capsys):
        code, out, _ = call(capsys, "verify", "watson_kzw", "--x", "1", "--z", "0.75", "--w", "0.3",
                            "--terms", "5", "--tol", "1e-10")
        assert code == 1
        assert not json.loads(out)[0]["passed"]

    @pytest.mark.parametrize("argv", [
        ["verify", "watson", "--x", "1"],
        ["verify", "nosuch", "--x", "1", "--z", "1"],
        ["verify", "watson", "--x", "1", "--z", "0.75", "--bogus", "1"],
        ["verify", "ramanujan_guinand", "--alpha", "2", "--beta", "4.934802200544679", "--z", "2"],
        ["verify", "watson", "--x", "-1", "--z", "0.75"],
        ["eval", "gamma", "--s", "0"],
        ["eval", "gamma", "--s", "-2"],
        ["verify"],
        ["frobnicate", "watson"],
        ["verify", "watson", "--z", "1", "--x", "1", "--terms", "0"],
        ["selftest", "--only", "nosuch"],
    ])
    def test_usage_and_domain_errors_exit_2(self, capsys, argv):
        code, _, err = call(capsys, *argv)
        assert code == 2
        assert "genbessel" in err

    def test_tail_bound_flag(self, capsys):
        code, out, _ = call(capsys, "verify", "watson", "--x", "1", "--z", "0.75", "--tail-bound",
                            "--tail-tol", "1e-14", "--no-timestamp")
        assert code == 0
        rep = json.loads(out)[0]
        assert all(s["tail"] <= 1e-14 for s in rep["series"])


class TestEval:
    def test_k_zw_two_methods(self, capsys):
        code, out, _ = call(capsys, "eval", "k_zw", "--z", "0.75", "--w", "0.5", "--x", "1", "--output", "json")
        assert code == 0
        d = json.loads(out)
        a, b = d["values"]["integral"], d["values"]["mellin_barnes"]
        assert abs(complex(a["re"], a["im"]) - complex(b["re"], b["im"])) == pytest.approx(d["difference"])
        assert d["difference"] <= 1e-10

    def test_k_text(self, capsys):
        code, out, _ = call(capsys, "eval", "k", "--z", "0.5", "--x", "2")
        assert code == 0
        assert "cosh_integral" in out and "difference" in out

    def test_theorem_sides(self, capsys):
        code, out, _ = call(capsys, "eval", "ramanujan_guinand", "--alpha", "3.14159265358979",
                            "--beta", "3.14159265358979", "--z", "1.3", "--output", "json")
        assert code == 0
        v = json.loads(out)["values"]
        assert abs(v["lhs"]["re"]) <= 1e-13 and abs(v["rhs"]["re"]) <= 1e-13

    def test_negative_complex_value(self, capsys):
        code, out, _ = call(capsys, "eval", "gamma", "--s", "-0.6+0.1i", "--output", "csv")
        assert code == 0
        rows = list(csv.reader(io.StringIO(out)))
        assert rows[0] == ["id", "name", "re", "im"]
        assert float(rows[1][2]) == pytest.approx(-3.506739659449917, rel=1e-12)


class TestOutputs:
    ARGS = ("verify", "watson_kzw", "--x", "1", "--z", "0.75", "--w", "0.3+0.2i", "--no-timestamp")

    def test_csv(self, capsys):
        code, out, _ = call(capsys, *self.ARGS, "--output", "csv")
        assert code == 0
        rows = list(csv.DictReader(io.StringIO(out)))
        assert len(rows) == 1
        assert float(rows[0]["w_im"]) == 0.2
        assert {"lhs_re", "lhs_im", "rhs_re", "rhs_im", "rel_residual", "passed"} <= set(rows[0])

    def test_text(self, capsys):
        code, out, _ = call(capsys, *self.ARGS, "--output", "text")
        assert code == 0
        assert out.startswith("[PASS] watson_kzw")

    def test_out_file(self, capsys, tmp_path):
        path = tmp_path / "r.json"
        code, out, _ = call(capsys, *self.ARGS, "--out", str(path))
        assert code == 0 and out == ""
        assert json.loads(path.read_text())[0]["theorem"] == "watson_kzw"

    def test_byte_identical(self, capsys):
        _, a, _ = call(capsys, *self.ARGS)
        _, b, _ = call(capsys, *self.ARGS)
        assert a == b


class TestConfig:
    def test_file_values_and_override(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("# probe\nx = 1\nz = 0.75\ntol = 1e-8\nno-timestamp = true\noutput = json\n")
        code, out, _ = call(capsys, "verify", "watson", "--config", str(cfg))
        assert code == 0
        rep = json.loads(out)[0]
        assert rep["params"]["z"]["re"] == 0.75 and rep["tol"] == 1e-8
        code, out, _ = call(capsys, "verify", "watson", "--config", str(cfg), "--z", "1.5+0.5i", "--tol", "1e-7")
        rep = json.loads(out)[0]
        assert rep["params"]["z"] == {"re": 1.5, "im": 0.5} and rep["tol"] == 1e-7

    @pytest.mark.parametrize("body", ["x 1\n", "colour = red\n", "z = 1+\n", "output = xml\n"])
    def test_bad_file(self, capsys, tmp_path, body):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text(body)
        assert call(capsys, "verify", "watson", "--config", str(cfg))[0] == 2

    def test_missing_file(self, capsys, tmp_path):
        assert call(capsys, "verify", "watson", "--config", str(tmp_path / "none.cfg"))[0] == 2


class TestSweep:
    def test_order_with_workers(self, capsys):
        argv = ("sweep", "watson_kzw", "--x", "1", "--w", "0.3", "--z-range", "0.5:1.5:0.25", "--z-imag", "0.1",
                "--no-timestamp", "--output", "json")
        code, out, _ = call(capsys, *argv, "--jobs", "3")
        assert code == 0
        reps = json.loads(out)
        assert [r["params"]["z"]["re"] for r in reps] == [0.5, 0.75, 1.0, 1.25, 1.5]
        assert all(r["params"]["z"]["im"] == 0.1 for r in reps)
        _, serial, _ = call(capsys, *argv, "--jobs", "1")
        assert serial == out

    def test_gate_failures_embedded(self, capsys):
        code, out, _ = call(capsys, "sweep", "watson", "--x", "1", "--z-range", "0:1:0.5", "--jobs", "1",
                            "--no-timestamp")
        assert code == 1
        reps = json.loads(out)
        assert reps[0]["error"].startswith("DomainGate") and reps[0]["lhs"] is None
        assert reps[1]["passed"] and reps[2]["passed"]

    def test_needs_range(self, capsys):
        assert call(capsys, "sweep", "watson", "--x", "1")[0] == 2


class TestLemmaAndSelftest:
    def test_lemma(self, capsys):
        code, out, _ = call(capsys, "lemma", "kzw", "--z", "0.75", "--w", "0.5", "--x", "1", "--a", "6.283185307179586",
                            "--no-timestamp")
        assert code == 0
        assert json.loads(out)[0]["abs_residual"] <= 1e-6

    def test_unknown_lemma(self, capsys):
        assert call(capsys, "lemma", "nope", "--z", "1")[0] == 2

    def test_selftest_only(self, capsys):
        code, out, _ = call(capsys, "selftest", "--only", "special_functions")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0].startswith("[PASS] 11") and lines[-1] == "1/1 criteria passed"

    def test_selftest_json(self, capsys):
        code, out, _ = call(capsys, "selftest", "--only", "special_functions,12", "--json")
        assert code == 0
        data = json.loads(out)
        assert [d["criterion"] for d in data] == [11, 12]
        assert all(d["passed"] for d in data)
