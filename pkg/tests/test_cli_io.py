import csv
import io
import json
import subprocess
import sys
from fractions import Fraction as F

import pytest

from zmeasures import cli, verify
from zmeasures.exact import parse_exact
from zmeasures.io import dumps_json, emit, emit_csv, format_float


def run_cli(argv, capsysbinary):
    code = cli.main(argv)
    out, err = capsysbinary.readouterr()
    return code, out, err.decode()


# serialization -------------------------------------------------------------------

def test_floats_round_trip():
    for x in (0.1, 1 / 3, 2 ** -40, 6.02214076e23, -7.5):
        assert float(format_float(x)) == x
        assert len(format_float(1 / 3).replace("0.", "")) == 17


def test_json_scalars():
    text = dumps_json({"q": F(-3, 4), "g": parse_exact("1/2-1i"), "c": 1 + 2j, "n": None, "b": True, "i": 3})
    data = json.loads(text)
    assert data == {"q": "-3/4", "g": "1/2-1i", "c": {"re": 1.0, "im": 2.0}, "n": None, "b": True, "i": 3}
    assert text.endswith("\n")


def test_emit_wraps_and_is_utf8():
    raw = emit({"x": 0.5})
    assert raw.endswith(b"\n")
    data = json.loads(raw.decode("utf-8"))
    assert data["result"] == {"x": 0.5}
    assert "17" in data["float_precision"]
    with pytest.raises(ValueError):
        emit({}, "xml")


def test_csv_columns_fixed():
    rows = [{"b": 1, "a": F(1, 3)}, {"a": 0.25, "b": None}]
    text = emit_csv(rows, ["a", "b"])
    assert text.splitlines() == ["a,b", "1/3,1", "0.25,"]
    assert emit_csv([], ["a"]) == "a\n"


# CLI ---------------------------------------------------------------------------------

def test_measure_json_round_trip(capsysbinary):
    code, out, _ = run_cli(["measure", "--n", "2"], capsysbinary)
    assert code == 0
    res = json.loads(out)["result"]
    assert res["n"] == 2 and res["series"] == "principal"
    vals = {tuple(r["partition"]): r for r in res["rows"]}
    assert vals[(2,)]["value"] == "5/6" and vals[(1, 1)]["value"] == "1/6"
    assert vals[(2,)]["value_num"] == 5 and vals[(2,)]["value_den"] == 6
    assert sum(F(r["value"]) for r in res["rows"]) == 1


def test_measure_csv_columns(capsysbinary):
    outs = []
    for _ in range(2):
        code, out, _ = run_cli(["measure", "--n", "3", "--format", "csv"], capsysbinary)
        assert code == 0
        outs.append(out)
    assert outs[0] == outs[1]
    rows = list(csv.reader(io.StringIO(outs[0].decode())))
    assert rows[0] == ["partition", "n", "value", "value_num", "value_den", "value_float"]
    assert [r[0] for r in rows[1:]] == ["3", "2,1", "1,1,1"]


def test_deterministic_sample(capsysbinary):
    argv = ["sample", "--n", "12", "--samples", "30", "--seed", "5", "--emit", "records"]
    a = run_cli(argv, capsysbinary)
    b = run_cli(argv, capsysbinary)
    assert a[0] == 0 and a[1] == b[1]
    c = run_cli(argv[:-4] + ["--seed", "6", "--emit", "records"], capsysbinary)
    assert c[1] != a[1]


def test_config_and_override(tmp_path, capsysbinary):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"z": "3/10", "zp": "2/5", "theta": "1/2", "n": 2}))
    code, out, _ = run_cli(["measure", "--config", str(cfg)], capsysbinary)
    assert code == 0
    res = json.loads(out)["result"]
    assert res["series"] == "complementary"
    code, out, _ = run_cli(["measure", "--config", str(cfg), "--n", "3"], capsysbinary)
    assert json.loads(out)["result"]["n"] == 3
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"colour": 1}))
    code, _, err = run_cli(["measure", "--config", str(bad)], capsysbinary)
    assert code == 2 and "colour" in err


def test_output_file(tmp_path, capsysbinary):
    target = tmp_path / "m.json"
    code, out, _ = run_cli(["measure", "--n", "1", "--output", str(target)], capsysbinary)
    assert code == 0 and out == b""
    assert json.loads(target.read_text())["result"]["rows"][0]["value"] == "1"


def test_usage_errors(capsysbinary):
    assert run_cli(["measure"], capsysbinary)[0] == 2
    assert run_cli(["measure", "--n", "2", "--z", "one"], capsysbinary)[0] == 2
    assert run_cli(["nonsense"], capsysbinary)[0] == 2
    assert run_cli(["verify", "--suite", "nope"], capsysbinary)[0] == 2
    assert run_cli(["measure", "--n", "2", "--tol", "-1"], capsysbinary)[0] == 2


def test_capability_exit(capsysbinary):
    code, _, err = run_cli(["corr-limit", "--kind", "boundary", "--z", "3/2", "--zp", "1/2", "--theta", "1",
                            "--k", "1", "--x", "0.5"], capsysbinary)
    assert code == 3 and "capability" in err


def test_verify_quick(capsysbinary):
    code, out, _ = run_cli(["verify", "--suite", "normalization,prop51", "--quick"], capsysbinary)
    assert code == 0
    res = json.loads(out)["result"]
    assert [s["suite"] for s in res["suites"]] == ["normalization", "prop51"]
    assert res["counts"]["fail"] == 0


def test_verify_csv(capsysbinary):
    code, out, _ = run_cli(["verify", "--suite", "normalization", "--format", "csv"], capsysbinary)
    assert code == 0
    rows = list(csv.reader(io.StringIO(out.decode())))
    assert rows[0] == list(verify.CSV_COLUMNS)
    assert all(r[2] == "pass" for r in rows[1:])


def test_verify_failure_exit(monkeypatch, capsysbinary):
    def broken(c, policy, quick):
        c.check("over budget", 1e-12, lambda: 1.0)
        c.check("crash", 1.0, lambda: 1 / 0)
    monkeypatch.setitem(verify._RUNNERS, "normalization", broken)
    code, out, _ = run_cli(["verify", "--suite", "normalization"], capsysbinary)
    assert code == 1
    cases = json.loads(out)["result"]["suites"][0]["cases"]
    assert [c["status"] for c in cases] == ["fail", "fail"]
    assert "ZeroDivisionError" in cases[1]["detail"]


def test_verify_capability_only_exit(monkeypatch, capsysbinary):
    from zmeasures.errors import CapabilityError

    def only_skips(c, policy, quick):
        def raise_cap():
            raise CapabilityError("not here", conditions=("terminating parameters",))
        c.check("skip", 1.0, raise_cap)
    monkeypatch.setitem(verify._RUNNERS, "normalization", only_skips)
    code, out, _ = run_cli(["verify", "--suite", "normalization"], capsysbinary)
    assert code == 3
    case = json.loads(out)["result"]["suites"][0]["cases"][0]
    assert case["status"] == "capability-skip" and "terminating" in case["detail"]


def test_empty_report():
    rep = verify.run_verify([])
    assert rep.cases == [] and rep.exit_code == 0
    with pytest.raises(KeyError):
        verify.run_verify(["nope"])


def test_corr_lattice_and_limit(capsysbinary):
    code, out, _ = run_cli(["corr-lattice", "--A", "0", "--theta", "2"], capsysbinary)
    assert code == 0
    res = json.loads(out)["result"]
    assert res["relative_residual"] <= 1e-4
    code, out, _ = run_cli(["corr-limit", "--kind", "lifted", "--z", "1", "--zp", "7/2", "--theta", "1",
                            "--k", "1", "--x", "0.5", "--x", "2", "--format", "csv"], capsysbinary)
    assert code == 0
    assert len(out.decode().strip().splitlines()) == 3


def test_bulk_command(capsysbinary):
    code, out, _ = run_cli(["bulk", "--k", "2", "--y", "0.4,1.3", "--y", "1.4,2.3"], capsysbinary)
    assert code == 0
    res = json.loads(out)["result"]
    assert res["homogeneity_degree"] == "0"
    a, b = (r["density"] for r in res["rows"])
    # the second point is the first shifted by 1
    assert a == pytest.approx(b, rel=1e-10)


def test_cache_dir_flag(tmp_path):
    # fresh processes so the in-memory memo is empty; the second run reads the files
    argv = [sys.executable, "-m", "zmeasures.cli", "verify", "--suite", "dual_cauchy", "--quick",
            "--cache-dir", str(tmp_path)]
    first = subprocess.run(argv, capture_output=True, text=True)
    assert first.returncode == 0
    files = sorted(p.name for p in tmp_path.iterdir())
    assert files and all(f.startswith("jack_") for f in files)
    second = subprocess.run(argv, capture_output=True, text=True)
    strip = lambda out: [(c["id"], c["status"], c["residual"])
                         for c in json.loads(out)["result"]["suites"][0]["cases"]]
    assert strip(second.stdout) == strip(first.stdout)


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "zmeasures.cli", "measure", "--partition", "2,1"],
                       capture_output=True, text=True)
    assert r.returncode == 0
    assert json.loads(r.stdout)["result"]["rows"][0]["partition"] == [2, 1]
