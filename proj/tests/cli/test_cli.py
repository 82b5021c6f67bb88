"""End-to-end checks of the ginfo command-line tool."""

import csv
import io
import json
import math
import os
import pathlib
import subprocess

import jsonschema
import pytest

CLI = os.environ["GINFO_CLI"]
SCHEMA = json.loads((pathlib.Path(__file__).resolve().parents[2] / "schemas" / "report.schema.json").read_text())


def run(*args, env=None):
    return subprocess.run([CLI, *args], capture_output=True, text=True, env=env, timeout=120)


def run_json(*args):
    r = run(*args, "--format", "json")
    assert r.returncode == 0, r.stderr
    doc = json.loads(r.stdout)
    jsonschema.validate(doc, SCHEMA)
    return doc


def sweep_rows(text):
    lines = [l for l in text.splitlines() if not l.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(lines))))


def test_csv_header_and_config_echo():
    r = run("figure1", "--grid", "20")
    assert r.returncode == 0
    first, header = r.stdout.splitlines()[:2]
    assert first.startswith("# command=figure1")
    assert "grid=20" in first and "m=0.125" in first
    assert header == "theta,min_invariant,margin,crossing_theta"


def test_figure1_has_one_crossing():
    rows = sweep_rows(run("figure1").stdout)
    assert len(rows) == 99
    crossings = [float(r["crossing_theta"]) for r in rows if r["crossing_theta"]]
    assert len(crossings) == 1
    assert 0 < crossings[0] < 1


def test_figure3_crosses_before_figure1():
    c1 = run_json("figure1")["crossings"]
    c3 = run_json("figure3")["crossings"]
    assert c3[0] < c1[0]


def test_sweep_output_is_byte_identical_across_thread_counts():
    base = dict(os.environ)
    outs = {run("figure3", env={**base, "GINFO_NUM_THREADS": t}).stdout for t in ("1", "3", "8")}
    assert len(outs) == 1


def test_sweep_writes_file(tmp_path):
    out = tmp_path / "sweep.csv"
    r = run("sweep", "--m", "0.1", "--n", "0.05", "--grid", "10", "--out", str(out))
    assert r.returncode == 0 and r.stdout == ""
    assert len(sweep_rows(out.read_text())) == 10


def test_distance_identical_and_scaled():
    doc = run_json("distance", "--sigma1", "1,1,0.2,-0.1", "--sigma2", "1,1,0.2,-0.1")
    assert doc["result"]["distance_half"] == pytest.approx(0.0, abs=1e-14)
    doc = run_json("distance", "--sigma1", "1,1,0.2,-0.1", "--sigma2", "2,2,0.4,-0.2")
    assert doc["result"]["distance_half"] == pytest.approx(math.sqrt(2) * math.log(2), abs=1e-12)
    assert doc["result"]["distance_dimension"] == pytest.approx(2 * math.sqrt(2) * math.log(2), abs=1e-12)


def test_distance_congruence_check(tmp_path):
    doc = run_json("distance", "--sigma1", "1,1,0.2,-0.1", "--sigma2", "1.5,0.8,0,0.3", "--transform", "random", "--seed", "5")
    assert doc["result"]["congruence_check"]["delta"] < 1e-10
    assert doc["config"]["seed"] == 5


def test_distance_reads_covariance_files(tmp_path):
    f = tmp_path / "a.cvm"
    f.write_text("# ginfo-cvm ordering=ModeInterleaved modes=1\n2 0\n0 2\n")
    g = tmp_path / "b.cvm"
    g.write_text("# ginfo-cvm ordering=ModeInterleaved modes=1\n1 0\n0 1\n")
    doc = run_json("distance", "--sigma1", str(f), "--sigma2", str(g))
    assert doc["result"]["generalized_eigenvalues"] == pytest.approx([0.5, 0.5])


def test_invalid_state_is_a_validation_error():
    r = run("distance", "--sigma1", "0.3,0.3,0,0", "--sigma2", "1,1,0,0")
    assert r.returncode == 3
    assert "RSUP" in r.stderr
    r = run("distance", "--sigma1", "1,1,2,0", "--sigma2", "1,1,0,0")
    assert r.returncode == 3
    assert "SPD" in r.stderr


def test_metric_flat_point():
    doc = run_json("metric", "--sigma1", "1,1,0,0")
    assert doc["result"]["metric"] == [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]


def test_oscillator_generic_point_is_entangled():
    doc = run_json("oscillator", "--m1", "1", "--m2", "1", "--w1", "1", "--w2", "2", "--theta", "0.3", "--eta", "0.2")
    res = doc["result"]
    assert not res["separable"]
    assert not res["ppt"]["separable"]
    assert abs(res["lambda"]["L12c"]) > 1e-3


def test_oscillator_singular_deformation_is_rejected():
    assert run("oscillator", "--theta", "2", "--eta", "2", "--m1", "1", "--m2", "1").returncode == 3


def test_volume_is_seeded():
    a = run_json("volume", "--samples", "2000", "--seed", "3", "--region", "separable")
    b = run_json("volume", "--samples", "2000", "--seed", "3", "--region", "separable")
    assert a == b
    assert a["result"]["volume"] > 0


def test_selftest_passes_and_echoes_seed():
    r = run("selftest", "--seed", "11", "--cases", "10", "--format", "csv")
    assert r.returncode == 0, r.stdout
    assert "seed=11" in r.stdout.splitlines()[0]
    doc = run_json("selftest", "--seed", "11", "--cases", "10")
    assert doc["ok"]


@pytest.mark.parametrize(
    "args, code",
    [
        ((), 1),
        (("nonsense",), 1),
        (("figure1", "--bogus", "1"), 1),
        (("figure1", "--format", "xml"), 1),
        (("metric", "--format", "csv"), 1),
        (("figure1", "--grid", "5"), 3),
        (("sweep", "--m", "0.9", "--n", "0.9"), 3),
        (("figure1", "--out", "/nonexistent/dir/out.csv"), 2),
        (("distance", "--sigma1", "/nonexistent/file.cvm"), 2),
    ],
)
def test_exit_codes(args, code):
    assert run(*args).returncode == code


def test_command_flag_alias():
    assert run("--command", "figure2", "--grid", "10").returncode == 0
