import json
import subprocess
import sys

import pytest

from ksnorms.cli import main
from ksnorms.fixtures import fixture_doc


@pytest.fixture
def fixture_file(tmp_path):
    def write(name):
        path = tmp_path / f"{name}.json"
        assert main(["emit-fixture", name, "-o", str(path)]) == 0
        return path
    return write


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def value_of(out):
    line = next(line for line in out.splitlines() if line.startswith("value:"))
    return float(line.split()[1])


def test_norm_quarter_fifteen(capsys, fixture_file):
    code, out, _ = run(capsys, "norm", fixture_file("ks_quarter_fifteen"), "f", "--norm", "ks",
                       "--p", "1")
    assert code == 0
    assert out.startswith("value: 0.26666666666666")
    assert "lower_bound_certified: false" in out
    assert "series_tail_bound: 0.0" in out
    assert "candidates: extreme_points" in out


def test_norm_zero_function(capsys, fixture_file):
    path = fixture_file("ks_quarter_fifteen")
    for norm in ("lp", "ks", "ksw", "hkl"):
        code, out, _ = run(capsys, "norm", path, "zero", "--norm", norm, "--p", "inf")
        assert code == 0 and value_of(out) == 0.0


def test_weak_norm_singleton_matches_strong(capsys, fixture_file):
    path = fixture_file("ks_quarter_fifteen_singleton")
    _, ks, _ = run(capsys, "norm", path, "f", "--norm", "ks")
    _, ksw, _ = run(capsys, "norm", path, "f", "--norm", "ksw")
    assert value_of(ks) == value_of(ksw)


def test_norm_modulus_and_overrides(capsys, fixture_file):
    path = fixture_file("ks_quarter_fifteen")
    _, signed, _ = run(capsys, "norm", path, "g")
    _, modulus, _ = run(capsys, "norm", path, "g", "--modulus")
    assert value_of(signed) < value_of(modulus)
    code, out, _ = run(capsys, "norm", path, "f", "--family", "dyadic", "--candidates",
                       "sphere_sample", "--seed", "3")
    assert code == 0 and "family: dyadic" in out and "seed=3" in out


def test_norm_tolerance_truncates(capsys, fixture_file):
    code, out, _ = run(capsys, "norm", fixture_file("ks_quarter_fifteen"), "f", "--tol", "0.5")
    assert code == 0
    tail = float(next(x for x in out.splitlines() if x.startswith("series_tail")).split()[1])
    assert 0 < tail <= 0.5


def test_p_below_one_rejected(capsys, fixture_file):
    with pytest.raises(SystemExit) as info:
        main(["norm", str(fixture_file("ks_quarter_fifteen")), "f", "--p", "0.5"])
    assert info.value.code == 2
    assert "p >= 1" in capsys.readouterr().err


def test_malformed_file_names_field(capsys, tmp_path):
    doc = fixture_doc("ks_quarter_fifteen")
    doc["atoms"][1]["value"] = ["1/0"]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    code, _, err = run(capsys, "norm", path, "f")
    assert code == 2
    assert "atoms[1].value[0]" in err


def test_unknown_function(capsys, fixture_file):
    code, _, err = run(capsys, "norm", fixture_file("ellinf_pair"), "h")
    assert code == 2 and "no function named" in err


def test_modulus_only_for_ks(capsys, fixture_file):
    code, _, err = run(capsys, "norm", fixture_file("ellinf_pair"), "f", "--norm", "lp",
                       "--modulus")
    assert code == 2 and "--modulus" in err


@pytest.mark.parametrize("argv, expected, tol", [
    (["poly", "0", "2", "--tol", "1e-8"], 1.0, 1e-8),
    (["sqrt_singular", "--tol", "1e-6"], 2.0, 1e-6),
    (["oscillatory_derivative", "--tol", "1e-6"], 0.8414709848078965, 1e-6),
])
def test_integrate(capsys, argv, expected, tol):
    code, out, _ = run(capsys, "integrate", *argv)
    assert code == 0
    assert abs(value_of(out) - expected) <= tol
    assert "achieved_tol" in out and "refinement_depth" in out


def test_integrate_non_convergence(capsys):
    code, _, err = run(capsys, "integrate", "oscillatory_derivative", "--tol", "1e-8",
                       "--max-depth", "6")
    assert code == 1
    assert "last sums" in err


def test_integrate_bad_interval(capsys):
    code, _, err = run(capsys, "integrate", "poly", "--a", "1", "--b", "0")
    assert code == 2 and "a < b" in err


def test_check_corpus_only(capsys, tmp_path):
    report = tmp_path / "r.json"
    text = tmp_path / "r.txt"
    code, _, _ = run(capsys, "check", "--suite", "corpus", "--report-json", report,
                     "--report-text", text)
    assert code == 0
    records = json.loads(report.read_text())["checks"]
    status = {r["check_id"]: r["status"] for r in records}
    assert status == {
        "corpus.signed_lattice_monotonicity": "xfail",
        "corpus.zero_measure_norms": "pass",
        "corpus.zero_measure_definiteness": "skip",
    }
    assert "XFAIL" in text.read_text()


def test_check_with_file_instance(capsys, fixture_file):
    code, out, _ = run(capsys, "check", fixture_file("ellinf_pair"), "--suite", "norms",
                       "--instances", "5")
    assert code == 0
    assert "file instance" in out


def test_check_unwritable_path(capsys, tmp_path):
    code, _, err = run(capsys, "check", "--suite", "corpus", "--report-json",
                       tmp_path / "missing" / "r.json")
    assert code == 2 and "cannot write" in err


def test_check_unknown_suite(capsys):
    with pytest.raises(SystemExit) as info:
        main(["check", "--suite", "bogus"])
    assert info.value.code == 2


def test_emit_fixture_list_and_stdout(capsys):
    code, out, _ = run(capsys, "emit-fixture", "--list")
    assert code == 0 and "ks_quarter_fifteen" in out
    code, out, _ = run(capsys, "emit-fixture", "ellinf_pair")
    assert json.loads(out)["space"] == {"dim": 2, "norm": "ellinf"}


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "ksnorms", "integrate", "poly"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout.startswith("value: 1.0")
