import io
import json
import os
import subprocess
import sys
from importlib import resources
from pathlib import Path

import jsonschema
import pytest

from crsegre.cli import SUBCOMMANDS, run
from crsegre.language import format_series, parse_hypersurface

GOLDEN = Path(__file__).parent / "golden"
REGEN = os.environ.get("CRSEGRE_REGEN_GOLDEN") == "1"

CASES = {
    "validate_lewy": ["validate", "fixtures/lewy.cr"],
    "validate_sphere": ["validate", "fixtures/sphere.hyp"],
    "segre_dim_m355": ["segre-dim", "fixtures/m_lambda_pi355.cr", "--point", "1,1,1", "--k", "3"],
    "orbit_dim_flat": ["orbit-dim", "fixtures/flat.cr"],
    "minimality_lewy": ["minimality", "fixtures/lewy.cr"],
    "minimality_m1": ["minimality", "fixtures/m_lambda_1.cr", "--point", "1,1,1"],
    "scan_m355": ["almost-minimal-scan", "fixtures/m_lambda_pi355.cr"],
    "hull_m2": ["hull", "fixtures/m_lambda_2.cr", "--point", "1,1,1", "--k", "3"],
    "hull_m355": ["hull", "fixtures/m_lambda_pi355.cr", "--point", "1,1,1", "--k", "3",
                  "--degree", "4"],
    "project_fit_m1": ["project-fit", "fixtures/m_lambda_1.cr", "--degree", "2"],
    "project_fit_m355": ["project-fit", "fixtures/m_lambda_pi355.cr", "--degree", "4"],
    "containment_m1": ["containment", "fixtures/m_lambda_1.cr", "fixtures/hyp_imw1w2bar.hyp"],
    "levi_flat_imw1w2bar": ["levi-flat", "fixtures/hyp_imw1w2bar.hyp"],
    "levi_flat_sphere": ["levi-flat", "fixtures/sphere.hyp"],
    "sing_locus_imw1sq": ["sing-locus", "fixtures/hyp_imw1sq.hyp"],
    "classify_sing_product": ["classify-sing", "fixtures/hyp_product.hyp",
                              "--locus", "(w1 - eta1)/(2*i)", "--locus", "(w2 - eta2)/(2*i)"],
    "segre_variety_imw1w2bar": ["segre-variety", "fixtures/hyp_imw1w2bar.hyp", "--point", "1,1"],
    "uniqueness_mhalf": ["uniqueness", "fixtures/m_lambda_half.cr", "--K", "2"],
    "quotient_check_m1": ["quotient-check", "fixtures/m_lambda_1.cr", "--f", "w1", "--g", "w2"],
    "sample_lewy": ["sample", "fixtures/lewy.cr", "--samples", "5"],
}


def invoke(argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(argv, out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture(scope="module")
def schema():
    return json.loads(resources.files("crsegre").joinpath("report_schema.json").read_text())


def test_every_subcommand_has_a_golden():
    assert {argv[0] for argv in CASES.values()} == set(SUBCOMMANDS)


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden(name, schema):
    code, out, _ = invoke(CASES[name])
    path = GOLDEN / f"{name}.json"
    if REGEN:
        path.write_text(out)
    assert out == path.read_text()
    report = json.loads(out)
    jsonschema.validate(report, schema)
    assert code == report["exit_code"] == 0
    assert report["seed"] == 0 and report["wall_clock"] is None


def test_second_run_is_byte_identical():
    argv = ["levi-flat", "fixtures/sphere.hyp", "--seed", "3"]
    assert invoke(argv)[1] == invoke(argv)[1]


def test_documented_examples():
    code, out, _ = invoke(["minimality", "fixtures/m_lambda_1.cr", "--point", "1,1,1",
                           "--seed", "7"])
    r = json.loads(out)
    assert code == 0
    assert r["verdicts"]["minimality"] == "not-minimal" and r["verdicts"]["orbit_dim"] == 2
    code, out, _ = invoke(["project-fit", "fixtures/m_lambda_1.cr", "--degree", "2",
                           "--seed", "7"])
    r = json.loads(out)
    assert code == 0
    H = parse_hypersurface(r["verdicts"]["rho"])
    assert format_series(H.rho) in ("i*w1*eta2 - i*w2*eta1", "-i*w1*eta2 + i*w2*eta1")


def test_verdicts_are_the_expected_ones():
    def verdicts(name):
        return json.loads(invoke(CASES[name])[1])["verdicts"]

    assert verdicts("hull_m355")["hull"] == "no hull up to degree 4"
    assert verdicts("project_fit_m355")["fit"] == "none up to degree 4"
    assert verdicts("containment_m1")["containment"] == "contained-in-levi-flat"
    assert verdicts("levi_flat_sphere")["levi_flat"] == "not-levi-flat"
    assert verdicts("classify_sing_product")["classification"] == "leviflat"
    assert verdicts("uniqueness_mhalf")["independence"] == "dependent"
    assert verdicts("scan_m355")["almost_minimality"] == \
        "evidence of almost minimality up to degree 4"


def test_large_denominator_disclaimer():
    r = json.loads(invoke(CASES["hull_m355"])[1])
    assert any("irrational" in w for w in r["warnings"])


@pytest.mark.parametrize("argv", [
    ["validate", "does/not/exist.cr"],
    ["bogus", "fixtures/lewy.cr"],
    ["validate", "fixtures/lewy.cr", "--no-such-flag"],
    ["segre-dim", "fixtures/lewy.cr", "--k", "99"],
    ["segre-dim", "fixtures/lewy.cr", "--point", "1,2,3"],
    ["quotient-check", "fixtures/m_lambda_1.cr"],
    ["uniqueness", "fixtures/lewy.cr"],
    ["uniqueness", "fixtures/m_lambda_pi355.cr", "--K", "4", "--jet", "8"],
    ["levi-flat", "fixtures/hyp_imw1sq.hyp", "--point", "0,0"],
    [],
])
def test_input_errors_exit_one(argv, schema):
    code, out, err = invoke(argv)
    assert code == 1
    r = json.loads(out)
    jsonschema.validate(r, schema)
    assert r["exit_code"] == 1 and r["error"]


def test_usage_on_unknown_flag():
    _, _, err = invoke(["validate", "fixtures/lewy.cr", "--nope"])
    assert err.startswith("usage:")


def test_bad_manifold_reports_validation(tmp_path, schema):
    bad = tmp_path / "bad.cr"
    bad.write_text("n=1 d=1\nQ1 = omega1 + z1*zeta1\n")
    code, out, _ = invoke(["validate", str(bad)])
    r = json.loads(out)
    jsonschema.validate(r, schema)
    assert code == 1 and r["verdicts"] == {"valid": False}
    assert r["certificates"]["validation"]


def test_inconclusive_exit_two(tmp_path):
    empty = tmp_path / "empty.hyp"
    empty.write_text("m=1\nrho = w1*eta1 + 1\n")
    code, out, _ = invoke(["levi-flat", str(empty)])
    assert code == 2 and json.loads(out)["verdicts"]["levi_flat"] == "inconclusive"


def test_text_summary_and_timing():
    code, out, err = invoke(["validate", "fixtures/lewy.cr", "--text", "--timing"])
    assert code == 0 and "valid: True" in err
    assert json.loads(out)["wall_clock"] >= 0


def test_digest_depends_on_options():
    a = json.loads(invoke(["sample", "fixtures/lewy.cr", "--samples", "3"])[1])
    b = json.loads(invoke(["sample", "fixtures/lewy.cr", "--samples", "4"])[1])
    assert a["inputs_digest"] != b["inputs_digest"]


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "crsegre", "validate", "fixtures/flat.cr"],
                          capture_output=True, text=True, cwd="/")
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["verdicts"]["valid"] is True
