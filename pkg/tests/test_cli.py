import json
import subprocess
import sys

import pytest

from latticeforge.cli import COOKBOOK, SCHEMAS, cookbook, main, render, run, verdicts_complete

ID23 = {"gram": [["1", "0", "0", "0", "0"], ["0", "1", "0", "0", "0"], ["0", "0", "-1", "0", "0"],
                 ["0", "0", "0", "-1", "0"], ["0", "0", "0", "0", "-1"]]}
SEVEN = {"gram": [["7", "0", "0", "0"], ["0", "-1", "0", "0"], ["0", "0", "-1", "0"],
                  ["0", "0", "0", "-1"]]}
SQRT2 = {"min_poly": [-2, 0, 1]}
SPLIT_Q = {"beta": "4", "gamma": "3"}
CYC3 = {"cyclic": {"q": 7, "alpha": "3"}}

JOBS = [
    ("field places", {"field": SQRT2}),
    ("form diag", {"form": ID23}),
    ("form witt", {"form": ID23}),
    ("form isotropic", {"form": SEVEN}),
    ("form qrank", {"form": ID23}),
    ("form signature", {"form": {"field": SQRT2, "gram": [["1", "0"], ["0", ["0", "-1"]]]},
                        "place": 1}),
    ("quat mul", {"algebra": SPLIT_Q, "x": ["1", "2", "0", "1"], "y": ["0", "1", "1", "0"]}),
    ("quat norm", {"algebra": SPLIT_Q, "x": ["1", "2", "0", "1"]}),
    ("quat division", {"algebra": {"beta": "-1", "gamma": "-1"}}),
    ("quat splits", {"algebra": {"field": SQRT2, "beta": ["0", "1"], "gamma": "-1"}, "place": 0}),
    ("quat embed", {"algebra": SPLIT_Q, "x": ["1", "2", "0", "1"]}),
    ("quat hermdiag", {"algebra": {"beta": "-1", "gamma": "-1"},
                       "gram": [[["1", "0", "0", "0"], ["0", "0", "0", "0"]],
                                [["0", "0", "0", "0"], ["-1", "0", "0", "0"]]]}),
    ("cyclic mul", {"algebra": CYC3, "x": [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "0"]],
                    "y": [["0", "1", "0"], ["0", "0", "0"], ["1", "0", "0"]]}),
    ("cyclic division", {"algebra": CYC3}),
    ("cyclic embed", {"algebra": CYC3, "x": [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "0"]]}),
    ("cyclic criterion", {"p": 3, "q": 7}),
    ("lattice build", {"desc": {"field": SQRT2, "construction": "SO-form",
                                "diagonal": ["1", "1", ["0", "-1"]]}}),
    ("lattice irreducible-so", {"targets": [[2, 3], [1, 4], [1, 4], [0, 5]]}),
    ("lattice sl3-noncocompact", {"r": 2}),
    ("lattice sl3-cyclic", {"q": 7, "p": 3}),
    ("lattice tables", {"label": "SO(3,5)"}),
    ("sl2z reduce", {"z": "5+2i"}),
    ("sl2z area", {"tol": 1e-6}),
    ("sl2z congruence", {"n": 3, "matrix": [1, 3, 3, 10]}),
    ("sl2z order-mod", {"n": 4}),
    ("sl2z torsion", {"n": 3, "samples": 500}),
    ("sl2z mahler", {"form": SEVEN, "height": 5}),
    ("pingpong certify", {"g1": "2,0,0,1/2", "g2_conj": "1,1,1,2", "nmax": 20}),
]


def _job(command, payload):
    return {"command": command, "payload": payload}


def test_jobs_cover_every_command():
    assert {c for c, _ in JOBS} | {"pingpong validate"} == set(SCHEMAS)


@pytest.mark.parametrize("command,payload", JOBS, ids=[c for c, _ in JOBS])
def test_job_is_definite_and_complete(command, payload):
    report, code = run(_job(command, payload))
    assert code == 0, report.get("error")
    assert report["status"] == "definite"
    assert verdicts_complete(report["result"])
    assert "timing" not in report


@pytest.mark.parametrize("command,payload", JOBS[::4], ids=[c for c, _ in JOBS[::4]])
def test_reports_are_byte_identical(command, payload):
    a = render(run(_job(command, payload))[0])
    b = render(run(_job(command, payload))[0])
    assert a == b


def test_pingpong_validate_round_trip():
    report, _ = run(_job("pingpong certify", {"g1": "2,0,0,1/2", "g2_conj": "1,1,1,2"}))
    cert = report["result"]["certificate"]
    report, code = run(_job("pingpong validate", {"cert": cert, "maxlen": 4}))
    assert code == 0
    assert report["result"]["verdict"] == "free"
    assert verdicts_complete(report)


def test_known_values():
    report, _ = run(_job("form qrank", {"form": ID23}))
    assert report["result"]["qrank"] == 2
    report, _ = run(_job("lattice build", JOBS[16][1]))
    assert report["result"]["verdict"]["cocompact"] == "yes"


def test_inconclusive_exit_code():
    report, code = run(_job("pingpong certify", {"g1": "2,0,0,1/2", "g2_conj": "1,1,1,2", "nmax": 1}))
    assert code == 3
    assert report["status"] == "inconclusive"
    assert verdicts_complete(report)


def test_schema_violation_reports_location():
    bad = {"form": {"gram": [["1", "0"], ["0", "x"]]}}
    report, code = run(_job("form qrank", bad))
    assert code == 1
    paths = [v["path"] for v in report["error"]["violations"]]
    assert "/form/gram/1/1" in paths


def test_missing_field_and_unknown_command():
    report, code = run(_job("sl2z reduce", {}))
    assert code == 1 and report["error"]["violations"]
    report, code = run(_job("sl2z frobnicate", {}))
    assert code == 1


def test_semantic_input_errors_exit_1():
    report, code = run(_job("cyclic criterion", {"p": 4, "q": 7}))
    assert code == 1
    report, code = run(_job("pingpong certify", {"g1": "1,1,0,1", "g2": "2,0,0,1/2"}))
    assert code == 1


def test_timing_is_opt_in():
    report, _ = run(_job("sl2z order-mod", {"n": 3}), timing=True)
    assert report["timing"]["seconds"] >= 0


def test_text_rendering():
    report, _ = run(_job("sl2z reduce", {"z": "i/2"}))
    text = render(report, "text")
    assert "word: S" in text
    assert not text.lstrip().startswith("{")


@pytest.mark.parametrize("tag", sorted(COOKBOOK))
def test_cookbook_matches_goldens(tag):
    report, code = cookbook(tag)
    assert code == 0, report["certificate"]["divergent_fields"]
    assert report["verdict"] == "match"


def test_cookbook_goldens_are_certificate_complete():
    from latticeforge.cli import _golden_path
    for tag in COOKBOOK:
        golden = json.loads(_golden_path(tag).read_text(encoding="utf-8"))
        assert verdicts_complete(golden)


def test_cookbook_detects_divergence(tmp_path):
    cookbook("quaternion", update=True, golden_dir=str(tmp_path))
    path = tmp_path / "quaternion.json"
    data = json.loads(path.read_text())
    data[0]["result"]["verdict"] = "split"
    path.write_text(json.dumps(data))
    report, code = cookbook("quaternion", golden_dir=str(tmp_path))
    assert code == 1
    assert any("verdict" in f for f in report["certificate"]["divergent_fields"])


def test_main_entry_point(capsys):
    code = main(["sl2z", "order-mod", "--n", "3"])
    out = json.loads(capsys.readouterr().out)
    assert code == 0 and out["result"]["order"] == 24
    code = main(["field", "places", "--poly=-2,0,1"])
    assert code == 0
    capsys.readouterr()


def test_job_file(tmp_path, capsys):
    job = tmp_path / "job.json"
    job.write_text(json.dumps({"command": "lattice tables", "payload": {"label": "SU(2,3)"},
                               "output_format": "json"}))
    assert main(["run", "--job", str(job)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert "SL(5,C)" in json.dumps(out["result"])


def test_module_invocation_is_deterministic():
    cmd = [sys.executable, "-m", "latticeforge", "lattice", "sl3-cyclic", "--q", "7", "--p", "5"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and a
