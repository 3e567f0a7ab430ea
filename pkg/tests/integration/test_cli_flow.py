import json

import pytest
from weilforge.main import main
from weilforge.services import jetfile
from weilforge.services.examples import builtin_example
from weilforge.services.kahler import inject_torsion, levi_civita

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_NOT_KAHLERIAN = 3
EXIT_NOT_PARALLEL = 4
EXIT_INSUFFICIENT_ORDER = 5


def read_json(path) -> dict:
    return json.loads(path.read_text(encoding="utf-8"))


@pytest.fixture(scope="module")
def workdir(tmp_path_factory):
    path = tmp_path_factory.mktemp("cli")
    metric = path / "metric.json"
    solution = path / "solution.json"
    polarization = path / "polarization.json"
    assert main(["example", "--name", "fubini-study", "--order", "5", "-o", str(metric)]) == EXIT_OK
    assert main(["solve", "--input", str(metric), "--order", "4", "-o", str(solution)]) == EXIT_OK
    assert (
        main(["polarize", "-i", str(metric), "-s", str(solution), "-o", str(polarization)])
        == EXIT_OK
    )
    return path


def test_solve_writes_solution_with_report(workdir):
    doc = read_json(workdir / "solution.json")
    assert doc["kind"] == "solution"
    assert doc["order"] == 4
    assert doc["report"]["linearity"] == 0.0
    assert doc["report"]["weakly_hodge"]["ok"] is True
    assert any(entry["name"] == "D" for entry in doc["entries"])


def test_polarize_writes_positive_polarization(workdir):
    doc = read_json(workdir / "polarization.json")
    assert doc["kind"] == "polarization"
    assert doc["report"]["positivity"]["ok"] is True


def test_verify_accepts_saved_files(workdir):
    report = workdir / "verify.json"
    code = main(
        [
            "verify",
            "-s",
            str(workdir / "solution.json"),
            "-p",
            str(workdir / "polarization.json"),
            "-o",
            str(report),
        ]
    )
    assert code == EXIT_OK
    payload = read_json(report)["report"]
    assert payload["ok"] is True
    assert payload["first_failure"] is None


def test_estimate_radius_on_saved_files(workdir):
    report = workdir / "estimate.json"
    code = main(
        [
            "estimate-radius",
            "-s",
            str(workdir / "solution.json"),
            "-p",
            str(workdir / "polarization.json"),
            "-o",
            str(report),
        ]
    )
    assert code == EXIT_OK
    payload = read_json(report)["report"]
    assert payload["radius"] > 0
    assert payload["envelope"]["ok"] is True


def test_flat_example_has_infinite_radius(tmp_path, capsys):
    solution = tmp_path / "flat.json"
    assert main(["solve", "--example", "flat", "--order", "4", "-o", str(solution)]) == EXIT_OK
    capsys.readouterr()
    assert main(["estimate-radius", "-s", str(solution)]) == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["report"]["radius"] == "infinite"


def test_unknown_example_is_a_usage_error(capsys):
    code = main(["example", "--name", "klein-bottle"])
    assert code == EXIT_USAGE
    payload = json.loads(capsys.readouterr().out)
    assert payload["error"] == "JetFileError"


def test_missing_subcommand_is_a_usage_error():
    assert main([]) == EXIT_USAGE


def test_torsion_input_is_not_kahlerian(tmp_path, capsys):
    gamma = inject_torsion(levi_civita(builtin_example("flat", 2, 3)))
    path = tmp_path / "torsion.json"
    jetfile.write_jet_file(jetfile.christoffel_file(gamma), path)
    code = main(["solve", "--input", str(path), "--order", "3"])
    assert code == EXIT_NOT_KAHLERIAN
    payload = json.loads(capsys.readouterr().out)
    assert payload["error"] == "NotKahlerianError"
    assert payload["details"]["reason"] == "torsion_nonzero"


def test_foreign_metric_is_not_parallel(workdir, tmp_path):
    flat = tmp_path / "flat_metric.json"
    assert main(["example", "--name", "flat", "--order", "4", "-o", str(flat)]) == EXIT_OK
    code = main(["polarize", "-i", str(flat), "-s", str(workdir / "solution.json")])
    assert code == EXIT_NOT_PARALLEL


def test_low_order_solution_has_no_radius(tmp_path):
    solution = tmp_path / "low.json"
    code = main(
        ["solve", "--example", "fubini-study", "--order", "2", "-o", str(solution)]
    )
    assert code == EXIT_OK
    assert main(["estimate-radius", "-s", str(solution)]) == EXIT_INSUFFICIENT_ORDER


def test_corrupted_solution_fails_verification(workdir, tmp_path):
    doc = read_json(workdir / "solution.json")
    corrupted = next(
        entry for entry in doc["entries"] if entry["name"] == "D" and entry["indices"] == [2]
    )
    corrupted["terms"][0]["re"] = "1000"
    path = tmp_path / "corrupted.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    report = tmp_path / "report.json"
    code = main(["verify", "-s", str(path), "-o", str(report)])
    assert code == EXIT_VERIFY_FAILED
    payload = read_json(report)["report"]
    assert payload["ok"] is False
    assert payload["first_failure"] is not None


def test_missing_input_file_is_a_usage_error(tmp_path):
    assert main(["verify", "-s", str(tmp_path / "nowhere.json")]) == EXIT_USAGE
