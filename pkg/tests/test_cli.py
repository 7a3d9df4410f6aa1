import json

import pytest
from conftest import GOLDEN_DIR

from toriq.main import main

FIXTURES = ["hyperbolic", "nobasechange", "nobasechange_open", "merged_orthant", "merged_orthant_fan", "non_open_image", "unglued_orbits"]
REPORT_COMMANDS = ["validate", "hhat", "separation", "tv-quotient", "tp-quotient", "image", "diagnose"]


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    return code, json.loads(out)


def test_examples_lists_every_fixture(capsys):
    code, report = run_json(capsys, "examples")
    assert code == 0
    assert [item["name"] for item in report["fixtures"]] == sorted(FIXTURES)
    assert all(item["description"] for item in report["fixtures"])


def test_hhat_json(capsys):
    code, report = run_json(capsys, "hhat", "nobasechange")
    assert code == 0
    assert report["hhat"]["lattice"] == [[1, 0, 0], [0, 0, 1]]
    assert report["hhat"]["trace"][0]["rule"] == "R1"


def test_tv_quotient_json(capsys):
    code, report = run_json(capsys, "tv-quotient", "merged_orthant")
    assert code == 0
    assert report["separation"]["quotient_fan"]["maximal_cones"] == [[[0, 0, 1], [0, 1, 0], [1, 0, 0]]]
    assert [step["kind"] for step in report["separation"]["merges"]] == ["grow", "grow", "absorb"]


@pytest.mark.parametrize("command", REPORT_COMMANDS)
def test_invalid_fan_exits_with_validation_failure(capsys, command):
    code, report = run_json(capsys, command, "merged_orthant_fan")
    assert code == 2
    assert report["error"] == "fan_condition_violation"


def test_separation_outside_certified_range(capsys):
    code, report = run_json(capsys, "separation", "merged_orthant")
    assert code == 3
    assert report["error"] == "unsupported_codimension"
    assert report["details"]["codim"] == 3


def test_malformed_json(capsys, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{", encoding="utf-8")
    code, report = run_json(capsys, "validate", str(path))
    assert code == 2
    assert report["error"] == "problem_file_error"
    assert ":1:2" in report["message"]


def test_wrong_vector_length(capsys, tmp_path):
    path = tmp_path / "short.json"
    path.write_text(json.dumps({"lattice_rank": 2, "charts": [[[1, 0], [1]]]}), encoding="utf-8")
    code, report = run_json(capsys, "validate", str(path))
    assert code == 2
    assert report["details"]["location"] == "charts.0.1"


def test_unknown_fixture(capsys):
    code, report = run_json(capsys, "hhat", "no_such_problem")
    assert code == 2
    assert report["error"] == "problem_file_error"


def test_error_text_goes_to_stderr(capsys):
    code, out, err = run(capsys, "separation", "merged_orthant")
    assert code == 3
    assert out == ""
    assert err.startswith("error (unsupported_codimension)")


def test_text_report(capsys):
    code, out, _ = run(capsys, "diagnose", "unglued_orbits")
    assert code == 0
    assert "pattern: unglued_identification" in out
    assert "\033[" not in out


def test_tp_quotient_text_lists_dropped_cones(capsys):
    code, out, _ = run(capsys, "tp-quotient", "nobasechange")
    assert code == 0
    assert "dropped glueing cones: 3 (not common faces of the projected charts)" in out
    assert out.count("dropped at 0,1: ") == 3


def test_fixture_short_names(capsys):
    code, report = run_json(capsys, "diagnose", "sec7")
    assert code == 0
    assert report["codim"] == 2
    assert report["av_quotient"] == "ExistsEqualsTV"
    assert report["flags"] == ["GlueingDeficiency"]
    _, quotient = run_json(capsys, "tv-quotient", "sec5.json")
    assert quotient["separation"]["quotient_fan"]["maximal_cones"] == [[[0, 0, 1], [0, 1, 0], [1, 0, 0]]]
    assert run_json(capsys, "validate", "sec6")[0] == 0
    assert run_json(capsys, "validate", "sec5_quotient_fan")[1]["error"] == "fan_condition_violation"


def test_validate_system_text(capsys):
    code, out, _ = run(capsys, "validate", "nobasechange_open")
    assert code == 0
    assert out.startswith("valid ")


def test_out_writes_report_file(capsys, tmp_path):
    path = tmp_path / "reports" / "hhat.json"
    code, out, _ = run(capsys, "hhat", "unglued_orbits", "--json", "--out", str(path))
    assert code == 0
    assert out == ""
    assert json.loads(path.read_text(encoding="utf-8"))["command"] == "hhat"


def test_slice_plot_writes_svg(capsys, tmp_path):
    path = tmp_path / "non_open_image.svg"
    code, report = run_json(capsys, "slice-plot", "non_open_image", "--target", "--out", str(path))
    assert code == 0
    assert report["regions"] == 2
    assert "<svg" in path.read_text(encoding="utf-8")


def test_slice_plot_needs_out(capsys):
    code, report = run_json(capsys, "slice-plot", "unglued_orbits")
    assert code == 2
    assert report["error"] == "validation_failure"


def test_slice_plot_rejects_bad_level(capsys, tmp_path):
    code, report = run_json(capsys, "slice-plot", "unglued_orbits", "--level", "abc", "--out", str(tmp_path / "x.svg"))
    assert code == 2
    assert "abc" in report["message"]


def test_output_is_deterministic(capsys, workers):
    workers(1)
    _, first = run(capsys, "diagnose", "non_open_image", "--json")[:2]
    _, second = run(capsys, "diagnose", "non_open_image", "--json")[:2]
    workers(3)
    _, threaded = run(capsys, "diagnose", "non_open_image", "--json")[:2]
    assert first == second == threaded


def assert_recorded(expected, actual, path="$"):
    """Every field recorded in a golden file must match the report exactly."""
    if isinstance(expected, dict):
        assert isinstance(actual, dict), f"{path}: expected an object, got {actual!r}"
        for key, value in expected.items():
            assert key in actual, f"{path}.{key} is missing"
            assert_recorded(value, actual[key], f"{path}.{key}")
    elif isinstance(expected, list):
        assert isinstance(actual, list), f"{path}: expected a list, got {actual!r}"
        assert len(actual) == len(expected), f"{path}: {len(actual)} entries, expected {len(expected)}"
        for k, (want, got) in enumerate(zip(expected, actual)):
            assert_recorded(want, got, f"{path}[{k}]")
    else:
        assert actual == expected, f"{path}: {actual!r} != {expected!r}"


@pytest.mark.parametrize("fixture", FIXTURES)
@pytest.mark.parametrize("command", REPORT_COMMANDS)
def test_golden(capsys, command, fixture):
    path = GOLDEN_DIR / f"{command}__{fixture}.json"
    assert path.is_file(), f"no golden file {path.name}; run scripts/update_golden.py"
    _, out, _ = run(capsys, command, fixture, "--json")
    assert_recorded(json.loads(path.read_text(encoding="utf-8")), json.loads(out))


def test_recorded_fields_must_match():
    assert_recorded({"a": [1, {"b": 2}]}, {"a": [1, {"b": 2, "c": 3}], "d": 4})
    with pytest.raises(AssertionError):
        assert_recorded({"a": [1]}, {"a": [1, 2]})
    with pytest.raises(AssertionError):
        assert_recorded({"a": {"b": None}}, {"a": {}})
