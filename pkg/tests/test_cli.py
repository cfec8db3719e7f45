"""CLI behavior: formats, metadata, determinism, exit codes, witnesses."""

import json

import pytest

from bhkit import __version__
from bhkit.cli import _SUITE_RUNNERS, main
from bhkit.constants import (
    hypercontractive_bound,
    scalar_bh_best,
    subexp_envelope,
)
from bhkit.polynomials import parse
from bhkit.verification import CheckReport


def _run(tmp_path, *argv, name="out"):
    path = tmp_path / name
    rc = main([*argv, "--out", str(path)])
    return rc, path.read_text()


# constants


def test_constants_csv_table(tmp_path):
    rc, text = _run(tmp_path, "constants", "--m", "1:3")
    assert rc == 0
    lines = text.splitlines()
    assert lines[0] == f"# version={__version__}"
    assert lines[1].startswith("# config=")
    assert lines[2] == "m,hypercontractive,scalar_bh_best,k_star,bh_multilinear,rho,s_k"
    rows = [line.split(",") for line in lines[3:]]
    assert [row[0] for row in rows] == ["1", "2", "3"]
    # Degree 1 has no split: best constant 1, empty k_star and s_k cells.
    assert rows[0][2] == "1.0"
    assert rows[0][3] == ""
    assert rows[0][6] == ""
    assert rows[1][1] == repr(hypercontractive_bound(2))
    assert rows[2][2] == repr(scalar_bh_best(3)[1].value)
    assert rows[2][3] == str(scalar_bh_best(3)[0])


def test_constants_json_payload(tmp_path):
    rc, text = _run(tmp_path, "constants", "--m", "2", "--format", "json")
    assert rc == 0
    payload = json.loads(text)
    assert payload["version"] == __version__
    assert payload["config"]["command"] == "constants"
    (row,) = payload["rows"]
    assert row["m"] == 2
    assert row["scalar_bh_best"] == scalar_bh_best(2)[1].value
    assert row["k_star"] == scalar_bh_best(2)[0]


def test_constants_split_override(tmp_path):
    rc, text = _run(tmp_path, "constants", "--m", "4", "--k", "1", "--format", "json")
    assert rc == 0
    (row,) = json.loads(text)["rows"]
    from bhkit.constants import s_k

    assert row["s_k"] == s_k(1, 1.0)


def test_constants_empty_range_is_header_only(tmp_path):
    rc, text = _run(tmp_path, "constants", "--m", "3:2")
    assert rc == 0
    lines = text.splitlines()
    assert len(lines) == 3
    assert lines[2].startswith("m,")


def test_constants_reruns_are_byte_identical(tmp_path):
    _, first = _run(tmp_path, "constants", "--m", "1:6", "--format", "json", name="a")
    _, second = _run(tmp_path, "constants", "--m", "1:6", "--format", "json", name="a")
    assert first == second


# verify


def test_verify_blei_json(tmp_path):
    rc, text = _run(
        tmp_path, "verify", "blei", "--trials", "4", "--seed", "3", "--format", "json"
    )
    assert rc == 0
    payload = json.loads(text)
    assert payload["config"]["suite"] == "blei"
    assert payload["config"]["trials"] == 4
    assert len(payload["reports"]) == 4
    assert all(r["pass"] for r in payload["reports"])


def test_verify_csv_projection(tmp_path):
    rc, text = _run(tmp_path, "verify", "blei", "--trials", "2", "--seed", "1")
    assert rc == 0
    lines = text.splitlines()
    assert lines[0].startswith("# version=")
    assert lines[2].startswith("check_name,")
    assert len(lines) == 5


def test_verify_reruns_are_byte_identical(tmp_path):
    args = ("verify", "scalar-bh", "--trials", "3", "--seed", "7", "--format", "json")
    _, first = _run(tmp_path, *args, name="a")
    _, second = _run(tmp_path, *args, name="a")
    assert first == second


def test_verify_seed_changes_content(tmp_path):
    _, first = _run(tmp_path, "verify", "blei", "--trials", "2", "--seed", "0", name="a")
    _, second = _run(tmp_path, "verify", "blei", "--trials", "2", "--seed", "1", name="b")
    assert first != second


def test_verify_failure_writes_witness_file(tmp_path, monkeypatch, capsys):
    def failing_suite(config):
        report = CheckReport(
            check_name="blei",
            parameters={"m": 2},
            lhs=2.0,
            rhs=1.0,
            margin=-1.0,
            passed=False,
            diagnostics={},
        )
        return [(report, {"note": "forced"})]

    monkeypatch.setitem(_SUITE_RUNNERS, "blei", failing_suite)
    out = tmp_path / "run.csv"
    rc = main(["verify", "blei", "--trials", "1", "--out", str(out)])
    assert rc == 1
    assert "1 of 1 checks failed" in capsys.readouterr().err
    failures = json.loads((tmp_path / "run.csv.failures.json").read_text())
    assert failures["failures"][0]["index"] == 0
    assert failures["failures"][0]["witness"] == {"note": "forced"}
    assert failures["failures"][0]["report"]["pass"] is False


def test_verify_unknown_suite_is_usage_error(tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "nonsense", "--trials", "1"])
    assert exc.value.code == 2


def test_verify_zero_trials_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["verify", "blei", "--trials", "0"])
    assert exc.value.code == 2


def test_verify_kahane_needs_two_trials():
    with pytest.raises(SystemExit) as exc:
        main(["verify", "kahane", "--trials", "1"])
    assert exc.value.code == 2


# envelope


def test_envelope_json_matches_library(tmp_path):
    rc, text = _run(
        tmp_path, "envelope", "--eps", "0.5", "--m", "40", "--format", "json"
    )
    assert rc == 0
    payload = json.loads(text)
    report = subexp_envelope(0.5, 40)
    assert payload["kappa"] == report.kappa
    assert payload["m_star"] == report.m_star
    assert payload["tail_decreasing"] == report.tail_decreasing
    assert payload["ratios"] == list(report.ratios)
    assert len(payload["ratios"]) == 39


def test_envelope_csv_shape(tmp_path):
    rc, text = _run(tmp_path, "envelope", "--eps", "0.5", "--m", "10")
    assert rc == 0
    lines = text.splitlines()
    assert any(line.startswith("# kappa=") for line in lines)
    assert any(line.startswith("# m_star=") for line in lines)
    header_at = lines.index("m,ratio")
    first = lines[header_at + 1].split(",")
    assert first[0] == "2"
    assert len(lines) - header_at - 1 == 9


@pytest.mark.parametrize(
    "argv",
    [
        ["envelope", "--eps", "0.0", "--m", "10"],
        ["envelope", "--eps", "0.2", "--m", "1"],
        ["envelope", "--eps", "0.2", "--m", "2:5"],
        ["envelope", "--eps", "0.2", "--m", "ten"],
    ],
)
def test_envelope_usage_errors(argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


# search


def test_search_reports_gap_and_witness(tmp_path):
    rc, text = _run(
        tmp_path,
        "search",
        "--m",
        "2",
        "--n",
        "2",
        "--budget",
        "1",
        "--format",
        "json",
        name="search.json",
    )
    assert rc == 0
    payload = json.loads(text)
    assert payload["upper"] == scalar_bh_best(2)[1].value
    assert payload["best_ratio"] <= payload["upper"] * (1.0 + 1e-6)
    assert payload["gap"] == payload["upper"] - payload["best_ratio"]
    witness = json.loads((tmp_path / "search.json.witness.json").read_text())
    P = parse(json.dumps(witness["polynomial"]))
    assert (P.m, P.n) == (2, 2)
    assert witness["best_ratio"] == payload["best_ratio"]


def test_search_degree_one_upper_is_one(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    rc = main(["search", "--m", "1", "--budget", "1", "--format", "json",
               "--out", "one.json"])
    assert rc == 0
    payload = json.loads((tmp_path / "one.json").read_text())
    assert payload["upper"] == 1.0
    assert payload["gap"] >= -1e-12


def test_search_default_witness_name(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    rc = main(["search", "--m", "2", "--n", "2", "--budget", "1"])
    assert rc == 0
    assert (tmp_path / "search-witness-m2-n2.json").exists()


@pytest.mark.parametrize(
    "argv",
    [
        ["search", "--m", "2", "--budget", "0"],
        ["search", "--m", "0"],
        ["search", "--m", "2", "--n", "0"],
    ],
)
def test_search_usage_errors(argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


# global flags


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert f"bhkit {__version__}" in capsys.readouterr().out


def test_negative_seed_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["constants", "--seed", "-1"])
    assert exc.value.code == 2


def test_missing_command_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2
