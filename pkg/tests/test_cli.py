import json

import pytest

from evenspec.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_enumerate(capsys):
    code, out, _ = run(capsys, "enumerate", "4")
    assert code == 0 and len(out.split()) == 6
    code, out, _ = run(capsys, "enumerate", "3", "--json")
    assert [json.loads(x)["order"] for x in out.splitlines()] == [3, 3]


def test_certify_star(capsys, data_dir):
    code, out, _ = run(capsys, "certify", str(data_dir / "star6.mat"))
    assert code == 0
    assert "is_square=False" in out and "x^6 - 5*x^4" in out
    code, out, _ = run(capsys, "certify", str(data_dir / "star6.mat"), "--json")
    rec = json.loads(out)
    assert rec["is_square"] is False and rec["charpoly"] == "x^6 - 5*x^4"


def test_construct_cycle(capsys):
    code, out, _ = run(capsys, "construct", "cycle", "6", "--json")
    rec = json.loads(out)
    assert code == 0 and rec["is_square"] and rec["certificate"]["mode"] == "exact"


@pytest.mark.parametrize("argv", [
    ["construct", "rank2", "1,1", "1,1"],
    ["construct", "complete", "4"],
    ["construct", "blowup", "cycle:4", "1", "2"],
    ["construct", "pq-join", "cycle:4", "1", "cycle:4", "1"],
    ["construct", "clique-join", "Cr"],
])
def test_construct_variants(capsys, argv):
    code, out, _ = run(capsys, *argv)
    assert code == 0 and "is_square=True" in out


def test_classify_all_json(capsys):
    code, out, err = run(capsys, "classify", "--all", "4", "--json")
    recs = [json.loads(x) for x in out.splitlines()]
    assert code == 0 and len(recs) == 6
    assert sorted(r["verdict"] for r in recs).count("ProvedNo") == 3
    assert all("timings" not in r for r in recs)


def test_classify_single_with_seed(capsys, monkeypatch):
    monkeypatch.setenv("EVENSPEC_SEED", "3")
    code, out, err = run(capsys, "classify", "C~")
    assert code == 0 and "CertifiedYes" in out and "CertifiedYes=1" in err


def test_report_writes_figures(capsys, tmp_path):
    code, _, _ = run(capsys, "classify", "--all", "4", "--report", str(tmp_path))
    assert code == 0
    for name in ("records.jsonl", "summary.tsv", "verdicts.png", "spectra.png"):
        assert (tmp_path / name).stat().st_size > 0
    assert (tmp_path / "verdicts.png").read_bytes()[:4] == b"\x89PNG"
    assert len((tmp_path / "summary.tsv").read_text().splitlines()) == 7


def test_search_command(capsys):
    code, out, _ = run(capsys, "search", "C~", "--restarts", "2", "--json")
    rec = json.loads(out)
    assert code == 0 and rec["certificate"] is not None


@pytest.mark.parametrize("argv", [
    ["classify"],
    ["classify", "C~", "--all", "4"],
    ["classify", "C"],
    ["certify", "/nonexistent/file"],
    ["construct", "nonsense", "1"],
    ["construct", "cycle", "x"],
    ["construct", "cycle", "5"],
    ["search", "B~"],
])
def test_input_errors_exit_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2 and err.startswith("evenspec: error:")


def test_bad_seed_env(capsys, monkeypatch):
    monkeypatch.setenv("EVENSPEC_SEED", "abc")
    code, _, err = run(capsys, "enumerate", "2")
    assert code == 2 and "EVENSPEC_SEED" in err
