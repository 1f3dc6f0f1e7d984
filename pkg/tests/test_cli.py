import json

import pytest
from click.testing import CliRunner

from eigenprod.cli import main


@pytest.fixture
def run():
    runner = CliRunner()

    def invoke(*args):
        return runner.invoke(main, list(args))

    return invoke


def _rows(output: str) -> list[list[str]]:
    return [line.split("\t") for line in output.splitlines() if "\t" in line]


@pytest.mark.parametrize("table_id, count", [("1", 6), ("2", 17), ("3", 18), ("22", 40)])
def test_tables(run, table_id, count):
    res = run("tables", "--id", table_id)
    assert res.exit_code == 0
    rows = _rows(res.stdout)
    assert len(rows) == count + 1


def test_tables_json(run):
    res = run("tables", "--id", "3", "--json")
    data = json.loads(res.stdout)
    assert len(data) == 18
    assert {"k", "character", "modulus", "value"} == set(data[0])
    assert run("tables", "--id", "7").exit_code == 2


def test_search_single_pair(run):
    res = run("search", "--case", "1", "--pair", "4,chi_{5,2}")
    assert res.exit_code == 0
    rows = _rows(res.stdout)
    assert len(rows) == 2
    assert rows[1][-1].startswith("Delta_{6,5} = (1)")
    assert "1 identities" in res.stdout


@pytest.mark.parametrize(
    "args",
    [
        ("--case", "2", "--pair", "4,1_1"),
        ("--case", "1", "--pair", "2,1_1"),
        ("--case", "1", "--pair", "nonsense"),
        ("--level-cap", "0"),
        ("--weight-cap", "3"),
        ("--case", "3"),
    ],
)
def test_search_usage_errors(run, args):
    assert run("search", *args).exit_code == 2


def test_search_case2_report(run, tmp_path):
    res = run("search", "--case", "2", "--level-cap", "30", "--weight-cap", "12", "--json", "--report", str(tmp_path))
    assert res.exit_code == 0
    data = json.loads(res.stdout)
    assert [r["id"] for r in data["identities"]] == [
        "N1_w4+4_1_1_1_1",
        "N1_w4+6_1_1_1_1",
        "N3_w2+3_1_3_chi3",
        "N5_w2+2_1_5_chi_{5,2}",
    ]
    assert (tmp_path / "identities.tsv").read_text().count("\n") == 5
    for name in ("identities_by_level.png", "weights.png"):
        assert (tmp_path / name).read_bytes()[:4] == b"\x89PNG"


def test_verify(run):
    res = run("verify", "--identity", "N3_w3+3_chi3_chi3")
    assert res.exit_code == 0
    assert _rows(res.stdout)[1][:2] == ["N3_w3+3_chi3_chi3", "True"]
    res = run("verify", "--identity", "N3_w3+3_chi3_chi3", "--json", "--terms", "300")
    assert json.loads(res.stdout)[0]["checked_upto"] == 300
    assert run("verify", "--identity", "N2_w1+1_x_y").exit_code == 2


def test_expand(run):
    res = run("expand", "--form", "E4^{1_1,1_1}", "--terms", "5")
    assert res.exit_code == 0
    assert [r[1] for r in _rows(res.stdout)[1:]] == ["1/240", "1", "9", "28", "73", "126"]
    assert run("expand", "--form", "E4^{1_1}", "--terms", "5").exit_code == 2
    assert run("expand", "--form", "E4^{1_1,1_1}", "--terms", "0").exit_code == 2


def test_char(run):
    res = run("char", "--modulus", "5", "--list")
    rows = _rows(res.stdout)
    assert len(rows) == 5
    assert sum(r[4] == "True" for r in rows[1:]) == 3
    assert run("char", "--modulus", "12").stdout.strip() == "4 characters modulo 12"
    assert run("char", "--modulus", "0").exit_code == 2
