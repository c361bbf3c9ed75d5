import json

from valgen.reports import ROW_COLUMNS, ReportProcessor

ROWS = [
    {"polynomial": "1", "value": "0", "outcome": "vacuous", "detail": ""},
    {"polynomial": "x", "value": "1", "outcome": "pass", "detail": "Q = x"},
    {"polynomial": "x - 1", "value": "1/2", "outcome": "fail", "detail": "no Q"},
    {"polynomial": "0", "value": "inf", "outcome": "vacuous"},
]


def test_to_frame():
    df = ReportProcessor.to_frame(ROWS)
    assert list(df.columns) == ROW_COLUMNS
    assert len(df) == 4
    assert df.loc[3, "detail"] == ""


def test_summarize():
    summary = ReportProcessor.summarize(ReportProcessor.to_frame(ROWS))
    assert summary == {
        "members": 4,
        "outcomes": {"fail": 1, "pass": 1, "vacuous": 2},
        "failures": 1,
        "min_value": "0",
        "max_value": "1",
    }


def test_summarize_empty():
    summary = ReportProcessor.summarize(ReportProcessor.to_frame([]))
    assert summary["members"] == 0
    assert summary["failures"] == 0


def test_render_json_is_stable():
    text = ReportProcessor.render_json({"b": 1, "a": [1, 2]})
    assert text == ReportProcessor.render_json({"a": [1, 2], "b": 1})
    assert text.endswith("}\n")
    assert json.loads(text) == {"a": [1, 2], "b": 1}


def test_export_to_json(tmp_path):
    path = tmp_path / "report.json"
    assert ReportProcessor.export_to_json({"verdict": "pass"}, str(path))
    assert json.loads(path.read_text()) == {"verdict": "pass"}
    assert not ReportProcessor.export_to_json({}, str(tmp_path / "missing" / "report.json"))


def test_export_to_json_with_rows(tmp_path):
    path = tmp_path / "report.json"
    assert ReportProcessor.export_to_json({"verdict": "fail"}, str(path), ReportProcessor.to_frame(ROWS))
    document = json.loads(path.read_text())
    assert document["verdict"] == "fail"
    assert [row["polynomial"] for row in document["rows"]] == ["1", "x", "x - 1", "0"]
    assert document["rows"][3]["detail"] == ""


def test_export_to_csv(tmp_path):
    path = tmp_path / "rows.csv"
    assert ReportProcessor.export_to_csv(ReportProcessor.to_frame(ROWS), str(path))
    lines = path.read_text().splitlines()
    assert lines[0] == ",".join(ROW_COLUMNS)
    assert lines[2] == "x,1,pass,Q = x"
    assert not ReportProcessor.export_to_csv(ReportProcessor.to_frame(ROWS), str(tmp_path / "missing" / "rows.csv"))
