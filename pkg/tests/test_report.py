import pytest

from adaptseg.errors import ParameterError
from adaptseg.report import (
    CSV_FIELDS,
    RunReport,
    format_text_report,
    parse_manifest,
    read_csv_report,
    write_reports,
)


def sample_reports():
    return [
        RunReport(
            image="brain.pgm",
            strategy="cen",
            lambda_min=700.0,
            lambda_max=700.0,
            mu=1000.0,
            it=5,
            it_gs_mean=19.2,
            dice=0.9871,
            jaccard=0.9745,
            wall_ms=123.456,
        ),
        RunReport(image="missing.pgm", strategy="ctd", error="OSError: no such file"),
    ]


def test_csv_round_trip(tmp_path):
    reports = sample_reports()
    write_reports(reports, tmp_path / "report.txt", tmp_path / "report.csv")
    back = read_csv_report(tmp_path / "report.csv")
    assert len(back) == 2
    for orig, parsed in zip(reports, back):
        assert parsed == orig


def test_text_report_is_aligned(tmp_path):
    text = format_text_report(sample_reports())
    lines = text.strip().split("\n")
    assert len(lines) == 4  # header, rule, two rows
    header = lines[0]
    for column in CSV_FIELDS:
        assert column in header
    assert "19.2" in lines[2]
    assert "OSError" in lines[3]


def test_manifest_parsing(tmp_path):
    path = tmp_path / "runs.txt"
    path.write_text(
        "# comment line\n"
        "\n"
        "image=a.pgm strategy=cen lambda=700 mu=1000\n"
        "image=b.pgm strategy=thr lambda_min=170 lambda_max=800 mu=100 truth=b_mask.pgm\n"
    )
    rows = parse_manifest(path)
    assert len(rows) == 2
    assert rows[0]["image"] == "a.pgm"
    assert rows[0]["lambda"] == "700"
    assert rows[1]["truth"] == "b_mask.pgm"
    assert rows[1]["_line"] == "4"


def test_manifest_rejects_bad_tokens(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("image=a.pgm strategy\n")
    with pytest.raises(ParameterError):
        parse_manifest(path)


def test_manifest_empty(tmp_path):
    path = tmp_path / "empty.txt"
    path.write_text("# nothing here\n\n")
    assert parse_manifest(path) == []
