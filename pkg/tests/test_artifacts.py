import json

from novikov_probe.artifacts import render_json
from novikov_probe.artifacts import write_csv
from novikov_probe.artifacts import write_report_json
from novikov_probe.fox import assemble_presentation_complex
from novikov_probe.novikov import compute_numbers
from novikov_probe.options import EngineOptions
from novikov_probe.presentation import parse_presentation
from novikov_probe.presentation import validate_character


def _bs_numbers(torsion: bool):
    pres = parse_presentation("<a,b | a b a^-1 = b^2>")
    complex_ = assemble_presentation_complex(pres, validate_character(pres, [[1, 0]]))
    return compute_numbers(complex_, EngineOptions(torsion=torsion))


def test_report_json_schema(tmp_path) -> None:
    path = write_report_json(tmp_path / "out" / "report.json", {"betti": [0, 1], "b": 1})

    text = path.read_text(encoding="utf-8")
    payload = json.loads(text)

    assert payload["schema_version"] == "1"
    assert payload["betti"] == [0, 1]
    assert text.endswith("}\n")
    assert text == render_json({"b": 1, "betti": [0, 1]})
    assert text.index('"b"') < text.index('"betti"') < text.index('"schema_version"')


def test_csv_rows(tmp_path) -> None:
    path = write_csv(tmp_path / "bs12.csv", _bs_numbers(torsion=True))

    lines = path.read_text(encoding="utf-8").splitlines()

    assert lines == [
        "degree,betti,torsion_plus,torsion_minus,chain_rank",
        "0,0,0,0,1",
        "1,0,0,1,2",
        "2,0,0,0,1",
    ]


def test_csv_leaves_torsion_blank_when_not_computed(tmp_path) -> None:
    path = write_csv(tmp_path / "bs12.csv", _bs_numbers(torsion=False))

    lines = path.read_text(encoding="utf-8").splitlines()

    assert lines[1] == "0,0,,,1"
