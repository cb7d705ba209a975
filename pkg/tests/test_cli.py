import json

import pytest

from clusterkit.cli import main
from clusterkit.quiver import Quiver, to_text, to_json_dict


@pytest.fixture
def three_cycle_file(tmp_path):
    path = tmp_path / "tri.txt"
    path.write_text(to_text(Quiver(3, ((1, 2), (2, 3), (3, 1)))))
    return str(path)


@pytest.fixture
def table_quiver_file(tmp_path):
    q = Quiver(7, ((1, 2), (2, 5), (5, 1), (2, 6), (6, 3), (3, 2), (3, 4), (6, 7)))
    path = tmp_path / "table.json"
    path.write_text(json.dumps(to_json_dict(q)))
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_expand_gcc(three_cycle_file, capsys):
    code, out, err = run(capsys, "expand", "--quiver", three_cycle_file,
                         "--model", "gcc", "--dvector", "2,2,2")
    assert code == 0 and err == ""
    assert out.strip().endswith("/(x1^2*x2^2*x3^2)")
    assert out.count("+") == 9


def test_expand_zero_vector(three_cycle_file, capsys):
    code, out, _ = run(capsys, "expand", "--quiver", three_cycle_file,
                       "--model", "mutation", "--dvector", "0,0,0")
    assert code == 0 and out.strip() == "1"


def test_expand_models_agree_bytewise(table_quiver_file, capsys):
    outs = []
    for model in ("tpath", "matching"):
        code, out, _ = run(capsys, "expand", "--quiver", table_quiver_file,
                           "--model", model, "--dvector", "1,1,1,0,0,0,0")
        assert code == 0
        outs.append(out)
    assert outs[0] == outs[1]


def test_expand_json_format(three_cycle_file, capsys):
    code, out, _ = run(capsys, "expand", "--quiver", three_cycle_file,
                       "--model", "gcs", "--dvector", "1,1,0", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert len(data["terms"]) == 3


def test_invalid_input_error_envelope(three_cycle_file, capsys):
    code, out, err = run(capsys, "expand", "--quiver", three_cycle_file,
                         "--model", "gcs", "--dvector", "1,1,1")
    assert code == 2
    envelope = json.loads(err)
    assert envelope["code"] == "NotInW"
    assert "message" in envelope and envelope["context"]["command"] == "expand"


def test_bad_dvector_length(three_cycle_file, capsys):
    code, _, err = run(capsys, "expand", "--quiver", three_cycle_file,
                       "--model", "gcs", "--dvector", "1,1")
    assert code == 2
    assert json.loads(err)["code"] == "InvalidInput"


def test_count_and_witnesses(three_cycle_file, capsys):
    code, out, _ = run(capsys, "count", "--quiver", three_cycle_file,
                       "--model", "gcs", "--dvector", "2,2,2")
    assert code == 0 and out.strip() == "27"
    code, out, _ = run(capsys, "count", "--quiver", three_cycle_file,
                       "--model", "gcc", "--dvector", "2,2,2",
                       "--list-witnesses")
    assert code == 0
    witnesses = json.loads(out)
    assert len(witnesses) == 27


def test_decompose_output(three_cycle_file, capsys):
    code, out, _ = run(capsys, "decompose", "--quiver", three_cycle_file,
                       "--dvector", "2,2,2")
    assert code == 0
    rows = [json.loads(line) for line in out.strip().splitlines()]
    assert rows == [[0, 1, 1], [1, 0, 1], [1, 1, 0]]


def test_decompose_negative_entries(three_cycle_file, capsys):
    code, out, _ = run(capsys, "decompose", "--quiver", three_cycle_file,
                       "--dvector=-2,0,0")
    assert code == 0
    rows = [json.loads(line) for line in out.strip().splitlines()]
    assert rows == [{"initial": 1, "exponent": 2}]


def test_pipelines_svg(three_cycle_file, tmp_path, capsys):
    svg = tmp_path / "out.svg"
    code, out, _ = run(capsys, "pipelines", "--quiver", three_cycle_file,
                       "--dvector", "2,2,2", "--svg", str(svg))
    assert code == 0
    assert len(out.strip().splitlines()) == 3
    assert svg.read_text().startswith("<svg")


def test_snake_svg(table_quiver_file, tmp_path, capsys):
    svg = tmp_path / "snake.svg"
    code, out, _ = run(capsys, "snake", "--quiver", table_quiver_file,
                       "--dvector", "1,1,1,0,0,0,0", "--svg", str(svg))
    assert code == 0
    assert "matchings: 5" in out
    assert svg.read_text().startswith("<svg")


def test_broken_lines_command(tmp_path, capsys):
    q = Quiver(4, ((2, 1), (1, 4), (4, 2), (2, 3)))
    path = tmp_path / "q.json"
    path.write_text(json.dumps(to_json_dict(q)))
    svg = tmp_path / "line.svg"
    code, out, _ = run(capsys, "broken-lines", "--quiver", str(path),
                       "--subquiver", "1,2,3", "--svg", str(svg))
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[-1].startswith("theta ")
    rows = [json.loads(l) for l in lines[:-1]]
    assert len(rows) == 5
    assert {tuple(r["s"]) for r in rows} == {
        (0, 0, 0), (1, 0, 0), (0, 0, 1), (1, 0, 1), (1, 1, 1)}
    assert svg.read_text().startswith("<svg")


def test_crosscheck_pass_and_determinism(capsys):
    code1, out1, _ = run(capsys, "crosscheck", "--random", "5", "--seed", "42")
    code2, out2, _ = run(capsys, "crosscheck", "--random", "5", "--seed", "42")
    assert code1 == code2 == 0
    assert out1 == out2
    assert out1.strip().endswith("RESULT PASS")


def test_crosscheck_json(three_cycle_file, capsys):
    code, out, _ = run(capsys, "crosscheck", "--quiver", three_cycle_file,
                       "--format", "json", "--models", "mutation,gcs,tpath")
    assert code == 0
    data = json.loads(out)
    assert data["passed"] is True
    assert len(data["rows"]) == 6


def test_crosscheck_single_vertex(tmp_path, capsys):
    path = tmp_path / "one.txt"
    path.write_text(to_text(Quiver(1, ())))
    code, out, _ = run(capsys, "crosscheck", "--quiver", str(path))
    assert code == 0
    assert "RESULT PASS" in out


def test_enumerate_variables(three_cycle_file, capsys):
    code, out, _ = run(capsys, "enumerate-variables", "--quiver", three_cycle_file)
    assert code == 0
    table = json.loads(out)
    assert len(table) == 9
    assert table["-1,0,0"] == "x1"


def test_report_table_stable(table_quiver_file, capsys):
    code1, out1, _ = run(capsys, "report-table", "--quiver", table_quiver_file)
    code2, out2, _ = run(capsys, "report-table", "--quiver", table_quiver_file)
    assert code1 == code2 == 0
    assert out1 == out2
    assert "| (1,1,1,1,0,0,0) |" in out1


def test_missing_quiver_file(capsys):
    code, _, err = run(capsys, "expand", "--quiver", "/nonexistent.json",
                       "--model", "gcs", "--dvector", "1")
    assert code == 2
    assert json.loads(err)["code"] == "InvalidInput"
