import json
from pathlib import Path

import pytest

from engel_normal import __version__
from engel_normal.cli import main

CONFIGS = Path(__file__).resolve().parents[1] / "demos" / "configs"


def _report(out, command):
    return json.loads((out / f"{command}_report.json").read_text())


@pytest.mark.parametrize(
    "name, code",
    [("cone", 0), ("halfspace", 0), ("step-g", 0), ("fgk", 0), ("increasing-g", 1), ("malformed", 2)],
)
def test_validate_exit_codes(tmp_path, name, code):
    argv = ["validate", "--config", str(CONFIGS / f"{name}.cfg"), "--grid", "11", "--out", str(tmp_path)]
    assert main(argv) == code
    if code != 2:
        rep = _report(tmp_path, "validate")
        assert rep["version"] == __version__
        assert len(rep["config_hash"]) == 64
        assert rep["passed"] is (code == 0)


def test_inline_and_flag_overrides(tmp_path):
    text = "[set]\nvariant = halfspace\nnormal = 0, 1, 1, 1\n[run]\nseed = 4\n"
    assert main(["validate", "--inline", text, "--seed", "9", "--grid", "5", "--out", str(tmp_path)]) == 0
    assert _report(tmp_path, "validate")["seed"] == 9


@pytest.mark.parametrize(
    "argv",
    [
        ["validate"],
        ["validate", "--inline", "[set]\nvariant = cone\n[run]\nbogus = 1\n"],
        ["validate", "--inline", "[set]\nvariant = cone\n[run]\ngrid = 1\n"],
        ["validate", "--inline", "[set]\nvariant = cone\n[run]\nregion = 1, 2\n"],
        ["validate", "--inline", "[set]\nvariant = cone\n", "--tol-pdi", "-1"],
        ["validate", "--config", "/nonexistent/x.cfg"],
        ["filiform", "--step", "1"],
        ["filiform", "--step", "3", "--ts", "0,1"],
    ],
)
def test_usage_errors(tmp_path, argv):
    assert main(argv + ["--out", str(tmp_path)]) == 2


def test_argparse_errors():
    with pytest.raises(SystemExit) as exc:
        main(["nonsense"])
    assert exc.value.code == 2


def test_graph_is_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        assert main(["graph", "--config", str(CONFIGS / "cone.cfg"), "--grid", "9", "--out", str(d)]) == 0
    for name in ("intrinsic_T.csv", "rotated_graph.csv"):
        assert (a / name).read_bytes() == (b / name).read_bytes()
    assert _report(a, "graph")["config_hash"] == _report(b, "graph")["config_hash"]
    header = (a / "intrinsic_T.csv").read_text().splitlines()[0]
    assert header == "p3,p4,T,direction_a"


def test_config_hash_tracks_inputs(tmp_path):
    main(["graph", "--config", str(CONFIGS / "cone.cfg"), "--grid", "5", "--out", str(tmp_path / "a")])
    main(["graph", "--config", str(CONFIGS / "cone.cfg"), "--grid", "6", "--out", str(tmp_path / "b")])
    assert _report(tmp_path / "a", "graph")["config_hash"] != _report(tmp_path / "b", "graph")["config_hash"]


def test_analyze(tmp_path):
    assert main(["analyze", "--config", str(CONFIGS / "step-g.cfg"), "--grid", "9", "--out", str(tmp_path)]) == 0
    assert _report(tmp_path, "analyze")["passed"]


def test_filiform(tmp_path, capsys):
    assert main(["filiform", "--step", "3", "--out", str(tmp_path)]) == 0
    rep = _report(tmp_path, "filiform")
    assert rep["passed"]
    assert main(["filiform", "--step", "3", "--ts", "0,1,1", "--out", str(tmp_path)]) == 1
    assert main(["filiform", "--step", "4", "--ts", "0,1/2,1,3/2", "--out", str(tmp_path)]) == 0


def test_demo(tmp_path):
    assert main(["demo", "--out", str(tmp_path)]) == 0
    rep = _report(tmp_path, "demo")
    assert rep["passed"] and rep["seed"] == 0
