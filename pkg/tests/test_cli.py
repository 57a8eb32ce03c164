import json
import xml.etree.ElementTree as ET

import pytest
from shapely.geometry import LineString

from cat0 import serialize_complex
from cat0.cli import run
from instances import instance_b, instance_c, instance_d

SVG = "{http://www.w3.org/2000/svg}"


@pytest.fixture
def files(tmp_path):
    out = {}
    for name, K in (("b", instance_b()), ("c", instance_c()), ("d", instance_d())):
        p = tmp_path / f"{name}.json"
        p.write_text(serialize_complex(K))
        out[name] = str(p)
    out["dir"] = tmp_path
    return out


def test_validate(files, capsys):
    assert run(["validate", files["c"]]) == 0
    assert json.loads(capsys.readouterr().out)["pass"] is True


def test_validate_failure_exit_code(tmp_path, capsys):
    doc = {"format": "cat0-complex/1", "n_vertices": 3, "faces": [[0, 1, 2]],
           "edge_lengths": [[0, 1, 1.0], [1, 2, 1.0], [0, 2, 3.0]]}
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(doc))
    assert run(["validate", str(p)]) == 1
    assert "TRIANGLE_INEQ" in capsys.readouterr().out


def test_query_prints_distance(files, capsys):
    code = run(["query", files["b"], "--source", '{"vertex":0}', "--target", '{"vertex":2}'])
    assert code == 0
    assert capsys.readouterr().out.strip() == "distance=1.4142135623730951"


def test_usage_errors(files, capsys):
    assert run(["query", files["b"], "--source", '{"vertx":0}', "--target", '{"vertex":2}']) == 2
    assert run(["query", files["b"], "--source", "{", "--target", '{"vertex":2}']) == 2
    assert run(["validate", str(files["dir"] / "missing.json")]) == 2
    assert run(["spm", files["c"], "--bogus"]) == 2
    assert run(["gen", "--kind", "nope", "--n", "5"]) == 2


def test_spm_query_and_render(files, capsys):
    spm = str(files["dir"] / "spm.json")
    assert run(["spm", files["c"], "--source", '{"vertex":1}', "-o", spm]) == 0
    assert run(["query", files["c"], "--spm", spm, "--target", '{"vertex":4}']) == 0
    assert capsys.readouterr().out.strip() == "distance=2.0"
    svg = str(files["dir"] / "out.svg")
    assert run(["render", files["c"], "--spm", spm, "-o", svg]) == 0
    root = ET.parse(svg).getroot()
    assert root.find(f"{SVG}title").text == "combinatorial view"
    sides = [e for e in root.iter(f"{SVG}path") if e.get("class") == "cone-side"]
    assert len(sides) == 2 * len(json.load(open(spm))["cones"])
    strip = str(files["dir"] / "strip.svg")
    assert run(["render", files["c"], "--mode", "strip", "--spm", spm, "--cone", "1", "-o", strip]) == 0
    ET.parse(strip)


def test_tutte_layout_is_planar(files):
    svg = str(files["dir"] / "d.svg")
    assert run(["render", files["d"], "-o", svg]) == 0
    lines = []
    for e in ET.parse(svg).getroot().iter(f"{SVG}line"):
        a = (float(e.get("x1")), float(e.get("y1")))
        b = (float(e.get("x2")), float(e.get("y2")))
        lines.append(LineString([a, b]))
    for i in range(len(lines)):
        for j in range(i + 1, len(lines)):
            assert not lines[i].crosses(lines[j])


def test_hull_and_gen_are_deterministic(files, capsys):
    pts = files["dir"] / "pts.json"
    pts.write_text(json.dumps([{"vertex": 0}, {"vertex": 1}, {"vertex": 2}, {"vertex": 5}]))
    outs = []
    for k in range(2):
        o = files["dir"] / f"h{k}.json"
        assert run(["hull", files["d"], "--points", str(pts), "-o", str(o)]) == 0
        outs.append(o.read_bytes())
    assert outs[0] == outs[1]
    assert json.loads(outs[0])["contains_all"] is True
    g = [files["dir"] / f"g{k}.json" for k in range(2)]
    for p in g:
        assert run(["gen", "--kind", "curved", "--n", "30", "--seed", "4", "-o", str(p)]) == 0
    assert g[0].read_bytes() == g[1].read_bytes()
    assert run(["validate", str(g[0])]) == 0


def test_oracle_command(files, capsys):
    assert run(["oracle", files["c"], "--source", '{"vertex":1}', "--target", '{"vertex":3}', "--epsilon", "0.05"]) == 0
    out = dict(line.split("=") for line in capsys.readouterr().out.split())
    assert float(out["distance"]) >= float(out["kernel"]) - 1e-9
