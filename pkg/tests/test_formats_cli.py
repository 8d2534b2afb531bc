import json
import math
import re

import numpy as np
import pytest
import shapely
from shapely.geometry import Polygon

from apictorial import (
    AssemblyConfig,
    InvalidInputError,
    InvalidPolygonError,
    MalformedFileError,
    RigidMotion2D,
    assemble_full,
    load_config,
    load_pieces,
    read_piece_file,
    render_svg,
    save_pieces,
)
from apictorial.assembly import AssemblyTree
from apictorial.cli import EXIT_CODES, main
from apictorial.formats import load_assembly, load_ground_truth, save_assembly, save_diagnostics, save_ground_truth
from apictorial.geometry import ClosedPolyline
from apictorial.render import svg_document

from conftest import puzzle

SQUARE = [[0, 0], [10, 0], [10, 10], [0, 10]]


def write(path, doc):
    path.write_text(json.dumps(doc))
    return path


def svg_polygons(text):
    polys = []
    for d in re.findall(r'<path id="[^"]*" d="([^"]*)"', text):
        nums = np.array(re.findall(r"-?\d+\.\d+", d), dtype=float).reshape(-1, 2)
        polys.append(Polygon(nums))
    return polys


# -- piece files -----------------------------------------------------------------


def test_load_square(tmp_path):
    f = write(tmp_path / "p.json", {"pieces": [{"id": "a", "points": SQUARE}]})
    ids, pieces = read_piece_file(f)
    assert ids == ["a"]
    assert len(pieces[0].points) == 4


def test_clockwise_piece_becomes_counter_clockwise(tmp_path):
    f = write(tmp_path / "p.json", {"pieces": [{"id": 1, "points": SQUARE[::-1]}]})
    (p,) = load_pieces(f)
    assert p.signed_area == pytest.approx(100.0)


def test_save_load_round_trip_is_exact(tmp_path, rng):
    pieces = [ClosedPolyline(rng.normal(size=(3, 2)) * 1e3 + [[0, 0], [5e3, 0], [0, 5e3]]) for _ in range(5)]
    pieces = [p.oriented_ccw() for p in pieces]
    save_pieces(tmp_path / "p.json", pieces, [f"x{k}" for k in range(5)])
    ids, back = read_piece_file(tmp_path / "p.json")
    assert ids == [f"x{k}" for k in range(5)]
    for p, q in zip(pieces, back):
        np.testing.assert_array_equal(p.points, q.points)


def test_parse_error_has_line_context(tmp_path):
    f = tmp_path / "bad.json"
    f.write_text('{"pieces": [\n  {"id": "a", "points": [[0, 0], [1, 0]\n]}')
    with pytest.raises(MalformedFileError, match=r"line \d+, column \d+"):
        read_piece_file(f)


def test_missing_key(tmp_path):
    f = write(tmp_path / "p.json", {"things": []})
    with pytest.raises(MalformedFileError, match="pieces"):
        read_piece_file(f)


def test_errors_name_the_piece(tmp_path):
    bowtie = [[0, 0], [10, 10], [10, 0], [0, 10]]
    f = write(tmp_path / "p.json", {"pieces": [{"id": "ok", "points": SQUARE}, {"id": "bow", "points": bowtie}]})
    with pytest.raises(InvalidPolygonError, match="bow"):
        read_piece_file(f)
    f = write(tmp_path / "q.json", {"pieces": [{"id": "tiny", "points": [[0, 0], [1, 1]]}]})
    with pytest.raises(InvalidPolygonError, match="tiny"):
        read_piece_file(f)


def test_duplicate_ids_rejected(tmp_path):
    f = write(tmp_path / "p.json", {"pieces": [{"id": "a", "points": SQUARE}, {"id": "a", "points": SQUARE}]})
    with pytest.raises(InvalidInputError, match="duplicate"):
        read_piece_file(f)


def test_repeated_points_collapse(tmp_path):
    pts = [[0, 0], [10, 0], [10, 0], [10, 10], [0, 10], [0, 0]]
    f = write(tmp_path / "p.json", {"pieces": [{"id": "a", "points": pts}]})
    (p,) = load_pieces(f)
    assert len(p.points) == 4


# -- ground truth, assemblies, config ----------------------------------------------


def test_ground_truth_round_trip(tmp_path):
    gt = puzzle(2, 3, noise=0.25)
    save_pieces(tmp_path / "p.json", gt.pieces, gt.ids)
    save_ground_truth(tmp_path / "t.json", gt)
    back = load_ground_truth(tmp_path / "t.json", load_pieces(tmp_path / "p.json"))
    assert back.adjacency == gt.adjacency
    assert back.ids == gt.ids
    assert (back.rows, back.cols, back.piece_size) == (gt.rows, gt.cols, gt.piece_size)
    for g, h in zip(gt.true_motions, back.true_motions):
        assert (g.theta, g.tx, g.ty) == (h.theta, h.tx, h.ty)
    for a, b in zip(gt.shared_arcs, back.shared_arcs):
        assert (a.a, a.b, a.start_a, a.count_a) == (b.a, b.b, b.start_a, b.count_a)
        np.testing.assert_array_equal(a.points, b.points)


def test_ground_truth_piece_count_mismatch(tmp_path):
    gt = puzzle(2, 2)
    save_ground_truth(tmp_path / "t.json", gt)
    with pytest.raises(InvalidInputError):
        load_ground_truth(tmp_path / "t.json", gt.pieces[:3])


def test_assembly_round_trip(tmp_path):
    tree = AssemblyTree([(0, 1), (1, 2)], [RigidMotion2D(), RigidMotion2D(0.3, 1.5, -2.0), RigidMotion2D(-1.0, 7, 8)], 0)
    save_assembly(tmp_path / "a.json", tree, ["a", "b", "c"])
    back, ids = load_assembly(tmp_path / "a.json")
    assert ids == ["a", "b", "c"]
    assert back.edges == tree.edges and back.root == 0
    for g, h in zip(tree.placements, back.placements):
        assert (g.theta, g.tx, g.ty) == (h.theta, h.tx, h.ty)


def test_diagnostics_write_infinity_as_null(tmp_path):
    save_diagnostics(tmp_path / "d.json", {"w": [1.0, math.inf], "n": np.int64(3)})
    assert json.loads((tmp_path / "d.json").read_text()) == {"w": [1.0, None], "n": 3}


def test_config_file_and_overrides(tmp_path):
    f = write(tmp_path / "c.json", {"delta": 10.0, "r": 40.0})
    cfg = load_config(f, {"r": 60.0, "epsilon": None})
    assert cfg.delta == 10.0 and cfg.r == 60.0
    assert cfg.eps == AssemblyConfig(delta=10.0, r=60.0).eps
    assert load_config(None) == AssemblyConfig()
    with pytest.raises(InvalidInputError, match="unknown"):
        load_config(write(tmp_path / "u.json", {"nope": 1}))
    with pytest.raises(MalformedFileError):
        load_config(write(tmp_path / "l.json", [1, 2]))


# -- rendering ----------------------------------------------------------------------


def test_single_piece_renders_one_path(tmp_path):
    tree = AssemblyTree([], [RigidMotion2D()], 0)
    out = render_svg(tree, [ClosedPolyline(SQUARE)], tmp_path / "one.svg", ids=["only"])
    text = out.read_text()
    assert text.count("<path ") == 1
    assert 'id="piece-only"' in text
    assert "<line" not in text


def test_empty_assembly_raises_and_writes_nothing(tmp_path):
    with pytest.raises(InvalidInputError):
        render_svg(AssemblyTree([], [], 0), [], tmp_path / "none.svg")
    assert not (tmp_path / "none.svg").exists()


def test_rendered_true_assembly_tiles(tmp_path):
    gt = puzzle(2, 2, noise=0.0)
    tree = AssemblyTree([(0, 1), (0, 2), (1, 3)], list(gt.true_motions), 0)
    text = svg_document(tree, gt.pieces)
    assert text.count('class="tree-edge"') == 3
    polys = svg_polygons(text)
    assert len(polys) == 4
    union = shapely.union_all(polys)
    assert union.area == pytest.approx(sum(p.area for p in polys), rel=1e-6)
    x0, y0, x1, y1 = union.bounds
    assert (x1 - x0, y1 - y0) == pytest.approx((2 * gt.piece_size, 2 * gt.piece_size), abs=1e-3)


# -- command line -------------------------------------------------------------------


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def error_of(err):
    return json.loads(err.strip().splitlines()[-1])["error"]


def test_cli_end_to_end(tmp_path, capsys):
    p, t = tmp_path / "p.json", tmp_path / "t.json"
    assert run(capsys, "generate", "--rows", 2, "--cols", 2, "--noise", 0.25, "--out", p, "--truth", t)[0] == 0
    ids, pieces = read_piece_file(p)
    assert ids == ["r0c0", "r0c1", "r1c0", "r1c1"]
    gt = load_ground_truth(t, pieces)

    code, out, _ = run(capsys, "compare", p, "r0c0", "r0c1")
    assert code == 0
    doc = json.loads(out)
    assert doc["weight"] > 0 and doc["length"] > 0 and set(doc["motion"]) == {"theta", "tx", "ty"}

    a, d = tmp_path / "a.json", tmp_path / "d.json"
    assert run(capsys, "assemble", p, "--out", a, "--diagnostics", d)[0] == 0
    tree, tree_ids = load_assembly(a)
    assert tree_ids == ids
    assert {tuple(sorted(e)) for e in tree.edges} <= set(gt.adjacency)
    diag = json.loads(d.read_text())
    assert "timings" in diag and "tree_edges" in diag

    svg = tmp_path / "a.svg"
    assert run(capsys, "render", p, a, "--out", svg)[0] == 0
    assert svg.read_text().count("<path ") == 4

    r = tmp_path / "r.json"
    assert run(capsys, "resample", p, "--delta", 15, "--out", r)[0] == 0
    assert all(len(q.points) < len(pp.points) for q, pp in zip(load_pieces(r), pieces))

    s = tmp_path / "s.json"
    assert run(capsys, "signature", r, "--id", "r1c1", "--radius", 50, "--out", s)[0] == 0
    sig = json.loads(s.read_text())
    assert list(sig["signatures"]) == ["r1c1"]


def test_cli_error_codes(tmp_path, capsys):
    p = write(tmp_path / "p.json", {"pieces": [{"id": "a", "points": SQUARE}, {"id": "b", "points": SQUARE}]})
    bad = tmp_path / "bad.json"
    bad.write_text("{nope")
    cases = [
        (("generate", "--rows", 0, "--out", tmp_path / "x.json"), "invalid-input"),
        (("resample", p, "--delta", 1000, "--out", tmp_path / "x.json"), "resolution"),
        (("signature", p, "--radius", 100), "radius-too-large"),
        (("compare", p, "a", "zzz"), "invalid-input"),
        (("assemble", bad, "--out", tmp_path / "x.json"), "parse"),
        (("assemble", tmp_path / "missing.json", "--out", tmp_path / "x.json"), "io"),
        (("render", p, bad, "--out", tmp_path / "x.svg"), "parse"),
    ]
    for argv, category in cases:
        code, _, err = run(capsys, *argv)
        assert error_of(err) == category, argv
        assert code == EXIT_CODES[category] != 0


def test_cli_render_rejects_foreign_assembly(tmp_path, capsys):
    p = write(tmp_path / "p.json", {"pieces": [{"id": "a", "points": SQUARE}]})
    a = tmp_path / "a.json"
    save_assembly(a, AssemblyTree([], [RigidMotion2D()], 0), ["other"])
    code, _, err = run(capsys, "render", p, a, "--out", tmp_path / "x.svg")
    assert error_of(err) == "invalid-input" and code == 4
    assert not (tmp_path / "x.svg").exists()
