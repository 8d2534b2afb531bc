"""JSON file formats: pieces, ground truth, assemblies, diagnostics and config.

Coordinates are written with ``repr`` precision, so a save/load round trip
reproduces every double exactly.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .assembly import AssemblyConfig, AssemblyTree
from .boolean import to_shapely
from .errors import ApictorialError, InvalidInputError, MalformedFileError
from .geometry import ClosedPolyline, RigidMotion2D, polyline_from_points
from .puzzlegen import GroundTruthPuzzle, SharedArc


def _read_json(path) -> object:
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        lines = text.splitlines()
        context = lines[exc.lineno - 1] if 0 < exc.lineno <= len(lines) else ""
        raise MalformedFileError(
            f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}: {context.strip()[:80]!r}"
        ) from None


def _write_json(path, doc) -> None:
    Path(path).write_text(json.dumps(doc, indent=1, allow_nan=False) + "\n")


def _require(doc, key, kind, where):
    if not isinstance(doc, dict) or key not in doc:
        raise MalformedFileError(f"{where}: missing key {key!r}")
    value = doc[key]
    if not isinstance(value, kind):
        raise MalformedFileError(f"{where}: {key!r} must be a {kind.__name__}")
    return value


# -- pieces --------------------------------------------------------------------


def read_piece_file(path) -> tuple[list[str], list[ClosedPolyline]]:
    """Ids and counter-clockwise pieces from a piece JSON file."""
    doc = _read_json(path)
    entries = _require(doc, "pieces", list, str(path))
    ids, pieces = [], []
    for k, entry in enumerate(entries):
        where = f"{path}: pieces[{k}]"
        pid = str(_require(entry, "id", (str, int), where))
        pts = _require(entry, "points", list, where)
        if pid in ids:
            raise InvalidInputError(f"{where}: duplicate piece id {pid!r}")
        try:
            arr = np.asarray(pts, dtype=float)
        except (TypeError, ValueError):
            raise MalformedFileError(f"{where}: points must be a list of [x, y] pairs") from None
        try:
            poly = polyline_from_points(arr, collapse_duplicates=True).oriented_ccw()
            to_shapely(poly)
        except ApictorialError as exc:
            raise type(exc)(f"piece {pid!r}: {exc}") from None
        ids.append(pid)
        pieces.append(poly)
    return ids, pieces


def load_pieces(path) -> list[ClosedPolyline]:
    return read_piece_file(path)[1]


def save_pieces(path, pieces, ids=None) -> None:
    ids = list(ids) if ids is not None else [str(k) for k in range(len(pieces))]
    if len(ids) != len(pieces):
        raise InvalidInputError("one id per piece is required")
    doc = {"pieces": [{"id": pid, "points": p.points.tolist()} for pid, p in zip(ids, pieces)]}
    _write_json(path, doc)


# -- motions, ground truth, assemblies -------------------------------------------


def _motion_doc(g: RigidMotion2D) -> dict:
    return {"theta": g.theta, "tx": g.tx, "ty": g.ty}


def _motion(doc, where) -> RigidMotion2D:
    try:
        return RigidMotion2D(float(doc["theta"]), float(doc["tx"]), float(doc["ty"]))
    except (KeyError, TypeError, ValueError):
        raise MalformedFileError(f"{where}: a motion needs numeric theta, tx, ty") from None


def save_ground_truth(path, puzzle: GroundTruthPuzzle) -> None:
    doc = {
        "rows": puzzle.rows,
        "cols": puzzle.cols,
        "piece_size": puzzle.piece_size,
        "ids": list(puzzle.ids),
        "true_motions": [_motion_doc(g) for g in puzzle.true_motions],
        "adjacency": [list(e) for e in puzzle.adjacency],
        "decoy_pairs": [list(e) for e in puzzle.decoy_pairs],
        "shared_arcs": [
            {
                "a": s.a,
                "b": s.b,
                "start_a": s.start_a,
                "count_a": s.count_a,
                "start_b": s.start_b,
                "count_b": s.count_b,
                "points": np.asarray(s.points).tolist(),
            }
            for s in puzzle.shared_arcs
        ],
    }
    _write_json(path, doc)


def load_ground_truth(path, pieces) -> GroundTruthPuzzle:
    """Ground truth for ``pieces`` (as loaded from the matching piece file)."""
    doc = _read_json(path)
    where = str(path)
    try:
        motions = [_motion(m, where) for m in _require(doc, "true_motions", list, where)]
        arcs = [
            SharedArc(
                int(s["a"]), int(s["b"]), int(s["start_a"]), int(s["count_a"]),
                int(s["start_b"]), int(s["count_b"]), np.asarray(s["points"], dtype=float),
            )
            for s in doc.get("shared_arcs", [])
        ]
        puzzle = GroundTruthPuzzle(
            pieces=list(pieces),
            ids=[str(x) for x in _require(doc, "ids", list, where)],
            true_motions=motions,
            adjacency=[tuple(int(v) for v in e) for e in _require(doc, "adjacency", list, where)],
            shared_arcs=arcs,
            rows=int(doc["rows"]),
            cols=int(doc["cols"]),
            piece_size=float(doc["piece_size"]),
            decoy_pairs=[tuple(int(v) for v in e) for e in doc.get("decoy_pairs", [])],
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedFileError(f"{where}: bad ground-truth record ({exc})") from None
    if len(puzzle.true_motions) != len(puzzle.pieces):
        raise InvalidInputError(f"{where}: {len(puzzle.true_motions)} motions for {len(puzzle.pieces)} pieces")
    return puzzle


def save_assembly(path, tree: AssemblyTree, ids) -> None:
    doc = {
        "root": tree.root,
        "ids": list(ids),
        "edges": [list(e) for e in tree.edges],
        "placements": [_motion_doc(g) for g in tree.placements],
    }
    _write_json(path, doc)


def load_assembly(path) -> tuple[AssemblyTree, list[str]]:
    doc = _read_json(path)
    where = str(path)
    placements = [_motion(m, where) for m in _require(doc, "placements", list, where)]
    try:
        edges = [tuple(int(v) for v in e) for e in _require(doc, "edges", list, where)]
        root = int(doc.get("root", 0))
    except (TypeError, ValueError):
        raise MalformedFileError(f"{where}: edges must be pairs of piece indices") from None
    ids = [str(x) for x in doc.get("ids", range(len(placements)))]
    return AssemblyTree(edges, placements, root), ids


# -- diagnostics and config -------------------------------------------------------


def _clean(value):
    # JSON has no infinity; unscored edges are written as null
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if isinstance(value, np.generic):
        return _clean(value.item())
    return value


def save_diagnostics(path, diagnostics: dict) -> None:
    _write_json(path, _clean(diagnostics))


def load_config(path, overrides: dict | None = None) -> AssemblyConfig:
    """Flat JSON object of AssemblyConfig fields; ``overrides`` win over the file."""
    values = {}
    if path is not None:
        doc = _read_json(path)
        if not isinstance(doc, dict):
            raise MalformedFileError(f"{path}: config must be a JSON object")
        values.update(doc)
    values.update({k: v for k, v in (overrides or {}).items() if v is not None})
    try:
        return AssemblyConfig.from_mapping(values)
    except TypeError as exc:
        raise InvalidInputError(f"bad config value: {exc}") from None
