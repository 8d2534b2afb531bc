"""Command line interface: ``apictorial <subcommand> ...``.

Failures print one JSON object ``{"error": category, "message": ...}`` on
stderr and exit with a nonzero code that depends on the category.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from .assembly import compare_pair
from .errors import ApictorialError, InvalidInputError
from .formats import (
    load_assembly,
    load_config,
    read_piece_file,
    save_assembly,
    save_diagnostics,
    save_ground_truth,
    save_pieces,
)
from .geometry import resample_closed
from .invariant import compute_signature
from .pipeline import assemble_full
from .puzzlegen import generate_rectangular_puzzle, scatter_pieces
from .render import render_svg

EXIT_CODES = {
    "error": 1,
    "parse": 3,
    "invalid-input": 4,
    "invalid-polygon": 5,
    "resolution": 6,
    "radius-too-large": 7,
    "underdetermined": 8,
    "degenerate-configuration": 9,
    "no-assembly": 10,
    "cycle-limit": 11,
    "io": 12,
}


def _emit(doc, out=None):
    text = json.dumps(doc, indent=1)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _config(args):
    overrides = {
        "delta": getattr(args, "delta", None),
        "r": getattr(args, "radius", None),
        "epsilon": getattr(args, "epsilon", None),
        "consistency": getattr(args, "consistency", None),
        "cycle_length": getattr(args, "cycle_length", None),
        "quality_exponent": getattr(args, "quality_exponent", None),
    }
    return load_config(getattr(args, "config", None), overrides)


def _select(ids, pieces, wanted):
    index = {pid: k for k, pid in enumerate(ids)}
    try:
        return [index[w] for w in wanted]
    except KeyError as exc:
        raise InvalidInputError(f"no piece with id {exc.args[0]!r}") from None


def cmd_generate(args):
    puzzle = generate_rectangular_puzzle(
        args.rows, args.cols, args.piece_size, seed=args.seed, decoys=args.decoys,
        straight_decoys=args.straight_decoys,
    )
    puzzle = scatter_pieces(puzzle, args.noise, seed=args.seed + 1)
    save_pieces(args.out, puzzle.pieces, puzzle.ids)
    if args.truth:
        save_ground_truth(args.truth, puzzle)


def cmd_resample(args):
    ids, pieces = read_piece_file(args.pieces)
    out = []
    for pid, p in zip(ids, pieces):
        try:
            out.append(resample_closed(p, args.delta, args.iterations))
        except ApictorialError as exc:
            raise type(exc)(f"piece {pid!r}: {exc}") from None
    save_pieces(args.out, out, ids)


def cmd_signature(args):
    ids, pieces = read_piece_file(args.pieces)
    chosen = _select(ids, pieces, args.id) if args.id else range(len(pieces))
    doc = {}
    for k in chosen:
        try:
            sig = compute_signature(pieces[k], args.radius)
        except ApictorialError as exc:
            raise type(exc)(f"piece {ids[k]!r}: {exc}") from None
        doc[ids[k]] = sig.values.tolist()
    _emit({"radius": args.radius, "signatures": doc}, args.out)


def cmd_compare(args):
    cfg = _config(args)
    ids, pieces = read_piece_file(args.pieces)
    a, b = _select(ids, pieces, [args.a, args.b])
    P = resample_closed(pieces[a], cfg.delta, cfg.iterations)
    Q = resample_closed(pieces[b], cfg.delta, cfg.iterations)
    edge = compare_pair(P, Q, cfg)
    rec = edge.record
    doc = {"a": ids[a], "b": ids[b], "weight": edge.weight if math.isfinite(edge.weight) else None}
    if rec is None:
        doc["status"] = edge.tag
    else:
        doc.update(
            i=rec.fit.i,
            j=rec.fit.j,
            length=rec.length,
            d=rec.d,
            sigma=[rec.sigma_a, rec.sigma_b],
            motion={"theta": rec.g.theta, "tx": rec.g.tx, "ty": rec.g.ty},
        )
    _emit(doc)


def cmd_assemble(args):
    cfg = _config(args)
    ids, pieces = read_piece_file(args.pieces)
    result = assemble_full(pieces, cfg, ids)
    save_assembly(args.out, result.tree, ids)
    if args.diagnostics:
        save_diagnostics(args.diagnostics, result.diagnostics)


def cmd_render(args):
    ids, pieces = read_piece_file(args.pieces)
    tree, tree_ids = load_assembly(args.assembly)
    if tree_ids != ids:
        raise InvalidInputError("assembly and piece file list different pieces")
    render_svg(tree, pieces, args.out, ids=ids, draw_tree=not args.no_tree)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="apictorial", description="Apictorial jigsaw puzzle assembly.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a synthetic rectangular puzzle")
    p.add_argument("--rows", type=int, default=3)
    p.add_argument("--cols", type=int, default=3)
    p.add_argument("--piece-size", type=float, default=2000.0)
    p.add_argument("--noise", type=float, default=0.0, help="radial boundary noise amplitude (px)")
    p.add_argument("--decoys", type=int, default=0, help="interior tabs copied onto distant edges")
    p.add_argument("--straight-decoys", action="store_true", help="make all outer edges congruent")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="piece JSON")
    p.add_argument("--truth", help="ground-truth JSON")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("resample", help="resample every piece at a fixed spacing")
    p.add_argument("pieces")
    p.add_argument("--delta", type=float, default=15.0)
    p.add_argument("--iterations", type=int, default=5)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_resample)

    p = sub.add_parser("signature", help="integral area invariant of each piece")
    p.add_argument("pieces")
    p.add_argument("--radius", type=float, default=50.0)
    p.add_argument("--id", action="append", help="restrict to this piece (repeatable)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_signature)

    def tuning(p):
        p.add_argument("--config", help="JSON object of assembly parameters")
        p.add_argument("--delta", type=float)
        p.add_argument("--radius", type=float)
        p.add_argument("--epsilon", type=float)

    p = sub.add_parser("compare", help="fit and score one pair of pieces")
    p.add_argument("pieces")
    p.add_argument("a", help="piece id")
    p.add_argument("b", help="piece id")
    tuning(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("assemble", help="assemble all pieces")
    p.add_argument("pieces")
    tuning(p)
    p.add_argument("--consistency", choices=["off", "transform", "overlap"])
    p.add_argument("--cycle-length", type=int)
    p.add_argument("--quality-exponent", type=float)
    p.add_argument("--out", required=True, help="assembly JSON")
    p.add_argument("--diagnostics", help="diagnostics JSON")
    p.set_defaults(func=cmd_assemble)

    p = sub.add_parser("render", help="draw an assembly as SVG")
    p.add_argument("pieces")
    p.add_argument("assembly")
    p.add_argument("--out", required=True)
    p.add_argument("--no-tree", action="store_true", help="omit spanning-tree edges")
    p.set_defaults(func=cmd_render)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except ApictorialError as exc:
        category = exc.category
        print(json.dumps({"error": category, "message": str(exc)}), file=sys.stderr)
        return EXIT_CODES.get(category, 1)
    except OSError as exc:
        print(json.dumps({"error": "io", "message": str(exc)}), file=sys.stderr)
        return EXIT_CODES["io"]
    return 0


if __name__ == "__main__":
    sys.exit(main())
