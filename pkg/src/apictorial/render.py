"""SVG drawings of assembled puzzles."""

from __future__ import annotations

import colorsys
from pathlib import Path
from xml.sax.saxutils import quoteattr

import numpy as np

from .assembly import AssemblyTree
from .errors import InvalidInputError


def _fill(k: int) -> str:
    # golden-ratio hue steps keep neighbouring indices visually distinct
    h = (k * 0.618033988749895) % 1.0
    r, g, b = colorsys.hls_to_rgb(h, 0.72, 0.55)
    return f"#{int(r * 255):02x}{int(g * 255):02x}{int(b * 255):02x}"


def svg_document(tree: AssemblyTree, pieces, *, ids=None, draw_tree=True, margin=20.0) -> str:
    """SVG text with every piece drawn in its placed pose."""
    pieces = list(pieces)
    if not pieces:
        raise InvalidInputError("nothing to render: the assembly has no pieces")
    if len(tree.placements) != len(pieces):
        raise InvalidInputError(f"{len(tree.placements)} placements for {len(pieces)} pieces")
    placed = [g.apply(p.points) for g, p in zip(tree.placements, pieces)]
    allpts = np.vstack(placed)
    lo = allpts.min(axis=0) - margin
    hi = allpts.max(axis=0) + margin
    w, h = hi - lo
    # flip y so the drawing matches the usual mathematical orientation
    flip = f"matrix(1 0 0 -1 {-lo[0]:.6f} {hi[1]:.6f})"
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w:.3f}" height="{h:.3f}" viewBox="0 0 {w:.6f} {h:.6f}">',
        f'<g transform="{flip}">',
    ]
    for k, pts in enumerate(placed):
        d = "M " + " L ".join(f"{x:.6f} {y:.6f}" for x, y in pts) + " Z"
        label = str(ids[k]) if ids is not None else str(k)
        out.append(
            f'<path id={quoteattr("piece-" + label)} d="{d}" fill="{_fill(k)}" '
            'fill-opacity="0.85" stroke="#222222" stroke-width="1.5"/>'
        )
    if draw_tree:
        centroids = [
            g.apply(p.centroid()[None, :])[0] for g, p in zip(tree.placements, pieces)
        ]
        for i, j in tree.edges:
            (x0, y0), (x1, y1) = centroids[i], centroids[j]
            out.append(
                f'<line class="tree-edge" x1="{x0:.6f}" y1="{y0:.6f}" x2="{x1:.6f}" y2="{y1:.6f}" '
                'stroke="#c0392b" stroke-width="4"/>'
            )
    out += ["</g>", "</svg>"]
    return "\n".join(out) + "\n"


def render_svg(tree: AssemblyTree, pieces, path, *, ids=None, draw_tree=True) -> Path:
    """Write the assembly to ``path``; nothing is written if the assembly is empty."""
    text = svg_document(tree, pieces, ids=ids, draw_tree=draw_tree)
    path = Path(path)
    path.write_text(text)
    return path
