"""End-to-end assembly: resample, compare, check cycles, reweight, spanning tree."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

from .assembly import (
    AssemblyConfig,
    AssemblyTree,
    ComparisonGraph,
    build_comparison_graph,
    minimum_spanning_tree,
)
from .cycles import (
    CycleGraphRecord,
    apply_cycle_reweighting,
    cycle_counts,
    enumerate_cycle_graphs,
    overlap_consistency_check,
    transformation_consistency_check,
)
from .errors import ApictorialError, InvalidInputError, NoAssemblyError
from .geometry import IDENTITY, ClosedPolyline, resample_closed


@dataclass
class AssemblyResult:
    tree: AssemblyTree
    pieces: list[ClosedPolyline]
    graph: ComparisonGraph | None = None
    base_tree: AssemblyTree | None = None
    reweighted: ComparisonGraph | None = None
    cycles: list[CycleGraphRecord] = field(default_factory=list)
    diagnostics: dict = field(default_factory=dict)


def _timed(timings, name):
    class _T:
        def __enter__(self):
            self.t = time.perf_counter()

        def __exit__(self, *exc):
            timings[name] = time.perf_counter() - self.t

    return _T()


def assemble_full(pieces, cfg: AssemblyConfig | None = None, ids=None) -> AssemblyResult:
    """Assemble a puzzle from raw piece boundaries.

    Consistency modes: ``off`` uses the spanning tree of the comparison
    graph; ``transform`` reweights by transformation-consistent cycles;
    ``overlap`` reweights by overlap-consistent cycles, optionally
    prefiltered by transformation consistency.
    """
    cfg = cfg or AssemblyConfig()
    pieces = list(pieces)
    if not pieces:
        raise InvalidInputError("no pieces to assemble")
    ids = list(ids) if ids is not None else [str(k) for k in range(len(pieces))]
    timings: dict[str, float] = {}
    diag: dict = {"config": cfg.to_mapping(), "timings": timings, "ids": ids}

    if len(pieces) == 1:
        tree = AssemblyTree([], [IDENTITY], 0)
        diag["tree_edges"] = []
        return AssemblyResult(tree, pieces, diagnostics=diag)

    stage = "resample"
    try:
        with _timed(timings, "resample"):
            processed = [resample_closed(p.oriented_ccw(), cfg.delta, cfg.iterations) for p in pieces]
        stage = "compare"
        with _timed(timings, "compare"):
            G = build_comparison_graph(processed, cfg, ids)
        diag["edges"] = {
            f"{i}-{j}": {
                "weight": e.weight,
                "length": e.record.length if e.record else 0,
                "d": e.record.d if e.record else None,
                "sigma": [e.record.sigma_a, e.record.sigma_b] if e.record else None,
                "tag": e.tag,
            }
            for (i, j), e in G.edges.items()
        }
        diag["finite_edges"] = len(G.finite_edges())
        base_tree = None
        stage = "spanning-tree"
        try:
            with _timed(timings, "spanning_tree"):
                base_tree = minimum_spanning_tree(G)
        except NoAssemblyError:
            if cfg.consistency == "off":
                raise
        if cfg.consistency == "off":
            diag["tree_edges"] = [list(e) for e in base_tree.edges]
            return AssemblyResult(base_tree, processed, G, base_tree, diagnostics=diag)

        stage = "cycles"
        with _timed(timings, "enumerate_cycles"):
            cycles = enumerate_cycle_graphs(G, cfg.cycle_length, True, cfg.max_cycles)
        diag["cycle_graphs"] = len(cycles)
        candidates = cycles
        if cfg.consistency == "transform" or cfg.prefilter:
            stage = "transformation-consistency"
            with _timed(timings, "transformation_consistency"):
                candidates = [
                    c for c in cycles
                    if transformation_consistency_check(c, G, cfg.theta_star, cfg.tau_star)
                ]
            diag["transformation_consistent"] = len(candidates)
        if cfg.consistency == "overlap":
            stage = "overlap-consistency"
            with _timed(timings, "overlap_consistency"):
                candidates = [c for c in candidates if overlap_consistency_check(c, G, cfg.alpha_star)]
            diag["overlap_consistent"] = len(candidates)
        stage = "reweight"
        Gbar = apply_cycle_reweighting(G, candidates, cfg.beta_star)
        diag["cycle_counts"] = {f"{i}-{j}": c for (i, j), c in sorted(cycle_counts(candidates).items())}
        diag["consistent_cycles"] = [list(c.vertices) for c in candidates]
        stage = "final-spanning-tree"
        with _timed(timings, "final_spanning_tree"):
            tree = minimum_spanning_tree(Gbar)
        diag["base_tree_edges"] = [list(e) for e in base_tree.edges] if base_tree else None
        diag["tree_edges"] = [list(e) for e in tree.edges]
        diag["reweighted"] = {
            f"{i}-{j}": e.weight for (i, j), e in Gbar.edges.items() if math.isfinite(e.weight)
        }
        return AssemblyResult(tree, processed, G, base_tree, Gbar, candidates, diag)
    except NoAssemblyError as exc:
        exc.stage = stage
        raise
    except ApictorialError as exc:
        exc.args = (f"[{stage}] {exc}",)
        raise
