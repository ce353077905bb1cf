"""``topecube`` command line: analyze, generate, mutation-graph, peel, realize, euclidean, mandel, corners.

Plain output is one ``key<TAB>value`` line per result; ``--json`` prints a
versioned report instead.  Exit codes: 0 success, 2 guard refusal, 1 error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path

from . import __version__
from .corners import (
    PeelingError,
    STRATEGIES,
    corner_peeling,
    corners_by_extensions,
    find_corners,
    min_degree_vs_rank,
    simplicial_vertices,
    theta_las_vergnas,
)
from .enumerate import (
    Catalog,
    GuardError,
    PREDICATES,
    default_catalog_root,
    filter_class,
    generate_antipodal,
    generate_partial_cubes,
    parse_predicate,
)
from .faces import classify
from .io import TopesParseError, read_topes, write_topes
from .pcube import CapacityError, ToGraph, is_antipodal, rank, word_to_str

REPORT_SCHEMA = "topecube.report/1"
ANTIPODAL_FAMILY = {"antipodal", "OM", "UOM"}

log = logging.getLogger("topecube")


class CLIError(Exception):
    pass


def _words(ws, n) -> list[str]:
    return [word_to_str(w, n) for w in sorted(ws)]


def _figures_dir(args) -> Path | None:
    if getattr(args, "figures", None):
        d = Path(args.figures)
        d.mkdir(parents=True, exist_ok=True)
        return d
    return None


# ------------------------------------------------------------ commands

def _euclid_block(g: ToGraph, labels, limit: int) -> dict:
    from .euclid import PurityError, is_euclidean_aom, is_euclidean_om, is_mandel

    out: dict = {}
    try:
        if "OM" in labels:
            out["euclidean"] = is_euclidean_om(g)
            out["mandel"] = is_mandel(g, limit=limit).verdict
        elif "AOM" in labels:
            out["euclidean"] = is_euclidean_aom(g)
    except PurityError as exc:
        out["euclidean"] = f"not applicable: {exc}"
    return out


def cmd_analyze(args) -> dict:
    g = read_topes(args.path)
    labels = classify(g)
    res: dict = {
        "n": g.n,
        "topes": len(g),
        "labels": sorted(labels),
        "rank": rank(g),
        "min_degree": g.min_degree() if len(g) else 0,
    }
    if "COM" in labels:
        res["simplicial_vertices"] = len(simplicial_vertices(g))
        search = find_corners(g, budget=args.budget)
        res["corners"] = len(search.corners)
        res["corner_search_complete"] = search.complete
    if is_antipodal(g) and len(g) > 1:
        rep = min_degree_vs_rank(g)
        res["degree_le_rank"] = rep.holds
        res["theta_las_vergnas"] = theta_las_vergnas(g)
    if not args.no_euclid and "COM" in labels:
        res.update(_euclid_block(g, labels, args.mandel_limit))
    figs = _figures_dir(args)
    if figs is not None:
        from .plotting import plot_tope_graph

        res["figures"] = [str(plot_tope_graph(g, figs / f"{Path(args.path).stem}.png"))]
    return res


def _base_stream(n: int, predicate: str, threads: int, catalog, resume: bool):
    parts = {p.strip() for p in predicate.split(",")}
    if parts & ANTIPODAL_FAMILY:
        return generate_antipodal(n, threads=threads, catalog=catalog, resume=resume)
    return generate_partial_cubes(n, threads=threads)


def cmd_generate(args) -> dict:
    parse_predicate(args.predicate)  # reject unknown names before any work
    root = Path(args.catalog) if args.catalog else default_catalog_root()
    stream = _base_stream(args.n, args.predicate, args.threads, root, args.resume)
    kept = filter_class(stream, args.predicate)
    tag = args.predicate.replace(",", "+").replace("=", "")
    cat = Catalog(root)
    if tag != "antipodal":
        cat.store(args.n, tag, kept)
    res = {"n": args.n, "predicate": args.predicate, "count": len(kept),
           "catalog": str(cat.directory(args.n, tag)), "manifest": str(cat.manifest_path)}
    figs = _figures_dir(args)
    if figs is not None and kept:
        from .plotting import plot_degree_vs_rank

        pairs = [(rank(g), g.min_degree()) for g in kept]
        res["figures"] = [str(plot_degree_vs_rank(pairs, figs / f"degree_rank_n{args.n}.png"))]
    return res


def cmd_mutation_graph(args) -> dict:
    from .mutation import build_mutation_graph, is_connected

    root = Path(args.catalog) if args.catalog else None
    mg = build_mutation_graph(args.n, args.r, level=args.level, threads=args.threads,
                              catalog=root, resume=args.resume)
    ok, comps = is_connected(mg)
    res = {"n": args.n, "r": args.r, "level": args.level, "nodes": len(mg.nodes),
           "edges": len(mg.edges), "connected": ok, "components": len(comps)}
    if args.dot:
        Path(args.dot).write_text(mg.to_dot())
        res["dot"] = args.dot
    if args.json:
        res["edge_list"] = [list(e) for e in mg.edge_list()]
    figs = _figures_dir(args)
    if figs is not None:
        from .plotting import plot_mutation_graph

        res["figures"] = [str(plot_mutation_graph(mg, figs / f"mutation_{args.level}_{args.n}_{args.r}.png"))]
    return res


def _peeling_result(seq, n: int) -> dict:
    return {"steps": len(seq), "sizes": [len(s) for s in seq.steps],
            "sequence": [_words(s.vertices, n) for s in seq.steps], "verified": seq.replay()}


def cmd_peel(args) -> dict:
    g = read_topes(args.path)
    try:
        seq = corner_peeling(g, strategy=args.strategy, budget=args.budget)
    except PeelingError as exc:
        raise CLIError(f"{exc}: stuck with {len(exc.residual)} vertices after {len(exc.steps)} steps") from None
    res = {"strategy": args.strategy, **_peeling_result(seq, g.n)}
    figs = _figures_dir(args)
    if figs is not None:
        from .plotting import plot_tope_graph

        res["figures"] = [str(plot_tope_graph(g, figs / f"{Path(args.path).stem}_peeling.png", peeling=seq))]
    return res


def cmd_realize(args) -> dict:
    from .realizable import classify_realizable, load_arrangement, realizable_corner_peeling, tope_graph_of

    arr = load_arrangement(args.path)
    g = tope_graph_of(arr, threads=args.threads)
    res = {"dim": arr.dim, "hyperplanes": arr.n, "topes": len(g),
           "labels": sorted(classify_realizable(arr)), "graph_labels": sorted(classify(g))}
    if args.out:
        write_topes(args.out, g, comment=f"tope graph of {Path(args.path).name}")
        res["out"] = args.out
    seq = None
    if args.peel:
        seq = realizable_corner_peeling(arr)
        res.update({"peeling_" + k: v for k, v in _peeling_result(seq, g.n).items()})
    figs = _figures_dir(args)
    if figs is not None:
        from .plotting import plot_arrangement, plot_tope_graph

        stem = Path(args.path).stem
        paths = [plot_tope_graph(g, figs / f"{stem}_topes.png", peeling=seq)]
        if arr.dim == 2:
            paths.append(plot_arrangement(arr, figs / f"{stem}_arrangement.png"))
        res["figures"] = [str(p) for p in paths]
    return res


def cmd_euclidean(args) -> dict:
    from .euclid import (
        cocircuit_graph,
        cocircuit_graph_json,
        euclidean_witness,
        is_euclidean_om,
        orient,
    )
    from .pcube import simplify

    g = simplify(read_topes(args.path))[0]
    labels = classify(g)
    res: dict = {"labels": sorted(labels)}
    if "OM" in labels:
        res["kind"] = "OM"
        res["euclidean"] = is_euclidean_om(g)
    elif "AOM" in labels or "COM" in labels:
        res["kind"] = "AOM" if "AOM" in labels else "COM"
        wit = euclidean_witness(g)
        res["euclidean"] = wit is None
        if wit is not None:
            res["witness_element"] = wit[0]
            res["witness_cycle"] = list(wit[1])
    else:
        raise CLIError("input is not a COM")
    cg = cocircuit_graph(g)
    res["cocircuit_nodes"] = len(cg.nodes)
    res["cocircuit_edges"] = len(cg.edges)
    if args.emit_cocircuit_graph:
        Path(args.emit_cocircuit_graph).write_text(json.dumps(cocircuit_graph_json(cg), indent=2))
        res["cocircuit_graph"] = args.emit_cocircuit_graph
    figs = _figures_dir(args)
    if figs is not None and not cg.antipodal:
        from .plotting import plot_orientation

        stem = Path(args.path).stem
        res["figures"] = [str(plot_orientation(cg, orient(cg, e), figs / f"{stem}_orient_e{e}.png"))
                          for e in range(g.n)]
    return res


def cmd_mandel(args) -> dict:
    from .euclid import is_mandel

    g = read_topes(args.path)
    result = is_mandel(g, limit=args.limit)
    res = {"verdict": result.verdict}
    if result.extension is not None:
        res["chunk"] = _words(result.extension.h1, g.n)
    return res


def cmd_corners(args) -> dict:
    g = read_topes(args.path)
    if args.extensions:
        corners = corners_by_extensions(g)
        complete = True
    else:
        search = find_corners(g, budget=args.budget)
        corners, complete = search.corners, search.complete
    return {"count": len(corners), "complete": complete,
            "corners": [_words(c.vertices, g.n) for c in corners]}


COMMANDS = {
    "analyze": cmd_analyze,
    "generate": cmd_generate,
    "mutation-graph": cmd_mutation_graph,
    "peel": cmd_peel,
    "realize": cmd_realize,
    "euclidean": cmd_euclidean,
    "mandel": cmd_mandel,
    "corners": cmd_corners,
}


# ------------------------------------------------------------ parser and output

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print a JSON report")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--seed", type=int, default=0, help="recorded in the report; all commands are deterministic")
    common.add_argument("--figures", metavar="DIR", help="write figures (PNG) into DIR")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="topecube", description="Tope graphs of oriented matroids and COMs.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", parents=[common], help="classify a .topes file and run the checks")
    a.add_argument("path")
    a.add_argument("--budget", type=int, default=8)
    a.add_argument("--mandel-limit", type=int, default=1 << 16)
    a.add_argument("--no-euclid", action="store_true", help="skip Euclidean and Mandel checks")

    a = sub.add_parser("generate", parents=[common], help="isomorph-free generation into the catalog")
    a.add_argument("n", type=int)
    a.add_argument("--predicate", default="antipodal",
                   help=f"conjunction of {', '.join(PREDICATES)} and rank=<r>")
    a.add_argument("--resume", action="store_true")
    a.add_argument("--catalog", help="catalog root (default: $TOPECUBE_CATALOG or ./catalog)")

    a = sub.add_parser("mutation-graph", parents=[common], help="mutation graph of uniform OMs")
    a.add_argument("n", type=int)
    a.add_argument("r", type=int)
    a.add_argument("--level", default="isomorphism", choices=("labeled", "reorientation", "isomorphism"))
    a.add_argument("--dot", help="write the graph in DOT format")
    a.add_argument("--resume", action="store_true")
    a.add_argument("--catalog")

    a = sub.add_parser("peel", parents=[common], help="corner peeling")
    a.add_argument("path")
    a.add_argument("--strategy", default="generic", choices=STRATEGIES)
    a.add_argument("--budget", type=int, default=8)

    a = sub.add_parser("realize", parents=[common], help="tope graph of a JSON arrangement")
    a.add_argument("path")
    a.add_argument("--out", help="write the tope graph as .topes")
    a.add_argument("--peel", action="store_true", help="sweep peeling (simple arrangement, bounded region)")

    a = sub.add_parser("euclidean", parents=[common], help="Euclidean check on the cocircuit graph")
    a.add_argument("path")
    a.add_argument("--emit-cocircuit-graph", metavar="FILE")

    a = sub.add_parser("mandel", parents=[common], help="search for a Mandel extension")
    a.add_argument("path")
    a.add_argument("--limit", type=int, default=1 << 20)

    a = sub.add_parser("corners", parents=[common], help="list corners")
    a.add_argument("path")
    a.add_argument("--budget", type=int, default=8)
    a.add_argument("--extensions", action="store_true", help="exhaustive search through extensions")
    return p


def _inputs(args) -> dict:
    skip = {"json", "verbose", "figures"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _emit_text(res: dict, out) -> None:
    for k, v in res.items():
        if isinstance(v, (list, dict)):
            v = json.dumps(v, separators=(",", ":"))
        elif isinstance(v, bool):
            v = str(v).lower()
        out.write(f"{k}\t{v}\n")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    t0 = time.perf_counter()
    try:
        res = COMMANDS[args.command](args)
    except GuardError as exc:
        print(f"topecube: refused: {exc}", file=sys.stderr)
        return 2
    except (CLIError, TopesParseError, CapacityError, ValueError, KeyError, OSError, RuntimeError) as exc:
        print(f"topecube: error: {exc}", file=sys.stderr)
        return 1
    if args.json:
        report = {"schema": REPORT_SCHEMA, "version": __version__, "command": args.command,
                  "inputs": _inputs(args), "results": res,
                  "timing": {"seconds": round(time.perf_counter() - t0, 3)}}
        json.dump(report, sys.stdout, indent=2)
        sys.stdout.write("\n")
    else:
        _emit_text(res, sys.stdout)
    return 0


if __name__ == "__main__":
    sys.exit(main())
