"""Figures for reports: tope graphs, peelings, mutation graphs, cocircuit orientations, planar arrangements."""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import networkx as nx  # noqa: E402

from .pcube import ToGraph, word_to_str  # noqa: E402

FIG_SIZE = (5.0, 5.0)
DPI = 120


def _layout(gr: nx.Graph):
    # kamada-kawai respects graph distance, which is the point for partial cubes
    if gr.number_of_nodes() <= 2:
        return nx.circular_layout(gr)
    return nx.kamada_kawai_layout(gr, pos=nx.circular_layout(gr))


def _save(fig, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=DPI, bbox_inches="tight")
    plt.close(fig)
    return path


def zonotope_layout(g: ToGraph) -> dict:
    """Project Q_n to the plane, coordinate e going to a vector at angle pi e / n.

    Lengths grow slightly with e so that distinct words rarely collide; for
    tope graphs of rank-3 OMs this is the usual zonotope picture.
    """
    import math

    vecs = [((1 + 0.15 * e) * math.cos(math.pi * e / max(g.n, 1)),
             (1 + 0.15 * e) * math.sin(math.pi * e / max(g.n, 1))) for e in range(g.n)]
    pos = {}
    for w in g.words:
        x = y = 0.0
        for e, (vx, vy) in enumerate(vecs):
            s = 1 if w >> e & 1 else -1
            x += s * vx
            y += s * vy
        pos[w] = (x, y)
    return pos


def tope_graph_nx(g: ToGraph) -> nx.Graph:
    gr = nx.Graph()
    gr.add_nodes_from(g.words)
    gr.add_edges_from(g.edges())
    return gr


def plot_tope_graph(g: ToGraph, path, peeling=None, title: str | None = None, labels: bool | None = None) -> Path:
    """Draw g; with a peeling, vertices are coloured by the step that removes them."""
    gr = tope_graph_nx(g)
    pos = zonotope_layout(g)
    if len(set(pos.values())) < len(pos):
        pos = _layout(gr)
    fig, ax = plt.subplots(figsize=FIG_SIZE)
    if peeling is not None and len(peeling):
        step_of = {}
        for i, step in enumerate(peeling.steps):
            for v in step.vertices:
                step_of[v] = i
        colors = [step_of.get(v, -1) for v in gr.nodes]
        nodes = nx.draw_networkx_nodes(gr, pos, ax=ax, node_color=colors, cmap="viridis", node_size=120)
        cb = fig.colorbar(nodes, ax=ax, shrink=0.7)
        cb.set_label("peeling step")
    else:
        nx.draw_networkx_nodes(gr, pos, ax=ax, node_color="tab:blue", node_size=120)
    nx.draw_networkx_edges(gr, pos, ax=ax, alpha=0.6)
    if labels is None:
        labels = len(g) <= 32
    if labels:
        ys = [y for _, y in pos.values()]
        lift = 0.04 * ((max(ys) - min(ys)) or 1.0)
        shifted = {v: (x, y + lift) for v, (x, y) in pos.items()}
        nx.draw_networkx_labels(gr, shifted, {v: word_to_str(v, g.n) for v in gr.nodes}, ax=ax, font_size=7,
                                font_family="monospace")
    ax.set_axis_off()
    ax.set_title(title or f"{len(g)} topes, n = {g.n}")
    return _save(fig, path)


def plot_mutation_graph(mg, path) -> Path:
    gr = mg.to_networkx()
    gr.remove_edges_from(nx.selfloop_edges(gr))
    pos = _layout(gr)
    fig, ax = plt.subplots(figsize=FIG_SIZE)
    nx.draw_networkx(gr, pos, ax=ax, with_labels=False, node_size=80, node_color="tab:orange")
    ax.set_axis_off()
    ax.set_title(f"mutation graph n={mg.n} r={mg.r} ({mg.level}), {gr.number_of_nodes()} nodes")
    return _save(fig, path)


def plot_orientation(cg, mo, path) -> Path:
    """Cocircuit graph with the orientation for one element; undirected edges dashed."""
    gr = nx.Graph()
    gr.add_nodes_from(range(len(cg.nodes)))
    gr.add_edges_from(cg.edges)
    pos = _layout(gr)
    fig, ax = plt.subplots(figsize=FIG_SIZE)
    nx.draw_networkx_nodes(gr, pos, ax=ax, node_size=60, node_color="tab:gray")
    dg = nx.DiGraph()
    dg.add_nodes_from(gr.nodes)
    dg.add_edges_from(mo.arcs())
    nx.draw_networkx_edges(dg, pos, ax=ax, arrows=True, arrowsize=10, edge_color="tab:red")
    nx.draw_networkx_edges(gr, pos, edgelist=mo.undirected(), ax=ax, style="dashed", alpha=0.5)
    ax.set_axis_off()
    ax.set_title(f"orientation of element {mo.element}")
    return _save(fig, path)


def plot_degree_vs_rank(pairs, path) -> Path:
    """Scatter of (rank, minimum degree) with the diagonal."""
    pairs = list(pairs)
    fig, ax = plt.subplots(figsize=FIG_SIZE)
    if pairs:
        rs = [r for r, _ in pairs]
        ds = [d for _, d in pairs]
        ax.scatter(rs, ds, alpha=0.5)
        top = max(rs + ds) + 1
        ax.plot([0, top], [0, top], "k--", lw=0.8)
    ax.set_xlabel("rank")
    ax.set_ylabel("minimum degree")
    return _save(fig, path)


def plot_arrangement(arr, path, box: float = 5.0) -> Path:
    """Planar arrangements only: lines, positive sides marked, region walls dotted."""
    if arr.dim != 2:
        raise ValueError("only planar arrangements can be drawn")
    import numpy as np

    fig, ax = plt.subplots(figsize=FIG_SIZE)
    t = np.linspace(-box, box, 2)

    def draw(h, **kw):
        a, b = float(h.normal[0]), float(h.normal[1])
        c = float(h.offset)
        if abs(b) > abs(a):
            ax.plot(t, (c - a * t) / b, **kw)
        else:
            ax.plot((c - b * t) / a, t, **kw)

    for e, h in enumerate(arr.hyperplanes):
        draw(h, color=f"C{e % 10}", label=f"e{e}")
        a, b = float(h.normal[0]), float(h.normal[1])
        c = float(h.offset)
        base = np.array([a, b]) * c / (a * a + b * b)
        tip = base + 0.6 * np.array([a, b]) / np.hypot(a, b)
        ax.annotate("", xy=tip, xytext=base, arrowprops={"arrowstyle": "->", "color": f"C{e % 10}"})
    for h in arr.region:
        draw(h, color="k", ls=":")
    ax.set_xlim(-box, box)
    ax.set_ylim(-box, box)
    ax.set_aspect("equal")
    ax.legend(loc="upper right", fontsize=7)
    return _save(fig, path)
