"""Figures written next to the reports.

Everything goes through the Agg backend straight to PNG files; nothing is
shown on screen.  The figures are a view of a Report (or of the NCP_4 link)
and never feed back into it.
"""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .complex import link_graph, shortest_cycle  # noqa: E402

STYLE = {
    "font.size": 9,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "savefig.dpi": 150,
    "figure.autolayout": True,
}

# PNG metadata without the matplotlib version, so files are stable across installs
_META = {"Software": None}


def _save(fig, out_dir: str, name: str) -> str:
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, name)
    fig.savefig(path, metadata=_META)
    plt.close(fig)
    return path


def plot_statistics(report: dict, out_dir: str) -> str:
    """Horizontal bar chart of the integer statistics of one report."""
    stats = report["statistics"]
    keys = list(stats)
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(6, 0.3 * len(keys) + 1.2))
        vals = [stats[k] for k in keys]
        ax.barh(range(len(keys)), vals, color="0.35")
        ax.set_yticks(range(len(keys)))
        ax.set_yticklabels(keys)
        ax.invert_yaxis()
        if vals and max(vals) > 1000:
            ax.set_xscale("symlog")
        ax.set_title(f"{report['lemma_id']}  n={report['n']}  {report['status']}")
        return _save(fig, out_dir, f"{report['lemma_id']}-n{report['n']}-stats.png")


def plot_orbits(report: dict, out_dir: str) -> str:
    """Orbit sizes from a classification table, universal orbits in grey."""
    rows = report["table"]
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(7, 0.28 * len(rows) + 1.2))
        colors = ["0.7" if r["universal"] else "tab:red" for r in rows]
        ax.barh(range(len(rows)), [r["size"] for r in rows], color=colors)
        ax.set_yticks(range(len(rows)))
        ax.set_yticklabels([f"[{r['ranks']}] {r['representative']}" for r in rows], fontsize=7)
        ax.invert_yaxis()
        ax.set_xlabel("orbit size")
        ax.set_title(f"turning candidates, n={report['n']} (red: non-universal)")
        return _save(fig, out_dir, f"classify-n{report['n']}-orbits.png")


def plot_link_graph(X, out_dir: str, name: str = "ncp4-link.png") -> str:
    """Bipartite drawing of a one-dimensional link with a shortest cycle in red."""
    adj = link_graph(X)
    L = X.lattice
    lows = sorted((v for v in adj if L.rank[L.index[v]] == 1), key=str)
    highs = sorted((v for v in adj if L.rank[L.index[v]] != 1), key=str)
    pos = {}
    for col, group in ((0.0, lows), (1.0, highs)):
        for k, v in enumerate(group):
            pos[v] = (col, -k)
    cyc = shortest_cycle(adj) or []
    red = {frozenset((cyc[k], cyc[(k + 1) % len(cyc)])) for k in range(len(cyc))}
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(5, 0.45 * max(len(lows), len(highs)) + 1))
        for u in sorted(adj, key=str):
            for w in sorted(adj[u], key=str):
                if str(u) < str(w):
                    hot = frozenset((u, w)) in red
                    ax.plot(
                        [pos[u][0], pos[w][0]],
                        [pos[u][1], pos[w][1]],
                        color="tab:red" if hot else "0.75",
                        lw=2.0 if hot else 0.8,
                        zorder=2 if hot else 1,
                    )
        for v, (x, y) in pos.items():
            ax.plot(x, y, "o", color="k", ms=4, zorder=3)
            ax.annotate(str(v), (x, y), xytext=(-6 if x == 0 else 6, 0),
                        textcoords="offset points", va="center",
                        ha="right" if x == 0 else "left", fontsize=7)
        ax.set_xlim(-0.9, 1.9)
        ax.axis("off")
        ax.set_title(f"girth {len(cyc)} edges = {angle_label(len(cyc))}")
        return _save(fig, out_dir, name)


def figures_for(report: dict, out_dir: str) -> list[str]:
    """All figures that make sense for one report; returns the written paths."""
    paths = [plot_statistics(report, out_dir)]
    if report.get("table") and "universal" in report["table"][0]:
        paths.append(plot_orbits(report, out_dir))
    if report["lemma_id"] == "girth-ncp4":
        from .verify import ncp_link

        paths.append(plot_link_graph(ncp_link(4), out_dir))
    return paths


def angle_label(edges: int) -> str:
    """``6`` -> ``2pi``, at pi/3 per edge."""
    whole, rest = divmod(edges, 3)
    if rest == 0:
        return f"{whole}pi" if whole != 1 else "pi"
    return f"{edges}pi/3"
