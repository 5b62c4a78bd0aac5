"""File-based figure rendering for finite lattices.

All matplotlib use in the package lives here; the Agg backend is forced
so rendering works headless.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .lattice import FiniteLattice

LABEL_NODE_CAP = 40


def draw_lattice(
    L: FiniteLattice,
    path: str,
    labels=None,
    highlight=None,
    title: str | None = None,
) -> None:
    """Render a layered Hasse diagram of L to an image file.

    Nodes sit on horizontal levels by height.  `highlight` is an
    iterable of node indices drawn in a second color.  Node labels are
    drawn only for lattices small enough to stay readable.
    """
    n = len(L.leq)
    heights = L.heights()
    covers = L.covers()
    if labels is None:
        labels = L.labels
    levels: dict[int, list[int]] = {}
    for v in range(n):
        levels.setdefault(heights[v], []).append(v)
    xy = {}
    for h, vs in levels.items():
        for i, v in enumerate(sorted(vs)):
            xy[v] = (i - (len(vs) - 1) / 2.0, h)
    width = max(len(vs) for vs in levels.values())
    depth = max(levels) + 1
    fig, ax = plt.subplots(
        figsize=(max(4.0, 0.9 * width), max(3.0, 1.1 * depth))
    )
    for v in range(n):
        for u in covers[v]:
            ax.plot(
                [xy[v][0], xy[u][0]],
                [xy[v][1], xy[u][1]],
                color="0.55",
                linewidth=0.8,
                zorder=1,
            )
    hi = set(highlight or ())
    plain = [v for v in range(n) if v not in hi]
    size = 60 if n <= LABEL_NODE_CAP else 18
    ax.scatter(
        [xy[v][0] for v in plain],
        [xy[v][1] for v in plain],
        s=size,
        color="#1f77b4",
        zorder=2,
    )
    if hi:
        ax.scatter(
            [xy[v][0] for v in sorted(hi)],
            [xy[v][1] for v in sorted(hi)],
            s=size + 20,
            color="#d62728",
            zorder=3,
        )
    if labels is not None and n <= LABEL_NODE_CAP:
        for v in range(n):
            ax.annotate(
                str(labels[v]),
                xy[v],
                textcoords="offset points",
                xytext=(5, 4),
                fontsize=7,
            )
    if title:
        ax.set_title(title, fontsize=10)
    ax.set_axis_off()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
