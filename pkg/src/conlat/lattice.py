"""Abstract finite lattices: intervals, products, Eq(n), isomorphism, DOT export.

A FiniteLattice is a boolean order matrix plus optional element labels.
Nothing here knows about algebras; congruence lattices are converted to
this form for structural work.
"""

from __future__ import annotations

import os
import sys
from dataclasses import dataclass

import numpy as np

from .partition import DEFAULT_ENUM_BOUND, bell, enumerate_eq

DEFAULT_LATTICE_BUDGET = 10**6


def lattice_budget() -> int:
    return int(os.environ.get("CONLAT_MAX_LATTICE", DEFAULT_LATTICE_BUDGET))


def leq_matrix_of(partitions) -> np.ndarray:
    """Pairwise refinement order of a list of partitions of one set."""
    m = len(partitions)
    out = np.zeros((m, m), dtype=bool)
    if m == 0:
        return out
    kernels = np.array([p.kernel for p in partitions], dtype=np.int64)
    if kernels.size == 0:
        return np.ones((m, m), dtype=bool)
    for j in range(m):
        kj = kernels[j]
        # i <= j iff kj is constant on every block of partition i
        out[:, j] = (np.take(kj, kernels) == kj[None, :]).all(axis=1)
    return out


class FiniteLattice:
    """size x size boolean order matrix; validated to be a lattice on construction."""

    __slots__ = ("leq", "labels", "_covers", "_heights")

    def __init__(self, leq, labels=None, check: bool = True):
        leq = np.asarray(leq, dtype=bool)
        if leq.ndim != 2 or leq.shape[0] != leq.shape[1]:
            raise ValueError("leq must be a square matrix")
        if leq.shape[0] == 0:
            raise ValueError("a lattice must have at least one element")
        if labels is not None:
            labels = [str(x) for x in labels]
            if len(labels) != leq.shape[0]:
                raise ValueError("labels length must match size")
        object.__setattr__(self, "leq", leq)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "_covers", None)
        object.__setattr__(self, "_heights", None)
        if check:
            self._validate()

    def __setattr__(self, name, value):
        raise AttributeError("FiniteLattice is immutable")

    @property
    def size(self) -> int:
        return self.leq.shape[0]

    def _validate(self):
        L = self.leq
        n = self.size
        if not L.diagonal().all():
            raise ValueError("order not reflexive")
        if (L & L.T & ~np.eye(n, dtype=bool)).any():
            raise ValueError("order not antisymmetric")
        closed = (L.astype(np.uint8) @ L.astype(np.uint8)).astype(bool)
        if (closed & ~L).any():
            raise ValueError("order not transitive")
        # pairwise meets and joins must exist: the candidate down-set
        # (resp. up-set) of each pair must be the down-set of some element
        down = {L[:, j].tobytes(): j for j in range(n)}
        up = {L[i, :].tobytes(): i for i in range(n)}
        for a in range(n):
            for b in range(a + 1, n):
                if (L[:, a] & L[:, b]).tobytes() not in down:
                    raise ValueError(f"no meet for pair ({a},{b})")
                if (L[a, :] & L[b, :]).tobytes() not in up:
                    raise ValueError(f"no join for pair ({a},{b})")

    # ---------------- structure ----------------

    def bottom(self) -> int:
        idx = np.nonzero(self.leq.all(axis=1))[0]
        if len(idx) != 1:
            raise ValueError("no unique bottom")
        return int(idx[0])

    def top(self) -> int:
        idx = np.nonzero(self.leq.all(axis=0))[0]
        if len(idx) != 1:
            raise ValueError("no unique top")
        return int(idx[0])

    def covers(self) -> list[list[int]]:
        """Upward covering relation as an adjacency list (transitive reduction)."""
        if self._covers is None:
            lt = self.leq & ~np.eye(self.size, dtype=bool)
            red = lt & ~(lt.astype(np.uint8) @ lt.astype(np.uint8)).astype(bool)
            object.__setattr__(
                self, "_covers", [sorted(np.nonzero(r)[0].tolist()) for r in red]
            )
        return self._covers

    def heights(self) -> list[int]:
        """Length of the longest chain from the bottom up to each element."""
        if self._heights is None:
            cov = self.covers()
            h = [0] * self.size
            for v in sorted(range(self.size), key=lambda v: int(self.leq[:, v].sum())):
                for u in cov[v]:
                    h[u] = max(h[u], h[v] + 1)
            object.__setattr__(self, "_heights", h)
        return self._heights

    def meet(self, a: int, b: int) -> int:
        col = self.leq[:, a] & self.leq[:, b]
        for x in np.nonzero(col)[0]:
            if np.array_equal(self.leq[:, x], col):
                return int(x)
        raise ValueError(f"no meet for ({a},{b})")

    def join(self, a: int, b: int) -> int:
        row = self.leq[a, :] & self.leq[b, :]
        for x in np.nonzero(row)[0]:
            if np.array_equal(self.leq[x, :], row):
                return int(x)
        raise ValueError(f"no join for ({a},{b})")

    def __repr__(self):
        return f"FiniteLattice(size={self.size})"


# ---------------- shapes ----------------


@dataclass(frozen=True)
class IntervalShape:
    """A product of partition lattices: prod over factors of Eq(k)^e."""

    factors: tuple

    def __init__(self, factors):
        object.__setattr__(
            self, "factors", tuple((int(k), int(e)) for k, e in factors)
        )
        for k, e in self.factors:
            if k < 0 or e < 0:
                raise ValueError("factor entries must be nonnegative")

    def normalized(self) -> "IntervalShape":
        """Merge equal block sizes, drop factors contributing nothing,
        sort by descending block size."""
        merged: dict[int, int] = {}
        for k, e in self.factors:
            if k >= 2 and e >= 1:
                merged[k] = merged.get(k, 0) + e
        return IntervalShape(sorted(merged.items(), reverse=True))

    def size(self) -> int:
        out = 1
        for k, e in self.factors:
            out *= bell(k) ** e
        return out

    def is_trivial(self) -> bool:
        return self.size() == 1

    def label(self) -> str:
        norm = self.normalized()
        if not norm.factors:
            return "1"
        parts = []
        for k, e in norm.factors:
            base = "2" if k == 2 else f"Eq({k})"
            parts.append(base if e == 1 else f"{base}^{e}")
        return " x ".join(parts)

    def __str__(self):
        return self.label()


def interval(L: FiniteLattice, a: int, b: int) -> FiniteLattice:
    """Induced sublattice on {x : a <= x <= b}."""
    if not L.leq[a, b]:
        raise ValueError(f"{a} is not below {b}")
    mask = L.leq[a, :] & L.leq[:, b]
    idx = np.nonzero(mask)[0]
    sub = L.leq[np.ix_(idx, idx)]
    labels = [L.labels[i] for i in idx] if L.labels is not None else None
    return FiniteLattice(sub, labels=labels, check=False)


def product(Ls, budget: int | None = None) -> FiniteLattice:
    """Direct product with componentwise order; empty product is the 1-lattice."""
    if budget is None:
        budget = lattice_budget()
    total = 1
    for L in Ls:
        total *= L.size
    if total > budget:
        raise ValueError(f"product size {total} exceeds budget {budget}")
    out = np.ones((1, 1), dtype=bool)
    for L in Ls:
        out = np.kron(out, L.leq)
    return FiniteLattice(out, check=False)


def eq_lattice(k: int, bound: int = DEFAULT_ENUM_BOUND) -> FiniteLattice:
    """Eq(k), the lattice of all partitions of {0..k-1} under refinement."""
    parts = enumerate_eq(k, bound=bound)
    return FiniteLattice(
        leq_matrix_of(parts), labels=[p.bar() for p in parts], check=False
    )


def shape_lattice(
    s: IntervalShape, bound: int = DEFAULT_ENUM_BOUND, budget: int | None = None
) -> FiniteLattice:
    """Materialize prod Eq(k)^e; factors with k <= 1 contribute nothing."""
    if budget is None:
        budget = lattice_budget()
    if s.size() > budget:
        raise ValueError(f"shape size {s.size()} exceeds budget {budget}")
    factors = []
    for k, e in s.normalized().factors:
        eqk = eq_lattice(k, bound=bound)
        factors.extend([eqk] * e)
    return product(factors, budget=budget)


# ---------------- isomorphism ----------------


def _refined_colors(lats):
    """Joint iterative color refinement over the covering digraphs."""
    ups = [L.covers() for L in lats]
    downs = []
    for L, up in zip(lats, ups):
        down = [[] for _ in range(L.size)]
        for v, us in enumerate(up):
            for u in us:
                down[u].append(v)
        downs.append(down)
    colors = []
    for L, up, down in zip(lats, ups, downs):
        h = L.heights()
        depth_src = FiniteLattice(L.leq.T, check=False)
        d = depth_src.heights()
        colors.append(
            [(h[v], d[v], len(up[v]), len(down[v])) for v in range(L.size)]
        )
    # canonical relabel, then refine until the class count stops growing
    while True:
        key2id = {}
        for cs in colors:
            for c in cs:
                if c not in key2id:
                    key2id[c] = None
        for i, c in enumerate(sorted(key2id)):
            key2id[c] = i
        colors = [[key2id[c] for c in cs] for cs in colors]
        before = len(key2id)
        new_colors = []
        for cs, up, down in zip(colors, ups, downs):
            new_colors.append(
                [
                    (
                        cs[v],
                        tuple(sorted(cs[u] for u in up[v])),
                        tuple(sorted(cs[d] for d in down[v])),
                    )
                    for v in range(len(cs))
                ]
            )
        distinct = len({c for cs in new_colors for c in cs})
        if distinct == before:
            return colors, ups, downs
        colors = new_colors


def isomorphic(L1: FiniteLattice, L2: FiniteLattice) -> bool:
    """Order isomorphism via refinement screening plus backtracking.

    Elements are assigned bottom-up; a candidate image must reproduce the
    already-mapped lower covers exactly, which forces most assignments.
    """
    if L1.size != L2.size:
        return False
    colors, ups, downs = _refined_colors([L1, L2])
    c1, c2 = colors
    down1, down2 = downs
    if sorted(c1) != sorted(c2):
        return False
    n = L1.size
    h1 = L1.heights()
    freq = {}
    for c in c1:
        freq[c] = freq.get(c, 0) + 1
    order = sorted(range(n), key=lambda v: (h1[v], freq[c1[v]], v))
    by_downset = {}
    for w in range(n):
        by_downset.setdefault(frozenset(down2[w]), []).append(w)
    mapping = [-1] * n
    used = [False] * n

    sys.setrecursionlimit(max(sys.getrecursionlimit(), 4 * n + 100))

    def assign(i):
        if i == n:
            return True
        v = order[i]
        D = frozenset(mapping[d] for d in down1[v])
        for w in by_downset.get(D, ()):
            if not used[w] and c2[w] == c1[v]:
                mapping[v] = w
                used[w] = True
                if assign(i + 1):
                    return True
                used[w] = False
                mapping[v] = -1
        return False

    return assign(0)


# ---------------- export ----------------


def to_dot(L: FiniteLattice, name: str = "lattice", labels=None) -> str:
    """Graphviz digraph: one node per element, one edge per cover, rank by height."""
    if labels is None:
        labels = L.labels
    lines = [f"digraph {name} {{", "  rankdir=BT;", '  node [shape=box, fontsize=10];']
    for v in range(L.size):
        text = labels[v] if labels is not None else str(v)
        text = text.replace('"', '\\"')
        lines.append(f'  n{v} [label="{text}"];')
    h = L.heights()
    for level in sorted(set(h)):
        members = " ".join(f"n{v};" for v in range(L.size) if h[v] == level)
        lines.append(f"  {{ rank=same; {members} }}")
    for v in range(L.size):
        for u in L.covers()[v]:
            lines.append(f"  n{v} -> n{u};")
    lines.append("}")
    return "\n".join(lines) + "\n"
