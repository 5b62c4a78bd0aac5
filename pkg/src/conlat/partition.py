"""Canonical partitions of {0..n-1} with lattice operations.

A partition is stored in kernel form: kernel[x] is the least element of
the block containing x.  This makes equality, hashing and refinement
tests O(n) and gives a unique representative per equivalence relation.
"""

from __future__ import annotations

from itertools import combinations

DEFAULT_ENUM_BOUND = 8  # Bell(8) = 4140, the largest Eq(n) we materialize by default


class Partition:
    """An equivalence relation on {0..n-1} in least-element kernel form."""

    __slots__ = ("n", "kernel")

    def __init__(self, labels):
        labels = tuple(labels)
        n = len(labels)
        # map arbitrary block labels to the least member of each block
        least: dict[object, int] = {}
        for x, lab in enumerate(labels):
            if lab not in least:
                least[lab] = x
        kernel = tuple(least[lab] for lab in labels)
        for x, k in enumerate(kernel):
            if not 0 <= k <= x:
                raise ValueError(f"bad kernel entry {k} at {x}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "kernel", kernel)

    def __setattr__(self, name, value):
        raise AttributeError("Partition is immutable")

    # ---------------- constructors ----------------

    @classmethod
    def bottom(cls, n: int) -> "Partition":
        return cls(range(n))

    @classmethod
    def top(cls, n: int) -> "Partition":
        return cls([0] * n)

    @classmethod
    def from_pairs(cls, n: int, pairs) -> "Partition":
        """Smallest equivalence relation on {0..n-1} containing all pairs."""
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]  # path compression
                x = parent[x]
            return x

        for x, y in pairs:
            if not (0 <= x < n and 0 <= y < n):
                raise ValueError(f"pair ({x},{y}) out of range for n={n}")
            rx, ry = find(x), find(y)
            if rx != ry:
                if rx > ry:
                    rx, ry = ry, rx
                parent[ry] = rx  # keep the least element as root
        return cls(find(x) for x in range(n))

    @classmethod
    def from_blocks(cls, blocks, n: int | None = None) -> "Partition":
        """Build from a list of blocks; blocks must be disjoint and cover {0..n-1}."""
        elems = [x for b in blocks for x in b]
        if n is None:
            n = len(elems)
        if sorted(elems) != list(range(n)):
            raise ValueError("blocks must partition {0..n-1} exactly")
        labels = [0] * n
        for b in blocks:
            m = min(b)
            for x in b:
                labels[x] = m
        return cls(labels)

    @classmethod
    def from_bar(cls, s: str) -> "Partition":
        """Parse bar notation like "|0,1,2|3,4,5|"."""
        if not (s.startswith("|") and s.endswith("|")):
            raise ValueError(f"bar string must start and end with '|': {s!r}")
        body = s[1:-1]
        if body == "":
            return cls(())
        blocks = [[int(t) for t in part.split(",")] for part in body.split("|")]
        return cls.from_blocks(blocks)

    # ---------------- views ----------------

    def blocks(self) -> list[list[int]]:
        """Disjoint sorted blocks covering {0..n-1}, ordered by least element."""
        out: dict[int, list[int]] = {}
        for x, k in enumerate(self.kernel):
            out.setdefault(k, []).append(x)
        return [out[k] for k in sorted(out)]

    def bar(self) -> str:
        return "|" + "|".join(",".join(map(str, b)) for b in self.blocks()) + "|"

    def block_count(self) -> int:
        return len(set(self.kernel))

    def block_of(self, x: int) -> list[int]:
        k = self.kernel[x]
        return [y for y in range(self.n) if self.kernel[y] == k]

    def related(self, x: int, y: int) -> bool:
        return self.kernel[x] == self.kernel[y]

    def pairs(self):
        """All related pairs (x, y) with x < y."""
        for b in self.blocks():
            yield from combinations(b, 2)

    def to_blocks_json(self):
        return self.blocks()

    # ---------------- lattice structure ----------------

    def _check_same_n(self, other: "Partition"):
        if self.n != other.n:
            raise ValueError(f"size mismatch: {self.n} != {other.n}")

    def meet(self, other: "Partition") -> "Partition":
        self._check_same_n(other)
        return Partition(zip(self.kernel, other.kernel))

    def join(self, other: "Partition") -> "Partition":
        self._check_same_n(other)
        parent = list(self.kernel)

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for x, k in enumerate(other.kernel):
            rx, rk = find(x), find(k)
            if rx != rk:
                if rx > rk:
                    rx, rk = rk, rx
                parent[rk] = rx
        return Partition(find(x) for x in range(self.n))

    def leq(self, other: "Partition") -> bool:
        """Refinement order: every block of self lies inside a block of other."""
        self._check_same_n(other)
        ok = other.kernel
        return all(ok[x] == ok[k] for x, k in enumerate(self.kernel))

    def restrict(self, subset) -> "Partition":
        """Intersect with subset^2 and re-index by position in subset.

        subset must be strictly increasing and inside range.
        """
        subset = list(subset)
        if any(not 0 <= x < self.n for x in subset):
            raise ValueError("subset element out of range")
        if any(a >= b for a, b in zip(subset, subset[1:])):
            raise ValueError("subset must be strictly increasing")
        return Partition(self.kernel[x] for x in subset)

    # ---------------- dunder plumbing ----------------

    def __eq__(self, other):
        return (
            isinstance(other, Partition)
            and self.n == other.n
            and self.kernel == other.kernel
        )

    def __hash__(self):
        return hash((self.n, self.kernel))

    def __repr__(self):
        return f"Partition({self.bar()!r})"

    def __str__(self):
        return self.bar()


def bell(n: int) -> int:
    """Number of partitions of an n-element set."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for v in row:
            nxt.append(nxt[-1] + v)
        row = nxt
    return row[0]


def enumerate_eq(n: int, bound: int = DEFAULT_ENUM_BOUND) -> list[Partition]:
    """All partitions of {0..n-1} via restricted growth strings, lexicographic.

    Refuses n above `bound` so callers do not materialize huge Eq(n) by accident.
    """
    if n > bound:
        raise ValueError(f"enumerate_eq({n}) exceeds bound {bound}")
    if n == 0:
        return [Partition(())]
    out = []
    a = [0] * n  # restricted growth string: a[i] <= 1 + max(a[:i])
    while True:
        out.append(Partition(a))
        # next RGS in lexicographic order
        i = n - 1
        while i > 0:
            if a[i] <= max(a[:i]):
                a[i] += 1
                for j in range(i + 1, n):
                    a[j] = 0
                break
            i -= 1
        else:
            break
    return out
