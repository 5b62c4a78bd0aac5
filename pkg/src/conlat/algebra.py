"""Finite unary algebras and their congruence lattices.

The universe of an algebra is always {0..n-1}; operations are total
self-maps given by image tables.  Congruences are Partition values that
every operation respects.
"""

from __future__ import annotations

import json
from collections import deque

import numpy as np

from .partition import Partition, enumerate_eq


class UnaryAlgebra:
    """Universe {0..n-1} plus an ordered list of named unary operations."""

    __slots__ = ("name", "n", "ops")

    def __init__(self, n: int, ops, name: str = ""):
        ops = tuple((str(sym), tuple(table)) for sym, table in ops)
        for sym, table in ops:
            if len(table) != n:
                raise ValueError(f"op {sym}: table length {len(table)} != {n}")
            if any(not 0 <= v < n for v in table):
                raise ValueError(f"op {sym}: table entry out of range")
        symbols = [sym for sym, _ in ops]
        if len(set(symbols)) != len(symbols):
            raise ValueError("duplicate operation symbols")
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "ops", ops)

    def __setattr__(self, name, value):
        raise AttributeError("UnaryAlgebra is immutable")

    @property
    def symbols(self):
        return [sym for sym, _ in self.ops]

    def table(self, symbol: str):
        for sym, t in self.ops:
            if sym == symbol:
                return t
        raise KeyError(symbol)

    def __repr__(self):
        return f"UnaryAlgebra(n={self.n}, ops={self.symbols}, name={self.name!r})"

    # ---------------- JSON ----------------

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "size": self.n,
            "operations": [
                {"symbol": sym, "table": list(t)} for sym, t in self.ops
            ],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "UnaryAlgebra":
        try:
            n = int(d["size"])
            ops = [(op["symbol"], op["table"]) for op in d["operations"]]
            name = str(d.get("name", ""))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed algebra JSON: {exc}") from exc
        return cls(n, ops, name=name)

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def loads(cls, s: str) -> "UnaryAlgebra":
        try:
            d = json.loads(s)
        except json.JSONDecodeError as exc:
            raise ValueError(f"invalid JSON: {exc}") from exc
        if not isinstance(d, dict):
            raise ValueError("algebra JSON must be an object")
        return cls.from_dict(d)


def from_permutations(n: int, perms, name: str = "") -> UnaryAlgebra:
    """Algebra whose operations are the given bijective tables, named g0, g1, ..."""
    perms = [tuple(p) for p in perms]
    for p in perms:
        if sorted(p) != list(range(n)):
            raise ValueError(f"not a bijection on {{0..{n - 1}}}: {p}")
    return UnaryAlgebra(n, [(f"g{i}", p) for i, p in enumerate(perms)], name=name)


def respects(a: UnaryAlgebra, p: Partition) -> bool:
    """True iff every operation maps p-related pairs to p-related pairs."""
    if p.n != a.n:
        raise ValueError(f"size mismatch: partition {p.n} vs algebra {a.n}")
    ker = p.kernel
    for _, t in a.ops:
        # x ~ kernel[x] always, so it is enough to compare images of x and its rep
        if any(ker[t[x]] != ker[t[k]] for x, k in enumerate(ker)):
            return False
    return True


def cg(a: UnaryAlgebra, pairs) -> Partition:
    """Least congruence of `a` containing all given pairs.

    Single union-find; uniting x,y enqueues (f(x), f(y)) for every op f,
    so the fixpoint is reached without re-scanning.
    """
    n = a.n
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    tables = [t for _, t in a.ops]
    queue = deque()
    for x, y in pairs:
        if not (0 <= x < n and 0 <= y < n):
            raise ValueError(f"pair ({x},{y}) out of range")
        queue.append((x, y))
    while queue:
        x, y = queue.popleft()
        rx, ry = find(x), find(y)
        if rx == ry:
            continue
        if rx > ry:
            rx, ry = ry, rx
        parent[ry] = rx
        for t in tables:
            queue.append((t[rx], t[ry]))
    return Partition(find(x) for x in range(n))


class ConLattice:
    """All congruences of an algebra, in a deterministic order.

    Elements are sorted by (block count descending, bar string), so the
    identity relation comes first and the full relation last.
    """

    __slots__ = ("algebra", "elements", "_index", "_leq", "_covers")

    def __init__(self, algebra: UnaryAlgebra, elements):
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "elements", list(elements))
        object.__setattr__(
            self, "_index", {p: i for i, p in enumerate(self.elements)}
        )
        object.__setattr__(self, "_leq", None)
        object.__setattr__(self, "_covers", None)

    def __setattr__(self, name, value):
        raise AttributeError("ConLattice is immutable")

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, p):
        return p in self._index

    def index_of(self, p: Partition) -> int:
        return self._index[p]

    def leq_matrix(self) -> np.ndarray:
        """Boolean matrix M with M[i,j] = (element i below element j)."""
        if self._leq is None:
            from .lattice import leq_matrix_of

            object.__setattr__(self, "_leq", leq_matrix_of(self.elements))
        return self._leq

    @property
    def covers(self) -> list[list[int]]:
        """Adjacency list of the covering relation (indices into elements)."""
        if self._covers is None:
            leq = self.leq_matrix()
            lt = leq & ~np.eye(len(self.elements), dtype=bool)
            red = lt & ~(lt.astype(np.uint8) @ lt.astype(np.uint8)).astype(bool)
            object.__setattr__(
                self, "_covers", [sorted(np.nonzero(row)[0].tolist()) for row in red]
            )
        return self._covers

    def to_lattice(self):
        from .lattice import FiniteLattice

        return FiniteLattice(
            self.leq_matrix(), labels=[p.bar() for p in self.elements], check=False
        )

    def bottom(self) -> Partition:
        return self.elements[0]

    def top(self) -> Partition:
        return self.elements[-1]


def con(a: UnaryAlgebra) -> ConLattice:
    """The congruence lattice of `a`.

    Principal congruences for all pairs x < y, then closure under binary
    join (FIFO over a growing list), plus the identity relation.
    """
    n = a.n
    bottom = Partition.bottom(n)
    principals = []
    seen = {bottom}
    for x in range(n):
        for y in range(x + 1, n):
            p = cg(a, [(x, y)])
            if p not in seen:
                seen.add(p)
                principals.append(p)
    elems = sorted(principals, key=lambda p: (-p.block_count(), p.bar()))
    i = 0
    while i < len(elems):
        p = elems[i]
        for j in range(i):
            r = p.join(elems[j])
            if r not in seen:
                seen.add(r)
                elems.append(r)
        i += 1
    elems.append(bottom)
    elems.sort(key=lambda p: (-p.block_count(), p.bar()))
    return ConLattice(a, elems)


def con_brute(a: UnaryAlgebra, bound: int = 6) -> list[Partition]:
    """Oracle: filter Eq(n) by the congruence property. Only for small n."""
    return [p for p in enumerate_eq(a.n, bound=bound) if respects(a, p)]


class Monoid1:
    """A set of self-map tables closed under composition, containing identity."""

    __slots__ = ("n", "maps")

    def __init__(self, n: int, maps):
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "maps", frozenset(tuple(m) for m in maps))

    def __setattr__(self, name, value):
        raise AttributeError("Monoid1 is immutable")

    def __len__(self):
        return len(self.maps)

    def __iter__(self):
        # deterministic order for downstream signatures
        return iter(sorted(self.maps))

    def __contains__(self, m):
        return tuple(m) in self.maps


def monoid1(a: UnaryAlgebra) -> Monoid1:
    """Closure of {identity} and the op tables under composition."""
    n = a.n
    ident = tuple(range(n))
    gens = [tuple(t) for _, t in a.ops]
    maps = {ident}
    maps.update(gens)
    frontier = deque(maps)
    while frontier:
        f = frontier.popleft()
        for g in gens:
            h = tuple(f[x] for x in g)  # f after g
            if h not in maps:
                maps.add(h)
                frontier.append(h)
            h2 = tuple(g[x] for x in f)  # g after f
            if h2 not in maps:
                maps.add(h2)
                frontier.append(h2)
    return Monoid1(n, maps)


def _check_retraction(amb: UnaryAlgebra, sub, e_table):
    # e must satisfy e(e(x)) = e(x) with image exactly sub; then e fixes sub pointwise
    if any(e_table[e_table[x]] != e_table[x] for x in range(amb.n)):
        raise ValueError("operation is not idempotent")
    if sorted(set(e_table)) != list(sub):
        raise ValueError("image of operation is not the given subuniverse")


def star_of(amb: UnaryAlgebra, sub, beta: Partition) -> Partition:
    """Least congruence of `amb` whose restriction to sub contains beta.

    beta is a partition of the re-indexed sub (positions 0..len(sub)-1).
    """
    sub = list(sub)
    if beta.n != len(sub):
        raise ValueError("beta must be a partition of the subuniverse")
    pairs = [(sub[i], sub[j]) for i, j in beta.pairs()]
    return cg(amb, pairs)


def hat_of(
    amb: UnaryAlgebra,
    sub,
    e_symbol: str,
    beta: Partition,
    monoid: Monoid1 | None = None,
) -> Partition:
    """Greatest congruence of `amb` restricting to beta on sub.

    x ~ y iff (e(f(x)), e(f(y))) lands in beta for every f in the
    composition monoid of amb.  Constant maps only ever produce diagonal
    pairs, so the generated monoid (with identity) is enough.
    """
    sub = list(sub)
    if beta.n != len(sub):
        raise ValueError("beta must be a partition of the subuniverse")
    e_table = amb.table(e_symbol)
    _check_retraction(amb, sub, e_table)
    if monoid is None:
        monoid = monoid1(amb)
    pos = {v: i for i, v in enumerate(sub)}
    ker = beta.kernel
    sigs = []
    for x in range(amb.n):
        sigs.append(tuple(ker[pos[e_table[f[x]]]] for f in monoid))
    return Partition(sigs)
