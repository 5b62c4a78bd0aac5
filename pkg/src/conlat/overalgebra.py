"""Two ways of expanding a finite unary algebra to a larger universe.

Construction I glues K fresh copies of the base set onto chosen
tie-points of the base.  Construction II chains uK + 1 copies in a row,
with every K-th copy "up-pointing"; a chosen index partition decides
which up-pointing copies may be identified by ambient congruences.

Both builders return the expanded algebra together with the embedding
bookkeeping, and both come with closed-form descriptions of the least
and greatest ambient congruences restricting to a given base congruence,
plus the predicted shape of that interval.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .algebra import UnaryAlgebra, cg, respects
from .lattice import IntervalShape
from .partition import Partition


def _as_blocks(blocks) -> tuple:
    return tuple(tuple(sorted(int(x) for x in b)) for b in blocks)


def _check_partition_of(blocks, expected, what: str):
    elems = [x for b in blocks for x in b]
    if sorted(elems) != sorted(expected) or len(set(elems)) != len(elems):
        raise ValueError(f"blocks must partition {what} exactly")


@dataclass(frozen=True)
class OverISpec:
    """Base algebra, tie-point sequence t_1..t_K, and a partition of {1..K}."""

    base: UnaryAlgebra
    tiepoints: tuple
    blocks: tuple

    def __init__(self, base, tiepoints, blocks=None):
        tiepoints = tuple(int(t) for t in tiepoints)
        K = len(tiepoints)
        for t in tiepoints:
            if not 0 <= t < base.n:
                raise ValueError(f"tie-point {t} out of range")
        if blocks is None:
            blocks = [range(1, K + 1)] if K else []
        blocks = _as_blocks(blocks)
        _check_partition_of(blocks, range(1, K + 1), "{1..K}")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "tiepoints", tiepoints)
        object.__setattr__(self, "blocks", blocks)

    @property
    def K(self) -> int:
        return len(self.tiepoints)

    def to_dict(self) -> dict:
        return {
            "base": self.base.to_dict(),
            "tiepoints": list(self.tiepoints),
            "blocks": [list(b) for b in self.blocks],
        }


@dataclass(frozen=True)
class OverIISpec:
    """Base algebra, generating pairs (a_1,b_1)..(a_{K-1},b_{K-1}), copy
    multiplier u, and a partition of the multiples {0, K, ..., uK}."""

    base: UnaryAlgebra
    gen_pairs: tuple
    u: int
    blocks: tuple

    def __init__(self, base, gen_pairs, u=1, blocks=None):
        gen_pairs = tuple((int(a), int(b)) for a, b in gen_pairs)
        if not gen_pairs:
            raise ValueError("need at least one generating pair")
        for a, b in gen_pairs:
            if not (0 <= a < base.n and 0 <= b < base.n):
                raise ValueError(f"pair ({a},{b}) out of range")
        u = int(u)
        if u < 1:
            raise ValueError("u must be at least 1")
        K = len(gen_pairs) + 1
        multiples = range(0, u * K + 1, K)
        if blocks is None:
            blocks = [multiples]
        blocks = _as_blocks(blocks)
        _check_partition_of(blocks, multiples, "{0, K, ..., uK}")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "gen_pairs", gen_pairs)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "blocks", blocks)

    @property
    def K(self) -> int:
        return len(self.gen_pairs) + 1

    def beta(self) -> Partition:
        """The distinguished base congruence generated by the pairs."""
        return cg(self.base, self.gen_pairs)

    def to_dict(self) -> dict:
        return {
            "base": self.base.to_dict(),
            "pairs": [list(p) for p in self.gen_pairs],
            "u": self.u,
            "blocks": [list(b) for b in self.blocks],
        }


class EmbeddingMap:
    """Injections of the base set into the ambient universe, one per copy.

    copies[i][b] is the ambient index of base element b inside copy i;
    copy 0 is the identity onto sub0 = {0..n-1}.
    """

    __slots__ = ("copies", "sub0", "tie_elements")

    def __init__(self, copies, sub0, tie_elements):
        object.__setattr__(self, "copies", tuple(tuple(c) for c in copies))
        object.__setattr__(self, "sub0", tuple(sub0))
        object.__setattr__(self, "tie_elements", tuple(tie_elements))
        for c in self.copies:
            if len(set(c)) != len(c):
                raise ValueError("copy map not injective")

    def __setattr__(self, name, value):
        raise AttributeError("EmbeddingMap is immutable")

    def ambient_size(self) -> int:
        return len({x for c in self.copies for x in c})

    def to_dict(self) -> dict:
        return {
            "sub0": list(self.sub0),
            "copies": [list(c) for c in self.copies],
            "tie_elements": list(self.tie_elements),
        }


@dataclass(frozen=True)
class OverResult:
    """The expanded algebra, its embedding bookkeeping, and the input spec."""

    ambient: UnaryAlgebra
    embedding: EmbeddingMap
    spec: object

    @property
    def retraction(self) -> str:
        """Symbol of the idempotent op collapsing the ambient onto sub0."""
        return "e0" if isinstance(self.spec, OverISpec) else "q_0_0"


# ---------------- Construction I ----------------


def _copies_i(spec: OverISpec):
    n = spec.base.n
    copies = [tuple(range(n))]
    for i, t in enumerate(spec.tiepoints, start=1):
        start = n + (i - 1) * (n - 1)
        table = []
        for b in range(n):
            if b == t:
                table.append(t)
            else:
                table.append(start + (b if b < t else b - 1))
        copies.append(tuple(table))
    return copies


def build_i(spec: OverISpec) -> OverResult:
    """Glue copies B_1..B_K onto the base at the tie-points.

    Fresh elements of copy i are numbered n + (i-1)(n-1) + rank, where
    rank counts base elements below, skipping the tie-point.  Operations:
    retractions e0..eK, one collapsing map per index block, then the
    lifted base operations.
    """
    base = spec.base
    n = base.n
    K = spec.K
    copies = _copies_i(spec)
    size = n + K * (n - 1) if n else 0
    if n == 0:
        raise ValueError("base must be nonempty")

    # resolve each element to its base original; ties are base elements
    # already, so only fresh elements need a lookup
    e0 = list(range(size))
    for i in range(1, K + 1):
        for b in range(n):
            x = copies[i][b]
            if x >= n:
                e0[x] = b

    ops = [("e0", tuple(e0))]
    for k in range(1, K + 1):
        ops.append((f"e{k}", tuple(copies[k][e0[x]] for x in range(size))))
    for idx, block in enumerate(spec.blocks, start=1):
        s = list(range(size))
        for i in block:
            t = spec.tiepoints[i - 1]
            for b in range(n):
                s[copies[i][b]] = t
        ops.append((f"s{idx}", tuple(s)))
    for sym, table in base.ops:
        ops.append((sym + "e0", tuple(table[e0[x]] for x in range(size))))

    name = f"{base.name}_over_i" if base.name else "over_i"
    ambient = UnaryAlgebra(size, ops, name=name)
    embedding = EmbeddingMap(
        copies, range(n), [spec.tiepoints[i - 1] for i in range(1, K + 1)]
    )
    assert embedding.ambient_size() == size  # copies must cover the universe
    return OverResult(ambient, embedding, spec)


def _class_reps_and_indices(spec: OverISpec, beta: Partition):
    """Class representatives of beta and, per class, the tie indices in it."""
    reps = [min(b) for b in beta.blocks()]
    tie_idx = []
    for rep in reps:
        tie_idx.append(
            [
                i
                for i in range(1, spec.K + 1)
                if beta.kernel[spec.tiepoints[i - 1]] == rep
            ]
        )
    return reps, tie_idx


def _require_congruence(algebra: UnaryAlgebra, beta: Partition):
    if not respects(algebra, beta):
        raise ValueError("not a congruence of the base algebra")


def formula_star_i(spec: OverISpec, beta: Partition) -> Partition:
    """Least ambient congruence restricting to beta, in closed form.

    Union of the copied relations, plus each beta class merged with its
    copies in every copy whose tie-point lies in that class.
    """
    _require_congruence(spec.base, beta)
    copies = _copies_i(spec)
    size = spec.base.n + spec.K * (spec.base.n - 1)
    pairs = []
    for c in copies:
        pairs.extend((c[x], c[y]) for x, y in beta.pairs())
    reps, tie_idx = _class_reps_and_indices(spec, beta)
    for rep, idxs in zip(reps, tie_idx):
        pairs.extend((rep, copies[i][rep]) for i in idxs)
    return Partition.from_pairs(size, pairs)


def formula_tilde_i(spec: OverISpec, beta: Partition) -> Partition:
    """Greatest ambient congruence restricting to beta, in closed form.

    On top of the least one: within each index block, copies tied inside
    one beta class get the images of every other class merged.
    """
    _require_congruence(spec.base, beta)
    copies = _copies_i(spec)
    size = spec.base.n + spec.K * (spec.base.n - 1)
    star = formula_star_i(spec, beta)
    pairs = list(star.pairs())
    reps, tie_idx = _class_reps_and_indices(spec, beta)
    for block in spec.blocks:
        for r, idxs in enumerate(tie_idx):
            group = sorted(set(block) & set(idxs))
            if len(group) < 2:
                continue
            for other in range(len(reps)):
                if other == r:
                    continue
                rep = reps[other]
                first = copies[group[0]][rep]
                pairs.extend((first, copies[i][rep]) for i in group[1:])
    return Partition.from_pairs(size, pairs)


def predicted_shape_i(spec: OverISpec, beta: Partition) -> IntervalShape:
    """Predicted interval shape: prod over blocks and classes of
    Eq(|block ∩ tie-indices-of-class|) ^ (class count - 1)."""
    _require_congruence(spec.base, beta)
    m = beta.block_count()
    _, tie_idx = _class_reps_and_indices(spec, beta)
    factors = []
    for block in spec.blocks:
        for idxs in tie_idx:
            factors.append((len(set(block) & set(idxs)), m - 1))
    return IntervalShape(factors)


# ---------------- Construction II ----------------


def _tie_elem_ii(spec: OverIISpec, j: int) -> int:
    """Base element serving as the left tie-point of copy j."""
    K = spec.K
    c = j % K
    if c == 0:
        return spec.gen_pairs[0][0]  # a_1
    return spec.gen_pairs[c - 1][0]  # a_c


def _copies_ii(spec: OverIISpec):
    base = spec.base
    n = base.n
    K = spec.K
    uK = spec.u * K
    a = [p[0] for p in spec.gen_pairs]  # a_1..a_{K-1} at offsets 0..K-2
    b = [p[1] for p in spec.gen_pairs]
    copies = [tuple(range(n))]
    for j in range(1, uK + 1):
        c = j % K
        if c == 1:
            anchor_elem, anchor_amb = a[0], copies[j - 1][a[0]]
        elif c == 0:
            anchor_elem, anchor_amb = a[0], copies[j - 1][b[K - 2]]
        else:
            anchor_elem, anchor_amb = a[c - 1], copies[j - 1][b[c - 2]]
        start = n + (j - 1) * (n - 1)
        table = []
        rank = 0
        for x in range(n):
            if x == anchor_elem:
                table.append(anchor_amb)
            else:
                table.append(start + rank)
                rank += 1
        copies.append(tuple(table))
    return copies


def build_ii(spec: OverIISpec) -> OverResult:
    """Chain copies B_0..B_uK, sharing one element between neighbours.

    Copy 0 is the base; every K-th copy is up-pointing.  Operations:
    the retractions q_i_0 pulling each copy back to the base, the
    injections q_0_j pushing the base out to each copy, then the lifted
    base operations.  q_0_0 is the idempotent retraction onto the base.
    """
    base = spec.base
    n = base.n
    if n < 2:
        raise ValueError("base must have at least 2 elements")
    K = spec.K
    uK = spec.u * K
    copies = _copies_ii(spec)
    size = n + uK * (n - 1)

    member_of = [[] for _ in range(size)]  # copies containing each element
    for j, c in enumerate(copies):
        for x in c:
            member_of[x].append(j)
    assert all(ms for ms in member_of)  # copies cover the universe

    inv = [dict() for _ in range(uK + 1)]
    for j, c in enumerate(copies):
        for base_elem, amb in enumerate(c):
            inv[j][amb] = base_elem

    block_of = {}
    for block in spec.blocks:
        for ell in block:
            block_of[ell] = block

    def e_table(ell: int):
        if ell % K == 0:
            block = block_of[ell]
            a1_amb = copies[ell][_tie_elem_ii(spec, ell)]
            table = [None] * size
            for j in block:
                for x in copies[j]:
                    val = copies[ell][inv[j][x]]
                    # two in-block copies sharing x must agree on its image
                    assert table[x] is None or table[x] == val
                    table[x] = val
            return [a1_amb if v is None else v for v in table]
        left = copies[ell][_tie_elem_ii(spec, ell)]
        right = copies[ell][spec.gen_pairs[ell % K - 1][1]]
        table = []
        for x in range(size):
            ms = member_of[x]
            if ell in ms:
                table.append(x)
            elif max(ms) < ell:
                table.append(left)
            else:
                assert min(ms) > ell
                table.append(right)
        return table

    e_tabs = {ell: e_table(ell) for ell in range(uK + 1)}
    ops = []
    for i in range(uK + 1):
        q = tuple(inv[i][v] for v in e_tabs[i])
        ops.append((f"q_{i}_0", q))
    e0 = [inv[0][v] for v in e_tabs[0]]
    for j in range(1, uK + 1):
        ops.append((f"q_0_{j}", tuple(copies[j][v] for v in e0)))
    for sym, table in base.ops:
        ops.append((sym + "e0", tuple(table[v] for v in e0)))

    name = f"{base.name}_over_ii" if base.name else "over_ii"
    ambient = UnaryAlgebra(size, ops, name=name)
    ties = [copies[j][_tie_elem_ii(spec, j)] for j in range(uK + 1)]
    embedding = EmbeddingMap(copies, range(n), ties)
    return OverResult(ambient, embedding, spec)


def _require_pairs_in(beta: Partition, spec: OverIISpec):
    for a, b in spec.gen_pairs:
        if beta.kernel[a] != beta.kernel[b]:
            raise ValueError(f"congruence does not relate generating pair ({a},{b})")


def formula_star_ii(spec: OverIISpec, beta: Partition) -> Partition:
    """Least ambient congruence restricting to beta, in closed form.

    Union of the copied relations plus the tie classes of all copies
    merged into one block.  Requires beta to relate every generating
    pair, which makes the tie class independent of the tie choice.
    """
    _require_congruence(spec.base, beta)
    _require_pairs_in(beta, spec)
    copies = _copies_ii(spec)
    size = spec.base.n + spec.u * spec.K * (spec.base.n - 1)
    pairs = []
    for c in copies:
        pairs.extend((c[x], c[y]) for x, y in beta.pairs())
    tie0 = copies[0][_tie_elem_ii(spec, 0)]
    for j, c in enumerate(copies):
        pairs.append((tie0, c[_tie_elem_ii(spec, j)]))
    return Partition.from_pairs(size, pairs)


def formula_tilde_ii(spec: OverIISpec, beta: Partition) -> Partition:
    """Greatest ambient congruence restricting to beta, in closed form.

    On top of the least one: each beta class is merged across all
    up-pointing copies in one index block.  The class range runs over
    all classes; the tie class is already merged in the least relation,
    so the extra term for it changes nothing.
    """
    _require_congruence(spec.base, beta)
    _require_pairs_in(beta, spec)
    copies = _copies_ii(spec)
    size = spec.base.n + spec.u * spec.K * (spec.base.n - 1)
    pairs = list(formula_star_ii(spec, beta).pairs())
    reps = [min(b) for b in beta.blocks()]
    for block in spec.blocks:
        for rep in reps:
            first = copies[block[0]][rep]
            pairs.extend((first, copies[ell][rep]) for ell in block[1:])
    return Partition.from_pairs(size, pairs)


def predicted_shape_ii(spec: OverIISpec, theta: Partition) -> IntervalShape:
    """Predicted interval shape over theta: prod Eq(|block|)^(r-1) when
    beta <= theta < top, trivial otherwise."""
    _require_congruence(spec.base, theta)
    beta = spec.beta()
    if not beta.leq(theta) or theta.block_count() == 1:
        return IntervalShape(())
    r = theta.block_count()
    return IntervalShape([(len(block), r - 1) for block in spec.blocks])


# ---------------- spec JSON ----------------


def _resolve_base(obj) -> UnaryAlgebra:
    if isinstance(obj, str):
        with open(obj, encoding="utf-8") as fh:
            return UnaryAlgebra.loads(fh.read())
    if isinstance(obj, dict):
        return UnaryAlgebra.from_dict(obj)
    raise ValueError("base must be an algebra object or a path string")


def overi_spec_from_dict(d: dict) -> OverISpec:
    base = _resolve_base(d["base"])
    return OverISpec(base, d["tiepoints"], d.get("blocks"))


def overii_spec_from_dict(d: dict) -> OverIISpec:
    base = _resolve_base(d["base"])
    return OverIISpec(base, d["pairs"], d.get("u", 1), d.get("blocks"))


def load_spec(path: str):
    """Load a construction spec from JSON; the key set decides the kind."""
    with open(path, encoding="utf-8") as fh:
        d = json.load(fh)
    if "tiepoints" in d:
        return overi_spec_from_dict(d)
    if "pairs" in d:
        return overii_spec_from_dict(d)
    raise ValueError("spec JSON must contain 'tiepoints' or 'pairs'")
