"""Oracle-vs-formula verification of the interval structure theory.

Ground truth always comes from full congruence enumeration of the built
algebras; the closed-form least/greatest extensions and the predicted
interval shapes are checked against it, never the other way round.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .algebra import UnaryAlgebra, con, hat_of, monoid1, star_of
from .lattice import FiniteLattice, IntervalShape, isomorphic, leq_matrix_of, shape_lattice
from .partition import DEFAULT_ENUM_BOUND, Partition, bell, enumerate_eq
from .overalgebra import (
    OverISpec,
    OverIISpec,
    build_i,
    build_ii,
    formula_star_i,
    formula_star_ii,
    formula_tilde_i,
    formula_tilde_ii,
    predicted_shape_i,
    predicted_shape_ii,
)

DEFAULT_EQ_BUDGET = 100_000


@dataclass(frozen=True)
class FiberReport:
    """One base congruence with its ambient inverse image.

    predicted is None when no closed-form shape applies (plain
    residuation checks); shape_match is None when the isomorphism check
    was skipped for budget reasons, and never None in budgeted runs.
    """

    beta: Partition
    star: Partition
    hat: Partition
    fiber: tuple
    predicted: IntervalShape | None
    shape_match: bool | None
    exact_match: bool

    def to_dict(self) -> dict:
        return {
            "beta": self.beta.bar(),
            "star": self.star.bar(),
            "hat": self.hat.bar(),
            "fiber_size": len(self.fiber),
            "predicted_size": None if self.predicted is None else self.predicted.size(),
            "shape_match": self.shape_match,
        }


@dataclass(frozen=True)
class VerifyReport:
    """Outcome of one verification run; failures carry minimal witnesses."""

    theorem_id: str
    base_con_size: int
    ambient_con_size: int
    fibers: tuple
    epimorphism_ok: bool
    lemma_ok: bool
    failures: tuple = ()

    @property
    def passed(self) -> bool:
        return self.epimorphism_ok and self.lemma_ok and not self.failures

    def to_dict(self) -> dict:
        d = {
            "theorem": self.theorem_id,
            "pass": self.passed,
            "base_con_size": self.base_con_size,
            "ambient_con_size": self.ambient_con_size,
            "fibers": [f.to_dict() for f in self.fibers],
        }
        if self.failures:
            d["failures"] = list(self.failures)
        return d


def interval_partitions(
    star: Partition,
    hat: Partition,
    bound: int = DEFAULT_ENUM_BOUND,
    budget: int = DEFAULT_EQ_BUDGET,
):
    """All partitions p with star <= p <= hat, or None when out of budget.

    Inside each hat block the star blocks may be regrouped freely and
    independently, so the interval is a product of partition lattices
    over the per-block counts of star sub-blocks.
    """
    if not star.leq(hat):
        raise ValueError("star must refine hat")
    by_hat: dict[int, list] = {}
    for sb in star.blocks():
        by_hat.setdefault(hat.kernel[sb[0]], []).append(sb)
    groups = [by_hat[rep] for rep in sorted(by_hat)]
    total = 1
    for g in groups:
        if len(g) > bound:
            return None
        total *= bell(len(g))
        if total > budget:
            return None
    per_group = []
    for sblocks in groups:
        choices = []
        for q in enumerate_eq(len(sblocks), bound=bound):
            extra = []
            for cls in q.blocks():
                first = sblocks[cls[0]][0]
                extra.extend((first, sblocks[i][0]) for i in cls[1:])
            choices.append(extra)
        per_group.append(choices)
    base_pairs = list(star.pairs())
    out = []
    for combo in itertools.product(*per_group):
        pairs = list(base_pairs)
        for extra in combo:
            pairs.extend(extra)
        out.append(Partition.from_pairs(star.n, pairs))
    return out


def _group_fibers(conA, conB, sub):
    """Fibers of the restriction map, in the order of conB."""
    index = {p: i for i, p in enumerate(conB)}
    fibers = [[] for _ in conB]
    stray = []
    for p in conA:
        r = p.restrict(sub)
        if r in index:
            fibers[index[r]].append(p)
        else:
            stray.append((p, r))
    return [tuple(f) for f in fibers], stray

def _epimorphism_ok(conA, conB, sub, failures) -> bool:
    """Restriction is onto conB and preserves all pairwise meets and joins."""
    restr = [p.restrict(sub) for p in conA]
    ok = True
    if set(restr) != set(conB):
        failures.append("restriction image differs from the base congruence set")
        ok = False
    elems = list(conA)
    for i in range(len(elems)):
        for j in range(i + 1, len(elems)):
            if elems[i].meet(elems[j]).restrict(sub) != restr[i].meet(restr[j]):
                failures.append(
                    f"meet not preserved at {elems[i].bar()} / {elems[j].bar()}"
                )
                return False
            if elems[i].join(elems[j]).restrict(sub) != restr[i].join(restr[j]):
                failures.append(
                    f"join not preserved at {elems[i].bar()} / {elems[j].bar()}"
                )
                return False
    return ok


def _shape_match(fiber, shape: IntervalShape, failures, tag: str) -> bool | None:
    if shape.size() != len(fiber):
        failures.append(
            f"{tag}: predicted size {shape.size()} but fiber has {len(fiber)}"
        )
        return False
    try:
        target = shape_lattice(shape)
    except ValueError:
        return None  # budget; count already checked above
    got = FiniteLattice(leq_matrix_of(fiber), check=False)
    if not isomorphic(got, target):
        failures.append(f"{tag}: fiber not isomorphic to {shape.label()}")
        return False
    return True


def _examine_fiber(
    tag: str,
    beta: Partition,
    star: Partition,
    hat: Partition,
    shape: IntervalShape | None,
    fiber,
    conA,
    failures,
) -> FiberReport:
    tag = f"{tag} at {beta.bar()}"
    fset = set(fiber)
    exact = True
    if not fiber:
        failures.append(f"{tag}: empty fiber")
        exact = False
    if star not in fset or hat not in fset:
        failures.append(f"{tag}: closed-form bounds not in the fiber")
        exact = False
    interval = {p for p in conA if star.leq(p) and p.leq(hat)}
    if fset != interval:
        failures.append(
            f"{tag}: fiber differs from the lattice interval "
            f"({len(fset)} vs {len(interval)} elements)"
        )
        exact = False
    if exact:
        pts = interval_partitions(star, hat)
        if pts is not None and set(pts) != fset:
            failures.append(
                f"{tag}: equivalence-interval has {len(pts)} members, "
                f"fiber has {len(fset)}"
            )
            exact = False
    shape_ok = None
    if shape is not None and exact:
        shape_ok = _shape_match(fiber, shape, failures, tag)
    return FiberReport(beta, star, hat, tuple(fiber), shape, shape_ok, exact)


def _finish(theorem_id, conB, conA, fibers, epi, failures) -> VerifyReport:
    lemma_ok = all(f.exact_match for f in fibers)
    if sum(len(f.fiber) for f in fibers) != len(conA):
        failures.append("fiber sizes do not add up to the ambient lattice size")
        lemma_ok = False
    return VerifyReport(
        theorem_id, len(conB), len(conA), tuple(fibers), epi, lemma_ok, tuple(failures)
    )


def check_residuation(ambient: UnaryAlgebra, sub, e_sym: str) -> VerifyReport:
    """Check that restriction along the retraction e_sym behaves as a
    residuated surjection onto the congruences of the induced algebra.

    The algebra on sub carries every map x -> e(g(x)) for g in the
    composition monoid of the ambient (tables deduplicated).  Every
    fiber must equal the interval between the least extension (pair
    generation) and the greatest extension (monoid signatures).
    """
    sub = tuple(sorted(set(int(x) for x in sub)))
    e_table = ambient.table(e_sym)
    monoid = monoid1(ambient)
    pos = {v: i for i, v in enumerate(sub)}
    if sorted(set(e_table)) != list(sub):
        raise ValueError("image of the retraction is not the given subuniverse")
    seen = set()
    ops = []
    for g in monoid:
        t = tuple(pos[e_table[g[x]]] for x in sub)
        if t not in seen:
            seen.add(t)
            ops.append((f"r{len(ops)}", t))
    base = UnaryAlgebra(len(sub), ops, name=f"{ambient.name}_induced")
    conB = con(base)
    conA = con(ambient)
    failures: list[str] = []
    epi = _epimorphism_ok(conA, conB, sub, failures)
    grouped, stray = _group_fibers(conA, conB, sub)
    for p, r in stray:
        failures.append(f"restriction of {p.bar()} gives non-congruence {r.bar()}")
    fibers = []
    for beta, fiber in zip(conB, grouped):
        star = star_of(ambient, sub, beta)
        hat = hat_of(ambient, sub, e_sym, beta, monoid)
        fibers.append(
            _examine_fiber("lemma", beta, star, hat, None, fiber, conA, failures)
        )
    return _finish("lemma", conB, conA, fibers, epi, failures)


def check_thm1(spec: OverISpec) -> VerifyReport:
    """Verify the glued-copies interval structure against enumeration.

    For every base congruence: the closed forms must be the fiber's
    least and greatest elements, the fiber must equal both the lattice
    interval and the free regrouping interval, and its shape must be
    the predicted product of partition lattices.
    """
    res = build_i(spec)
    sub = res.embedding.sub0
    conB = con(spec.base)
    conA = con(res.ambient)
    failures: list[str] = []
    epi = _epimorphism_ok(conA, conB, sub, failures)
    grouped, stray = _group_fibers(conA, conB, sub)
    for p, r in stray:
        failures.append(f"restriction of {p.bar()} gives non-congruence {r.bar()}")
    fibers = []
    for beta, fiber in zip(conB, grouped):
        star = formula_star_i(spec, beta)
        hat = formula_tilde_i(spec, beta)
        shape = predicted_shape_i(spec, beta)
        fibers.append(
            _examine_fiber("thm1", beta, star, hat, shape, fiber, conA, failures)
        )
    return _finish("thm1", conB, conA, fibers, epi, failures)


def check_thm2_thm3(spec: OverIISpec) -> VerifyReport:
    """Verify the chained-copies interval structure against enumeration.

    Congruences above the generated one (and below the top) get the
    closed-form treatment; every other congruence must have a singleton
    fiber equal to its least extension.
    """
    res = build_ii(spec)
    sub = res.embedding.sub0
    conB = con(spec.base)
    conA = con(res.ambient)
    beta0 = spec.beta()
    failures: list[str] = []
    epi = _epimorphism_ok(conA, conB, sub, failures)
    grouped, stray = _group_fibers(conA, conB, sub)
    for p, r in stray:
        failures.append(f"restriction of {p.bar()} gives non-congruence {r.bar()}")
    splitting = any(len(b) > 1 for b in spec.blocks)
    fibers = []
    for theta, fiber in zip(conB, grouped):
        in_window = beta0.leq(theta) and theta.block_count() > 1
        if in_window:
            star = formula_star_ii(spec, theta)
            hat = formula_tilde_ii(spec, theta)
            shape = predicted_shape_ii(spec, theta)
            rep = _examine_fiber(
                "thm2", theta, star, hat, shape, fiber, conA, failures
            )
            # strict growth exactly when some index block can split
            if rep.exact_match and splitting != (len(fiber) > 1):
                failures.append(
                    f"thm3 dichotomy at {theta.bar()}: fiber size {len(fiber)}"
                )
                rep = FiberReport(
                    theta, star, hat, rep.fiber, shape, rep.shape_match, False
                )
        else:
            star = star_of(res.ambient, sub, theta)
            exact = len(fiber) == 1 and fiber[0] == star
            if not exact:
                failures.append(
                    f"thm3 dichotomy at {theta.bar()}: expected singleton fiber"
                )
            hat = fiber[0] if fiber else star
            rep = FiberReport(
                theta, star, hat, fiber, IntervalShape(()), exact, exact
            )
        fibers.append(rep)
    return _finish("thm2+3", conB, conA, fibers, epi, failures)


# ---------------- randomized checking ----------------


@dataclass(frozen=True)
class FuzzBounds:
    """Size limits for randomized trials."""

    max_base: int = 5
    max_ops: int = 3
    max_universe: int = 30
    max_lattice: int = 300


def _random_base(rng: random.Random, bounds: FuzzBounds) -> UnaryAlgebra:
    n = rng.randint(2, bounds.max_base)
    k = rng.randint(1, bounds.max_ops)
    ops = [
        (f"g{i}", tuple(rng.randrange(n) for _ in range(n))) for i in range(k)
    ]
    return UnaryAlgebra(n, ops, name="rnd")


def _random_set_partition(rng: random.Random, items):
    groups: list[list] = []
    for x in items:
        c = rng.randint(0, len(groups))
        if c == len(groups):
            groups.append([x])
        else:
            groups[c].append(x)
    return groups


def _fuzz_thm1(rng: random.Random, bounds: FuzzBounds) -> VerifyReport:
    base = _random_base(rng, bounds)
    for _ in range(60):
        n = base.n
        max_k = (bounds.max_universe - n) // (n - 1)
        K = rng.randint(0, min(max_k, 5))
        tiepoints = tuple(rng.randrange(n) for _ in range(K))
        spec = OverISpec(
            base, tiepoints, _random_set_partition(rng, range(1, K + 1))
        )
        predicted = sum(predicted_shape_i(spec, b).size() for b in con(base))
        if predicted <= bounds.max_lattice:
            return check_thm1(spec)
        base = _random_base(rng, bounds)
    return check_thm1(OverISpec(base, ()))


def _fuzz_thm23(rng: random.Random, bounds: FuzzBounds) -> VerifyReport:
    base = _random_base(rng, bounds)
    spec = None
    for _ in range(60):
        n = base.n
        npairs = rng.randint(1, 2)
        K = npairs + 1
        max_u = (bounds.max_universe - n) // (K * (n - 1))
        if max_u >= 1:
            u = rng.randint(1, min(max_u, 2))
            pairs = []
            for _ in range(npairs):
                a = rng.randrange(n)
                b = rng.randrange(n - 1)
                pairs.append((a, b if b < a else b + 1))  # keep a != b
            blocks = _random_set_partition(rng, range(0, u * K + 1, K))
            cand = OverIISpec(base, pairs, u, blocks)
            predicted = sum(
                predicted_shape_ii(cand, t).size() for t in con(base)
            )
            if predicted <= bounds.max_lattice:
                return check_thm2_thm3(cand)
            spec = cand
        base = _random_base(rng, bounds)
    if spec is None:
        raise ValueError("size bounds leave no room for the chained construction")
    # singleton index blocks keep every fiber trivial
    fallback = OverIISpec(
        spec.base, spec.gen_pairs, 1, [[0], [spec.K]]
    )
    return check_thm2_thm3(fallback)


def fuzz(seed: int, trials: int, bounds: FuzzBounds = FuzzBounds()) -> list:
    """Randomized verification runs, alternating between the two
    constructions; deterministic for a given seed."""
    reports = []
    for t in range(trials):
        rng = random.Random(seed * 1_000_003 + t)
        if t % 2 == 0:
            reports.append(_fuzz_thm1(rng, bounds))
        else:
            reports.append(_fuzz_thm23(rng, bounds))
    return reports
