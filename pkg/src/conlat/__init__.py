"""Congruence lattices of finite unary algebras.

Partitions with lattice structure, congruence enumeration, two
universe-expansion constructions with closed-form congruence intervals,
and verification of the predictions against full enumeration.
"""

from .partition import Partition, bell, enumerate_eq
from .algebra import (
    ConLattice,
    Monoid1,
    UnaryAlgebra,
    cg,
    con,
    con_brute,
    from_permutations,
    hat_of,
    monoid1,
    respects,
    star_of,
)
from .lattice import (
    FiniteLattice,
    IntervalShape,
    eq_lattice,
    interval,
    isomorphic,
    product,
    shape_lattice,
    to_dot,
)
from .overalgebra import (
    EmbeddingMap,
    OverISpec,
    OverIISpec,
    OverResult,
    build_i,
    build_ii,
    formula_star_i,
    formula_star_ii,
    formula_tilde_i,
    formula_tilde_ii,
    load_spec,
    predicted_shape_i,
    predicted_shape_ii,
)
from .verify import (
    FiberReport,
    FuzzBounds,
    VerifyReport,
    check_residuation,
    check_thm1,
    check_thm2_thm3,
    fuzz,
    interval_partitions,
)

__version__ = "0.1.0"

__all__ = [
    "Partition",
    "bell",
    "enumerate_eq",
    "UnaryAlgebra",
    "ConLattice",
    "Monoid1",
    "cg",
    "con",
    "con_brute",
    "from_permutations",
    "respects",
    "monoid1",
    "star_of",
    "hat_of",
    "FiniteLattice",
    "IntervalShape",
    "eq_lattice",
    "interval",
    "isomorphic",
    "product",
    "shape_lattice",
    "to_dot",
    "EmbeddingMap",
    "OverISpec",
    "OverIISpec",
    "OverResult",
    "build_i",
    "build_ii",
    "formula_star_i",
    "formula_tilde_i",
    "predicted_shape_i",
    "formula_star_ii",
    "formula_tilde_ii",
    "predicted_shape_ii",
    "load_spec",
    "FiberReport",
    "VerifyReport",
    "FuzzBounds",
    "check_residuation",
    "check_thm1",
    "check_thm2_thm3",
    "fuzz",
    "interval_partitions",
    "__version__",
]
