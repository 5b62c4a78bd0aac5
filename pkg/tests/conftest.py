import pytest

from conlat import Partition, UnaryAlgebra

# the running example: S3 acting on itself by right multiplication,
# 0-offset, generators as image tables
G0 = (1, 2, 0, 4, 5, 3)
G1 = (3, 5, 4, 0, 2, 1)

ALPHA = "|0,1,2|3,4,5|"
BETA = "|0,3|1,4|2,5|"
GAMMA = "|0,4|1,5|2,3|"
DELTA = "|0,5|1,3|2,4|"

# expansion of the example at tie-points (0, 2), row per operation
PRINTED_TABLE_02 = {
    "e0": (0, 1, 2, 3, 4, 5, 1, 2, 3, 4, 5, 0, 1, 3, 4, 5),
    "e1": (0, 6, 7, 8, 9, 10, 6, 7, 8, 9, 10, 0, 6, 8, 9, 10),
    "e2": (11, 12, 2, 13, 14, 15, 12, 2, 13, 14, 15, 11, 12, 13, 14, 15),
    "s1": (0, 1, 2, 3, 4, 5, 0, 0, 0, 0, 0, 2, 2, 2, 2, 2),
    "g0e0": (1, 2, 0, 4, 5, 3, 2, 0, 4, 5, 3, 1, 2, 4, 5, 3),
    "g1e0": (3, 5, 4, 0, 2, 1, 5, 4, 0, 2, 1, 3, 5, 0, 2, 1),
}

ALPHA_STAR_02 = "|0,1,2,6,7,11,12|3,4,5|8,9,10|13,14,15|"
ALPHA_HAT_02 = "|0,1,2,6,7,11,12|3,4,5|8,9,10,13,14,15|"
BETA_STAR_02 = "|0,3,8|1,4|2,5,15|6,9|7,10|11,13|12,14|"
GAMMA_STAR_02 = "|0,4,9|1,5|2,3,13|6,10|7,8|11,14|12,15|"
DELTA_STAR_02 = "|0,5,10|1,3|2,4,14|6,8|7,9|11,15|12,13|"


@pytest.fixture
def s3set() -> UnaryAlgebra:
    return UnaryAlgebra(6, [("g0", G0), ("g1", G1)], name="s3set")


@pytest.fixture
def printed_overalgebra() -> UnaryAlgebra:
    """The 16-element expansion, entered from its table, not built."""
    return UnaryAlgebra(16, list(PRINTED_TABLE_02.items()), name="s3set_over")


@pytest.fixture
def alpha() -> Partition:
    return Partition.from_bar(ALPHA)


@pytest.fixture
def beta() -> Partition:
    return Partition.from_bar(BETA)
