import random
from fractions import Fraction

import pytest

from haarlab import (
    cyclic,
    dihedral,
    direct_product,
    group_topologies,
    quaternion8,
    symmetric3,
)


def corpus_groups():
    groups = [cyclic(n) for n in range(1, 13)]
    groups += [dihedral(3), dihedral(4), quaternion8(), symmetric3()]
    groups.append(direct_product(cyclic(2), cyclic(4)))
    return groups


@pytest.fixture(scope="session")
def corpus():
    return corpus_groups()


@pytest.fixture(scope="session")
def corpus_instances(corpus):
    """Every corpus group with every compatible topology."""
    return [tg for group in corpus for tg in group_topologies(group)]


def random_fraction(rng: random.Random, nonneg=True, max_num=99):
    num = rng.randint(0 if nonneg else -max_num, max_num)
    den = rng.randint(1, max_num)
    return Fraction(num, den)
