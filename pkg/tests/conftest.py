import random
from fractions import Fraction
from itertools import combinations

import pytest

from invym import catalog
from invym.forms import HValuedForm


@pytest.fixture(scope="session")
def su2():
    return catalog.load_algebra("su2")


@pytest.fixture(scope="session")
def gram(su2):
    return catalog.unit_gram(su2)


def random_form(frame, h, k, rng, span=3):
    comps = {}
    for idx in combinations(range(frame.n), k):
        for a in range(h.dim):
            x = Fraction(rng.randint(-span, span), rng.randint(1, 2))
            if x:
                comps[(a, idx)] = x
    return HValuedForm(frame, h, k, comps)


@pytest.fixture
def rng():
    return random.Random(20240611)
