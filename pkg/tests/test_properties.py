import random

import pytest

from core.properties import (
    SUITES, random_matrix, random_multihomogeneous, random_polynomial, random_scalar, run_suites,
)


def test_all_suites_pass():
    results = run_suites(2024, cases=10)
    assert len(results) == len(SUITES)
    for r in results:
        assert r.cases == 10
        assert r.passed, r.failures


@pytest.mark.parametrize("name", list(SUITES))
def test_single_suite(name):
    (result,) = run_suites(7, cases=5, names=[name])
    assert result.passed


def test_generators_are_reproducible():
    """Test one seed gives one polynomial"""
    assert random_polynomial(random.Random(5)) == random_polynomial(random.Random(5))
    assert random_matrix(random.Random(5), 3) == random_matrix(random.Random(5), 3)


def test_random_multihomogeneous():
    rng = random.Random(11)
    for _ in range(30):
        f = random_multihomogeneous(rng)
        assert not f.is_zero()
        assert f.is_multihomogeneous()


def test_random_scalar_over_q():
    rng = random.Random(3)
    assert all(random_scalar(rng, 1).is_rational() for _ in range(10))
