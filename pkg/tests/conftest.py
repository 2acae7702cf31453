import sys
from pathlib import Path

import pytest
from loguru import logger

from core.groups import cyclic_product
from core.matalg import ElementaryGrading, GradedMatrixAlgebra
from core.parser import parse_polynomial

ROOT = Path(__file__).resolve().parent.parent
SPECS = ROOT / "specs"

# keep test output readable; failures still show warnings
logger.remove()
logger.add(sys.stderr, level="WARNING")


@pytest.fixture
def z2():
    return cyclic_product([2])


@pytest.fixture
def z3():
    return cyclic_product([3])


@pytest.fixture
def z4():
    return cyclic_product([4])


@pytest.fixture
def m2z2(z2):
    """M_2(Q) graded by Z2 via (e, g)"""
    return GradedMatrixAlgebra.mnf(ElementaryGrading(z2, (0, 1)))


@pytest.fixture
def m2z4(z4):
    return GradedMatrixAlgebra.mnf(ElementaryGrading(z4, (0, 1)))


@pytest.fixture
def m3z3(z3):
    return GradedMatrixAlgebra.mnf(ElementaryGrading(z3, (0, 1, 2)))


@pytest.fixture
def m3z3_zeta(z3):
    """Same grading over Q(zeta_3)"""
    return GradedMatrixAlgebra.mnf(ElementaryGrading(z3, (0, 1, 2)), conductor=3)


@pytest.fixture
def m11e():
    return GradedMatrixAlgebra.mab(1, 1, budget=6)


@pytest.fixture
def m2():
    """M_2(Q) with the trivial grading"""
    trivial = cyclic_product([1])
    return GradedMatrixAlgebra.mnf(ElementaryGrading(trivial, (0, 0)))


@pytest.fixture
def poly():
    """parse_polynomial with the group argument last"""
    def make(text, group):
        return parse_polynomial(text, group)
    return make
