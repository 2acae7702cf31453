"""
Seeded random generators and the randomized property suites run by the `suite` verb
"""
import itertools
import math
import random
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence

from loguru import logger

from core.freealg import (
    GMonomial, GPolynomial, GVar, commutator, commutator_expansion, crossing_scalar, multilinearize_with_map,
)
from core.groups import FiniteGroup, TRIVIAL_GROUP
from core.matalg import ElementaryGrading, GradedMatrixAlgebra, RingMatrix, evaluate
from core.regular import pauli_grading
from core.scalars import CycloScalar, ONE, ZERO, root_of_unity

CONDUCTORS = (1, 3, 4, 5, 8, 12)


def random_scalar(rng: random.Random, conductor: int, spread: int = 3) -> CycloScalar:
    value = ZERO
    for k in range(conductor):
        c = rng.randint(-spread, spread)
        if c:
            value = value + root_of_unity(conductor, k) * c
    return value


def random_monomial(rng: random.Random, variables: Sequence[GVar], length: int) -> GMonomial:
    return GMonomial(tuple(rng.choice(variables) for _ in range(length)))


def random_polynomial(rng: random.Random, group: FiniteGroup = TRIVIAL_GROUP, variables: int = 3,
                      max_degree: int = 3, terms: int = 4, spread: int = 2) -> GPolynomial:
    """Sum of random monomials; each variable index gets one random degree"""
    pool = [GVar(i, rng.randrange(group.order)) for i in range(1, variables + 1)]
    result = GPolynomial({}, group)
    for _ in range(terms):
        mono = random_monomial(rng, pool, rng.randint(1, max_degree))
        c = rng.choice([c for c in range(-spread, spread + 1) if c])
        result = result + GPolynomial.from_monomial(mono, c, group)
    return result


def random_multihomogeneous(rng: random.Random, group: FiniteGroup = TRIVIAL_GROUP, variables: int = 2,
                            max_degree: int = 4, terms: int = 3, spread: int = 2) -> GPolynomial:
    """Random words sharing one multidegree, total degree at most max_degree"""
    pool = [GVar(i, rng.randrange(group.order)) for i in range(1, variables + 1)]
    total = rng.randint(1, max_degree)
    letters = [rng.choice(pool) for _ in range(total)]
    words = sorted(set(itertools.permutations(letters)))
    result = GPolynomial({}, group)
    for word in rng.sample(words, min(terms, len(words))):
        c = rng.choice([c for c in range(-spread, spread + 1) if c])
        result = result + GPolynomial.from_monomial(GMonomial(word), c, group)
    return result


def random_matrix(rng: random.Random, n: int, spread: int = 3) -> RingMatrix:
    return RingMatrix(n, {(i, j, 0): rng.randint(-spread, spread)
                          for i in range(1, n + 1) for j in range(1, n + 1)})


@dataclass
class SuiteResult:
    name: str
    cases: int = 0
    failures: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def field_axioms(rng: random.Random, cases: int) -> SuiteResult:
    result = SuiteResult("field axioms")
    for _ in range(cases):
        m = rng.choice(CONDUCTORS)
        a, b, c = (random_scalar(rng, m) for _ in range(3))
        result.cases += 1
        if (a + b) * c != a * c + b * c:
            result.failures.append(f"distributivity fails for {a}, {b}, {c} in Q(z{m})")
        if (a * b) * c != a * (b * c):
            result.failures.append(f"associativity fails for {a}, {b}, {c} in Q(z{m})")
        if a * b != b * a:
            result.failures.append(f"commutativity fails for {a}, {b} in Q(z{m})")
        if not a.is_zero() and a * a.inverse() != ONE:
            result.failures.append(f"{a} times its inverse is not 1")
    return result


def derivation_identity(rng: random.Random, cases: int) -> SuiteResult:
    """[f, y] equals the sum of the h_i(x, [x_i, y])"""
    result = SuiteResult("derivation identity")
    for _ in range(cases):
        f = random_polynomial(rng)
        y = GPolynomial.variable(max((v.index for v in f.variables()), default=0) + 10)
        result.cases += 1
        if commutator(f, y) != commutator_expansion(f, y):
            result.failures.append(f"[f, y] differs from its expansion for f = {f}")
    return result


def crossing_multiplicativity(rng: random.Random, cases: int, m: int = 3) -> SuiteResult:
    """A monomial evaluated on homogeneous elements equals its crossing scalar times
    the product taken in index order"""
    result = SuiteResult("crossing scalar")
    spec = pauli_grading(m, conductor=m)
    for _ in range(cases):
        k = rng.randint(1, 4)
        degrees = [rng.randrange(spec.group.order) for _ in range(k)]
        reps = spec.realization.representatives(degrees)
        order = list(range(1, k + 1))
        rng.shuffle(order)
        mono = GMonomial(tuple(GVar(i) for i in order))
        h = {i: degrees[i - 1] for i in range(1, k + 1)}
        value = RingMatrix.identity(spec.realization.size)
        for i in order:
            value = value * reps[i - 1]
        ordered = RingMatrix.identity(spec.realization.size)
        for r in reps:
            ordered = ordered * r
        result.cases += 1
        if value != ordered.scale(crossing_scalar(mono, h, spec.beta)):
            result.failures.append(f"crossing scalar wrong for order {order} with degrees {degrees}")
    return result


def polarization(rng: random.Random, cases: int) -> SuiteResult:
    """The full linearization at x_i = ... = a equals f(a) times the product of the
    factorials of the multidegree"""
    result = SuiteResult("polarization")
    A = GradedMatrixAlgebra.mnf(ElementaryGrading(TRIVIAL_GROUP, (0, 0)))
    for _ in range(cases):
        f = random_multihomogeneous(rng, max_degree=3)
        ml, mapping = multilinearize_with_map(f)
        values = {v: random_matrix(rng, 2) for v in f.variables()}
        polarized = {w.index: values[v] for v, images in mapping.items() for w in images}
        scale = math.prod(math.factorial(len(images)) for images in mapping.values())
        result.cases += 1
        if evaluate(ml, A, polarized) != evaluate(f, A, values).scale(scale):
            result.failures.append(f"polarization fails for f = {f}")
    return result


SUITES: Dict[str, Callable[[random.Random, int], SuiteResult]] = {
    "field": field_axioms,
    "derivation": derivation_identity,
    "crossing": crossing_multiplicativity,
    "polarization": polarization,
}


def run_suites(seed: int, cases: int = 50, names: Optional[Sequence[str]] = None) -> List[SuiteResult]:
    results = []
    for name in names or SUITES:
        rng = random.Random(f"{seed}:{name}")
        suite = SUITES[name](rng, cases)
        level = "INFO" if suite.passed else "WARNING"
        logger.log(level, f"suite {suite.name}: {suite.cases} cases, {len(suite.failures)} failures")
        results.append(suite)
    return results
