"""
End-to-end checks on the reference instances: M_2 and M_3 with their crossed product
gradings, the non-crossed Z4 grading, M_{1,1}(E), the star transfer and the two
independent identity oracles.
"""
import itertools
import random

import pytest
import sympy

from core.checker import (
    CENTRAL, FAILS, HOLDS, NEITHER, check_graded_central, check_graded_central_ordinary, check_graded_identity,
    check_transfer_star, classify_primeness, commutator_closure, primeness_enumeration_test,
    scalar_line_certificate, span_of, stability_recheck, verify_certificate,
)
from core.freealg import GMonomial, GPolynomial, GVar, product_of_copies
from core.groups import TRIVIAL_GROUP, Permutation
from core.matalg import GradedMatrixAlgebra, RingMatrix, aut_subgroup_H, homogeneous_basis
from core.properties import random_multihomogeneous, run_suites
from core.scalars import ONE, root_of_unity

WITNESS = "x1[g]*x2[g] - x2[g]*x1[g]"


def inversion_sign(sequence):
    inversions = sum(1 for a, b in itertools.combinations(sequence, 2) if a > b)
    return -1 if inversions % 2 else 1


def generic_identity_oracle(f, A):
    """Substitute generic homogeneous matrices with commuting symbolic entries and
    expand; f is an identity iff every entry vanishes"""
    n = A.n
    generic = {}
    for v in f.variables():
        M = sympy.zeros(n, n)
        for i, j in A.grading.units_of_degree(v.degree):
            M[i - 1, j - 1] = sympy.Symbol(f"a{v.index}_{i}_{j}")
        generic[v] = M
    total = sympy.zeros(n, n)
    for mono, coeff in f.terms.items():
        q = coeff.as_fraction()
        term = sympy.eye(n) * sympy.Rational(q.numerator, q.denominator)
        for v in mono.letters:
            term = term * generic[v]
        total += term
    return all(sympy.expand(entry) == 0 for entry in total)


def disjoint_supports(parities, budget, used=frozenset()):
    """Every tuple of pairwise disjoint generator sets inside range(budget) whose sizes
    have the given parities"""
    if not parities:
        yield ()
        return
    free = [g for g in range(budget) if g not in used]
    for size in range(parities[0], len(free) + 1, 2):
        for support in itertools.combinations(free, size):
            for rest in disjoint_supports(parities[1:], budget, used | set(support)):
                yield (support,) + rest


def grassmann_exhaustive_oracle(f, budget):
    """f multilinear on M_{1,1}(E): evaluate on every basis tuple e_S E_ij with
    pairwise disjoint supports S inside the first `budget` generators"""
    variables = f.variables()
    position = {v: t for t, v in enumerate(variables)}
    units = {0: [(1, 1), (2, 2)], 1: [(1, 2), (2, 1)]}
    words = [(tuple(position[v] for v in mono.letters), coeff.as_fraction()) for mono, coeff in f.terms.items()]
    plans = []
    for choice in itertools.product(*[units[v.degree] for v in variables]):
        paths = []
        for word, coeff in words:
            row, col = choice[word[0]]
            for t in word[1:]:
                i, j = choice[t]
                if i != col:
                    break
                col = j
            else:
                paths.append((word, coeff, (row, col)))
        if paths:
            plans.append(paths)
    for supports in disjoint_supports([v.degree for v in variables], budget):
        for paths in plans:
            total = {}
            for word, coeff, key in paths:
                generators = [g for t in word for g in supports[t]]
                total[key] = total.get(key, 0) + inversion_sign(generators) * coeff
            if any(value != 0 for value in total.values()):
                return False
    return True


def multilinear_z2(coefficients, degrees, group):
    """sum over S_d of c_sigma x_sigma(1) ... x_sigma(d)"""
    d = len(degrees)
    words = list(itertools.permutations(range(1, d + 1)))
    terms = {GMonomial(tuple(GVar(i, degrees[i - 1]) for i in w)): c for w, c in zip(words, coefficients)}
    return GPolynomial(terms, group)


class TestCrossedProductInstances:
    def test_m2_z2(self, m2z2, poly):
        result = classify_primeness(m2z2.grading, 2)
        cert = result.certificate
        assert result.status == FAILS
        assert cert.f == poly(WITNESS, m2z2.group)
        assert cert.P.diagonal() == [1, -1]
        assert cert.k == 2
        assert check_graded_central(cert.f, m2z2).status == NEITHER
        assert check_graded_central(product_of_copies(cert.f, 2), m2z2).status == CENTRAL
        assert cert.P ** 2 == RingMatrix.identity(2)

    def test_m3_z3(self, m3z3, m3z3_zeta):
        assert classify_primeness(m3z3.grading, 2).status == HOLDS
        result = classify_primeness(m3z3_zeta.grading, 6, conductor=3)
        cert = result.certificate
        assert result.status == FAILS
        assert cert.P.diagonal() == [ONE, root_of_unity(3, 1), root_of_unity(3, 2)]
        assert cert.P ** 3 == RingMatrix.identity(3)
        assert check_graded_central(cert.f, m3z3_zeta).status == NEITHER
        assert check_graded_central(product_of_copies(cert.f, 3), m3z3_zeta).status == CENTRAL

    def test_m2_z4_not_crossed(self, m2z4):
        assert aut_subgroup_H(m2z4.grading) == [Permutation.identity(2)]
        result = classify_primeness(m2z4.grading, 2, verify=False)
        cert = result.certificate
        assert result.orbit_list == [[1], [2]]
        assert cert.P == RingMatrix.diag([1, -1])
        assert cert.lam.is_trivial()
        check = verify_certificate(cert, m2z4)
        assert check.power_is_scalar and check.evaluates_to_P

    def test_values_on_line_closed_under_neutral_commutators(self, m2z2, poly):
        f = poly(WITNESS, m2z2.group)
        P = scalar_line_certificate(f, m2z2)
        assert commutator_closure(f, m2z2, span_of([P])) is True

    def test_values_in_neutral_component_closed_under_neutral_commutators(self, m2z2, poly):
        f = poly(WITNESS, m2z2.group)
        V = span_of(homogeneous_basis(m2z2, m2z2.group.identity))
        assert commutator_closure(f, m2z2, V) is True


class TestGrassmannInstances:
    def test_square_of_squares(self, m11e, poly):
        G = m11e.group
        f = poly("x1[g]^2*x2[g]^2", G)
        assert check_graded_central(f, m11e).status == CENTRAL
        assert check_graded_central(poly("x1[g]^2", G), m11e).status == NEITHER
        assert check_graded_central(poly("x2[g]^2", G), m11e).status == NEITHER
        assert stability_recheck(f, m11e).status == CENTRAL

    def test_transfer_exhaustive(self, z2):
        """Every multilinear f of degree <= 3 with coefficients +-1 and every degree pattern"""
        cases = 0
        for d in (1, 2, 3):
            words = len(list(itertools.permutations(range(d))))
            for degrees in itertools.product((0, 1), repeat=d):
                for coefficients in itertools.product((1, -1), repeat=words):
                    f = multilinear_z2(coefficients, degrees, z2)
                    result = check_transfer_star(f, 1, 1, 6)
                    assert result.agree, f"disagreement for {f}"
                    cases += 1
        assert cases == 532


class TestOracles:
    def test_generic_oracle_random(self, m2, m2z2):
        rng = random.Random(2024)
        for k in range(30):
            A = m2 if k % 2 == 0 else m2z2
            f = random_multihomogeneous(rng, A.group, variables=2, max_degree=4)
            assert check_graded_identity(f, A) == generic_identity_oracle(f, A), f"mismatch for {f}"

    @pytest.mark.parametrize("text, on_z2", [
        ("[[x1, x2]^2, x3]", False),
        ("[x1, x2]", True),
        ("x1[g]*x2[g]*x3[g] - x3[g]*x2[g]*x1[g]", True),
        ("x1[g]*x2[g] - x2[g]*x1[g]", True),
        ("[x1, x2]^2", False),
    ])
    def test_generic_oracle_known(self, m2, m2z2, poly, text, on_z2):
        A = m2z2 if on_z2 else m2
        f = poly(text, A.group)
        assert check_graded_identity(f, A) == generic_identity_oracle(f, A)

    def test_grassmann_reduction_against_exhaustive_enumeration(self, z2, poly):
        """Degree <= 3 at budget 2 * degree"""
        rng = random.Random(17)
        cases = [poly("[x1, x2]", z2), poly("x1[g]*x2[g]*x3[g] + x3[g]*x2[g]*x1[g]", z2),
                 poly("x1[g]*x2[g] + x2[g]*x1[g]", z2), poly("x1[g]*x2[g] - x2[g]*x1[g]", z2)]
        for _ in range(12):
            d = rng.randint(1, 3)
            degrees = [rng.randint(0, 1) for _ in range(d)]
            coefficients = [rng.choice((1, -1, 0)) for _ in itertools.permutations(range(d))]
            if any(coefficients):
                cases.append(multilinear_z2(coefficients, degrees, z2))
        for f in cases:
            d = len(f.variables())
            A = GradedMatrixAlgebra.mab(1, 1, budget=2 * d)
            assert check_graded_identity(f, A) == grassmann_exhaustive_oracle(f, 2 * d), f"mismatch for {f}"

    def test_grassmann_reduction_degree_four(self, z2, poly):
        """Degree 4 at budget 8"""
        rng = random.Random(41)
        identity = poly("[x1, x2]*x3[g]*x4[g]", z2)
        cases = [identity, poly("x1[g]*x2[g]*x3[g]*x4[g] - x4[g]*x3[g]*x2[g]*x1[g]", z2),
                 poly("[x1[g], x2[g]]*[x3, x4[g]]", z2)]
        for _ in range(3):
            degrees = [rng.randint(0, 1) for _ in range(4)]
            coefficients = [rng.choice((1, -1, 0)) for _ in itertools.permutations(range(4))]
            cases.append(multilinear_z2(coefficients, degrees, z2))
        A = GradedMatrixAlgebra.mab(1, 1, budget=8)
        assert check_graded_identity(identity, A)
        for f in cases:
            assert check_graded_identity(f, A) == grassmann_exhaustive_oracle(f, 8), f"mismatch for {f}"

    def test_star_of_odd_identity_is_identity(self, z2, poly):
        f = poly("x1[g]*x2[g]*x3[g] + x3[g]*x2[g]*x1[g]", z2)
        assert grassmann_exhaustive_oracle(f, 6)


class TestScans:
    def test_m2_z2(self, m2z2):
        report = primeness_enumeration_test(m2z2, 2, ("1", "-1"))
        assert report.counterexamples
        assert report.consistent
        for item in report.counterexamples:
            P = scalar_line_certificate(item.f, m2z2)
            assert P is not None and P.is_invertible_diagonal()

    def test_m11e(self, m11e):
        report = primeness_enumeration_test(m11e, 2, ("1", "-1"))
        assert report.expected == FAILS
        assert report.counterexamples
        assert report.consistent

    def test_m3_z3(self, m3z3):
        report = primeness_enumeration_test(m3z3, 2, ("1", "-1"))
        assert report.expected == HOLDS
        assert report.violations == []
        assert report.consistent


def test_ordinary_square_of_commutator(m2, poly):
    f = poly("[x1, x2]^2", TRIVIAL_GROUP)
    result = check_graded_central_ordinary(f, m2, companion=f)
    assert result.verdict.status == CENTRAL
    assert result.product_verdict.status == CENTRAL


def test_derivation_suite_50_cases():
    (result,) = run_suites(2024, cases=50, names=["derivation"])
    assert result.cases == 50
    assert result.passed
