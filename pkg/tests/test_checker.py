import dataclasses
import itertools

import pytest

from core.checker import (
    CENTRAL, FAILS, HOLDS, IDENTITY, NEITHER, UNKNOWN, CentralProduct, ScanReport, candidate_polynomials,
    check_graded_central, check_graded_central_ordinary, check_graded_identity, check_transfer_star,
    classify_primeness, commutator_closure, expected_primeness, lift_ordinary, mne_instance_check,
    primeness_enumeration_test, scalar_line_certificate, span_of, stability_recheck, value_component,
    verify_certificate, verify_evidence,
)
from core.errors import BudgetExceeded, InvariantViolation, NonMultilinear, PreconditionViolated, SizeLimit
from core.freealg import GMonomial, GPolynomial, GVar, rename_disjoint
from core.groups import TRIVIAL_GROUP, cyclic_product
from core.matalg import ElementaryGrading, GradedMatrixAlgebra, RingMatrix, homogeneous_basis
from core.scalars import ONE, root_of_unity

WITNESS = "x1[g]*x2[g] - x2[g]*x1[g]"


def standard_polynomial(k, group):
    """s_k = sum over S_k of sign(sigma) x_sigma(1) ... x_sigma(k)"""
    terms = {}
    for perm in itertools.permutations(range(1, k + 1)):
        inversions = sum(1 for a, b in itertools.combinations(perm, 2) if a > b)
        terms[GMonomial(tuple(GVar(i) for i in perm))] = -1 if inversions % 2 else 1
    return GPolynomial(terms, group)


class TestIdentities:
    def test_neutral_commutator_on_m2z2(self, m2z2, poly):
        """Test the neutral component of M_2 graded by (e, g) is commutative"""
        assert check_graded_identity(poly("[x1, x2]", m2z2.group), m2z2)
        assert not check_graded_identity(poly(WITNESS, m2z2.group), m2z2)

    def test_odd_cubic_identity(self, m2z2, poly):
        f = poly("x1[g]*x2[g]*x3[g] - x3[g]*x2[g]*x1[g]", m2z2.group)
        assert check_graded_identity(f, m2z2)

    def test_standard_polynomials(self, m2):
        assert check_graded_identity(standard_polynomial(4, m2.group), m2)
        assert not check_graded_identity(standard_polynomial(3, m2.group), m2)

    def test_zero_polynomial(self, m2z2):
        assert check_graded_identity(GPolynomial({}, m2z2.group), m2z2)


class TestCentrality:
    def test_identity_verdict(self, m2z2, poly):
        verdict = check_graded_central(poly("[x1, x2]", m2z2.group), m2z2)
        assert verdict.status == IDENTITY
        assert verdict.evidence is None
        assert verify_evidence(verdict, m2z2)

    def test_central_verdict(self, m2z2, poly):
        verdict = check_graded_central(poly("x1[g]*x2[g] + x2[g]*x1[g]", m2z2.group), m2z2)
        assert verdict.status == CENTRAL
        assert verdict.budget is None
        assert verdict.budget_note == ""
        assert verify_evidence(verdict, m2z2)

    def test_neither_verdict_has_checkable_evidence(self, m2z2, poly):
        verdict = check_graded_central(poly(WITNESS, m2z2.group), m2z2)
        assert verdict.status == NEITHER
        ev = verdict.evidence
        assert ev.against is not None
        assert ev.value * ev.against != ev.against * ev.value
        assert verify_evidence(verdict, m2z2)

    def test_tampered_evidence_is_rejected(self, m2z2, poly):
        verdict = check_graded_central(poly(WITNESS, m2z2.group), m2z2)
        verdict.evidence.value = verdict.evidence.value.scale(2)
        assert not verify_evidence(verdict, m2z2)

    def test_grassmann_square_of_squares(self, m11e, poly):
        """Test x^2 y^2 is central on M_{1,1}(E) while x^2 is not"""
        G = m11e.group
        verdict = check_graded_central(poly("x1[g]^2*x2[g]^2", G), m11e)
        assert verdict.status == CENTRAL
        assert verdict.budget_note == "within Grassmann budget 6"
        assert verify_evidence(verdict, m11e)
        square = check_graded_central(poly("x1[g]^2", G), m11e)
        assert square.status == NEITHER
        assert verify_evidence(square, m11e)

    def test_stability(self, m11e, m2z2, poly):
        f = poly("x1[g]^2*x2[g]^2", m11e.group)
        assert stability_recheck(f, m11e).status == CENTRAL
        assert stability_recheck(poly(WITNESS, m2z2.group), m2z2) is None

    def test_budget_exceeded(self, poly):
        A = GradedMatrixAlgebra.mab(1, 1, budget=2)
        f = poly("x1[g]*x2[g]", A.group)
        assert not check_graded_identity(f, A)
        with pytest.raises(BudgetExceeded) as info:
            check_graded_central(f, A)
        assert info.value.needed == 3
        assert info.value.budget == 2


class TestValueSpans:
    def test_scalar_line_of_witness(self, m2z2, poly):
        P = scalar_line_certificate(poly(WITNESS, m2z2.group), m2z2)
        assert P.diagonal() == [1, -1]
        assert P.is_invertible_diagonal()

    def test_no_scalar_line(self, m2z2, poly):
        assert scalar_line_certificate(poly("x1[g]*x2[g]", m2z2.group), m2z2) is None

    def test_scalar_line_needs_mnf(self, m11e, poly):
        with pytest.raises(PreconditionViolated):
            scalar_line_certificate(poly(WITNESS, m11e.group), m11e)

    @pytest.mark.parametrize("text, component", [("x1[g]", 1), ("x1[g]*x2[g]", 0), ("x1 + x2[g]", None)])
    def test_value_component(self, m2z2, poly, text, component):
        assert value_component(poly(text, m2z2.group), m2z2) == component

    def test_commutator_closure(self, m2z2, poly):
        """Test values on the line of P stay there after commuting with the neutral component"""
        f = poly(WITNESS, m2z2.group)
        assert commutator_closure(f, m2z2, span_of([RingMatrix.diag([1, -1])])) is True
        assert commutator_closure(f, m2z2, span_of([RingMatrix.unit(2, 1, 2)])) is None

    @pytest.mark.parametrize("text, degree", [("x1[g]", 1), ("x1[g]*x2[g]", 0)])
    def test_commutator_closure_on_component(self, m2z2, m11e, poly, text, degree):
        """Test a whole homogeneous component as V, on M_2 and on M_{1,1}(E)"""
        for A in (m2z2, m11e):
            f = poly(text, A.group)
            assert commutator_closure(f, A, span_of(homogeneous_basis(A, degree))) is True
            assert commutator_closure(f, A, span_of(homogeneous_basis(A, 1 - degree))) is None


class TestOrdinary:
    def test_lift(self, m2z2, poly):
        lifted = lift_ordinary(poly("x1", TRIVIAL_GROUP), m2z2)
        assert lifted == poly("x1 + x2[g]", m2z2.group)

    def test_lift_rejects_graded_variables(self, m2z2, poly):
        with pytest.raises(PreconditionViolated):
            lift_ordinary(poly("x1[g]", m2z2.group), m2z2)

    def test_square_of_commutator_on_m2(self, m2, poly):
        f = poly("[x1, x2]^2", TRIVIAL_GROUP)
        result = check_graded_central_ordinary(f, m2, companion=f)
        assert result.verdict.status == CENTRAL
        assert result.product_verdict.status == CENTRAL
        assert result.component == 0

    def test_commutator_is_not_central(self, m2, poly):
        result = check_graded_central_ordinary(poly("[x1, x2]", TRIVIAL_GROUP), m2)
        assert result.verdict.status == NEITHER
        assert result.product_verdict is None


class TestClassifier:
    def test_m2_z2(self, m2z2):
        result = classify_primeness(m2z2.grading, 2)
        assert result.status == FAILS
        assert result.crossed
        assert len(result.H) == 2
        cert = result.certificate
        assert cert.k == 2
        assert cert.P.diagonal() == [1, -1]
        assert not cert.lam.is_trivial()
        assert str(cert.f) == WITNESS

    def test_m3_z3_over_q(self, m3z3):
        result = classify_primeness(m3z3.grading, 2)
        assert result.status == HOLDS
        assert result.certificate is None
        assert result.characters == 1

    def test_m3_z3_over_cube_roots(self, m3z3_zeta):
        result = classify_primeness(m3z3_zeta.grading, 6, conductor=3)
        assert result.status == FAILS
        assert result.characters == 3
        cert = result.certificate
        assert cert.k == 3
        assert cert.P.diagonal() == [ONE, root_of_unity(3, 1), root_of_unity(3, 2)]

    def test_not_crossed_product(self, m2z4):
        """Test (e, g) in Z4: H is trivial and the witness separates the two orbits"""
        result = classify_primeness(m2z4.grading, 2)
        assert result.status == FAILS
        assert not result.crossed
        assert len(result.H) == 1
        assert result.orbit_list == [[1], [2]]
        cert = result.certificate
        assert cert.k == 2
        assert cert.lam.is_trivial()
        assert cert.P.diagonal() == [1, -1]

    def test_repeated_entries(self, z2):
        with pytest.raises(PreconditionViolated):
            classify_primeness(ElementaryGrading(z2, (0, 0)), 2)

    def test_size_limit(self):
        Z9 = cyclic_product([9])
        with pytest.raises(SizeLimit):
            classify_primeness(ElementaryGrading(Z9, tuple(range(9))), 2)

    def test_verify_certificate(self, m2z2):
        cert = classify_primeness(m2z2.grading, 2, verify=False).certificate
        check = verify_certificate(cert, m2z2)
        assert check.f_verdict.status == NEITHER
        assert check.product_verdict.status == CENTRAL
        assert check.power_is_scalar
        assert check.evaluates_to_P

    def test_broken_certificate(self, m2z2):
        cert = classify_primeness(m2z2.grading, 2, verify=False).certificate
        with pytest.raises(InvariantViolation):
            verify_certificate(dataclasses.replace(cert, k=1), m2z2)

    def test_expected_primeness(self, m2z2, m3z3, m3z3_zeta, m11e, z2, z3):
        assert expected_primeness(m2z2) == FAILS
        assert expected_primeness(m3z3) == HOLDS
        assert expected_primeness(m3z3_zeta) == FAILS
        assert expected_primeness(m11e) == FAILS
        assert expected_primeness(GradedMatrixAlgebra.mne(ElementaryGrading(z2, (0, 1)), 4)) == UNKNOWN
        assert expected_primeness(GradedMatrixAlgebra.mne(ElementaryGrading(z3, (0, 1, 2)), 4)) == HOLDS
        assert expected_primeness(GradedMatrixAlgebra.mnf(ElementaryGrading(z2, (0, 0)))) == UNKNOWN


class TestTransfer:
    def test_witness_transfers(self, z2, poly):
        result = check_transfer_star(poly(WITNESS, z2), 1, 1, 6)
        assert result.f_star == poly("x1[g]*x2[g] + x2[g]*x1[g]", z2)
        assert not result.base_identity
        assert result.agree

    def test_identity_transfers(self, z2, poly):
        result = check_transfer_star(poly("[x1, x2]", z2), 1, 1, 6)
        assert result.base_identity
        assert result.star_identity

    def test_preconditions(self, z2, z3, poly):
        with pytest.raises(PreconditionViolated):
            check_transfer_star(poly("x1*x2", z3), 1, 1, 4)
        with pytest.raises(NonMultilinear):
            check_transfer_star(poly("x1[g]^2", z2), 1, 1, 4)


class TestEnumeration:
    def test_candidates_trivial_group(self):
        """Test x1, x1^2, x1x2, x1x2 + x2x1 and x1x2 - x2x1"""
        candidates = candidate_polynomials(TRIVIAL_GROUP, [0], 2, [ONE, -ONE])
        assert len(candidates) == 5
        assert all(c.sorted_terms()[0][1] == 1 for c in candidates)

    def test_candidates_z2(self, z2):
        candidates = candidate_polynomials(z2, [0, 1], 2, [ONE, -ONE])
        assert len(candidates) == 14
        assert len({str(c) for c in candidates}) == 14

    def test_scan_m2_z2_finds_counterexample(self, m2z2):
        report = primeness_enumeration_test(m2z2, 2, ("1", "-1"))
        assert report.expected == FAILS
        assert report.candidates == 14
        assert report.counterexamples
        assert report.consistent

    def test_scan_checks_every_ordered_pair(self, m2z2):
        """Test g*f is checked as well as f*g"""
        report = primeness_enumeration_test(m2z2, 2, ("1", "-1"))
        candidates = candidate_polynomials(m2z2.group, m2z2.support(), 2, [ONE, -ONE])
        live = [c for c in candidates if check_graded_central(c, m2z2).status != IDENTITY]
        expected = set()
        for f in live:
            shift = max(v.index for v in f.variables())
            for g in live:
                g = rename_disjoint(g, shift)
                if check_graded_central(f * g, m2z2).status == CENTRAL:
                    expected.add((str(f), str(g)))
        assert report.pairs == len(live) ** 2
        assert {(str(c.f), str(c.g)) for c in report.central_products} == expected

    @pytest.mark.parametrize("maxdeg", [0, 4])
    def test_maxdeg_range(self, m2z2, maxdeg):
        with pytest.raises(PreconditionViolated):
            primeness_enumeration_test(m2z2, maxdeg, ("1",))

    def test_report_consistency(self, poly):
        f = poly("x1", TRIVIAL_GROUP)
        bad = CentralProduct(f, f, NEITHER, NEITHER)
        good = CentralProduct(f, f, CENTRAL, CENTRAL)
        assert not ScanReport(HOLDS, 1, 1, [bad]).consistent
        assert len(ScanReport(HOLDS, 1, 1, [bad]).violations) == 1
        assert ScanReport(HOLDS, 1, 1, [good]).consistent
        assert not ScanReport(FAILS, 1, 1, [good]).consistent
        assert ScanReport(FAILS, 1, 1, [bad]).consistent
        assert ScanReport(UNKNOWN, 1, 1).consistent


class TestMnE:
    def test_witness_on_mne(self, z2):
        report = mne_instance_check(ElementaryGrading(z2, (0, 1)), budget=6)
        assert report.classification.status == FAILS
        assert report.witness_verdicts[0].status == NEITHER
        assert report.scan is None
        assert report.consistent

    def test_scan_on_mne_when_primeness_holds(self, z3):
        report = mne_instance_check(ElementaryGrading(z3, (0, 1, 2)), budget=4, maxdeg=1)
        assert report.classification.status == HOLDS
        assert report.scan.expected == HOLDS
        assert report.scan.candidates == 3
        assert report.consistent
