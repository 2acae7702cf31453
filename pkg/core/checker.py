"""
Decision procedures for graded identities and graded central polynomials, the
primeness classifier for elementary gradings with witness certificates, the
star-transform transfer check and the enumeration test of the primeness property.

Identity and centrality are decided on spans: every multihomogeneous component is
split into factors in disjoint variables, each factor is fully multilinearized and
evaluated on all admissible tuples of homogeneous basis elements, and the values of
a product are spanned by the products of the factors' values.
"""
import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from loguru import logger

from core.errors import (
    BudgetExceeded, InvariantViolation, NonMultilinear, PreconditionViolated, SizeLimit,
)
from core.freealg import (
    GMonomial, GPolynomial, GVar, commutator, factor_disjoint, multihomogeneous_components,
    multilinearize, product_of_copies, rename_disjoint, rename_variables, substitute, transform_star,
)
from core.grassmann import MAX_BUDGET, canonical_reordering_sign
from core.groups import Character, FiniteGroup, homs_to_roots, orbits, trivial_character
from core.linalg import LinearSpan
from core.matalg import (
    ElementaryGrading, GradedMatrixAlgebra, Key, MAB, MNF, P_matrix, RingMatrix,
    evaluate, is_crossed_product, witness_polynomial,
)
from core.regular import grassmann_bicharacter
from core.scalars import CycloScalar, ONE, ZERO, parse_scalar, torsion_order

IDENTITY, CENTRAL, NEITHER = "Identity", "Central", "Neither"
HOLDS, FAILS, UNKNOWN = "Holds", "Fails", "Unknown"


@dataclass
class Evidence:
    """An admissible substitution of a multilinear piece and its value"""
    polynomial: GPolynomial
    substitution: Dict[GVar, RingMatrix]
    value: RingMatrix
    against: Optional[RingMatrix] = None   # homogeneous element the value does not commute with
    against_degree: Optional[int] = None


@dataclass
class Verdict:
    status: str
    evidence: Optional[Evidence] = None
    budget: Optional[int] = None

    @property
    def budget_note(self) -> str:
        if self.budget is None:
            return ""
        return f"within Grassmann budget {self.budget}"


@dataclass
class PieceSpan:
    component: GPolynomial
    polynomial: GPolynomial          # product of the multilinearized factors
    span: LinearSpan                  # members tagged with their substitution
    generators: Dict[GVar, int]       # Grassmann generator bit of each possibly odd variable


@dataclass
class ValueSpan:
    algebra: GradedMatrixAlgebra
    pieces: List[PieceSpan]
    generators_used: int

    def is_zero(self) -> bool:
        return all(p.span.is_zero() for p in self.pieces)

    def combined(self) -> LinearSpan:
        total = LinearSpan()
        for piece in self.pieces:
            total.extend(piece.span)
        return total

    def members(self):
        for piece in self.pieces:
            for vector, tag in piece.span.members:
                yield piece, vector, tag


# evaluation on tuples of basis elements

def _evaluate_on_units(f: GPolynomial, n: int, choice: Dict[GVar, Key]) -> Dict[Key, CycloScalar]:
    """f at the substitution v -> e_mask E_ij for choice[v] = (i, j, mask)"""
    out: Dict[Key, CycloScalar] = {}
    for mono, coeff in f.terms.items():
        if not mono.letters:
            for i in range(1, n + 1):
                out[(i, i, 0)] = out.get((i, i, 0), ZERO) + coeff
            continue
        row, col, mask = choice[mono.letters[0]]
        negative = False
        for v in mono.letters[1:]:
            i, j, m = choice[v]
            if col != i or mask & m:
                break
            if canonical_reordering_sign(mask, m) < 0:
                negative = not negative
            mask |= m
            col = j
        else:
            key = (row, col, mask)
            out[key] = out.get(key, ZERO) + (-coeff if negative else coeff)
    return {k: v for k, v in out.items() if not v.is_zero()}


def _slot_choices(A: GradedMatrixAlgebra, var: GVar, generators: Dict[GVar, int]) -> List[Key]:
    choices = []
    for i, j in A.grading.units_of_degree(var.degree):
        for p in A.entry_parities(var.degree):
            choices.append((i, j, (1 << generators[var]) if p else 0))
    return choices


def _to_matrix(A: GradedMatrixAlgebra, vector: Dict[Key, CycloScalar]) -> RingMatrix:
    return RingMatrix(A.n, vector, A.budget)


def _factor_span(factor: GPolynomial, A: GradedMatrixAlgebra, generators: Dict[GVar, int]) -> LinearSpan:
    variables = factor.variables()
    span = LinearSpan()
    count = 0
    for keys in itertools.product(*[_slot_choices(A, v, generators) for v in variables]):
        choice = dict(zip(variables, keys))
        value = _evaluate_on_units(factor, A.n, choice)
        count += 1
        if value:
            span.add(value, {v: RingMatrix(A.n, {k: ONE}, A.budget) for v, k in choice.items()})
    logger.debug(f"factor with {len(variables)} variables: {count} tuples, span dimension {span.dimension}")
    return span


def _product_span(left: LinearSpan, right: LinearSpan, A: GradedMatrixAlgebra) -> LinearSpan:
    span = LinearSpan()
    for v1, t1 in left.members:
        m1 = _to_matrix(A, v1)
        for v2, t2 in right.members:
            product = m1 * _to_matrix(A, v2)
            if not product.is_zero():
                span.add(product.entries, {**t1, **t2})
    return span


def _may_be_odd(A: GradedMatrixAlgebra, var: GVar) -> bool:
    return 1 in A.entry_parities(var.degree)


def value_span(f: GPolynomial, A: GradedMatrixAlgebra, reserve: int = 0) -> ValueSpan:
    """Span of the values of the multilinear pieces of f over admissible basis tuples.

    reserve: Grassmann generators kept free for the caller (one for a commutator test).
    """
    pieces: List[PieceSpan] = []
    plan = []
    for component in multihomogeneous_components(f):
        factors = []
        offset = 0
        for factor in factor_disjoint(component):
            ml = multilinearize(factor)
            mapping = {v.index: offset + k for k, v in enumerate(ml.variables(), start=1)}
            ml = rename_variables(ml, mapping)
            offset += len(mapping)
            factors.append(ml)
        plan.append((component, factors))
    needed = 0
    for component, factors in plan:
        odd = sum(1 for ml in factors for v in ml.variables() if _may_be_odd(A, v))
        needed = max(needed, odd)
    if A.uses_grassmann and needed + reserve > A.budget:
        raise BudgetExceeded(needed + reserve, A.budget)
    for component, factors in plan:
        generators: Dict[GVar, int] = {}
        for ml in factors:
            for v in ml.variables():
                if _may_be_odd(A, v):
                    generators[v] = len(generators)
        span = None
        polynomial = None
        for ml in factors:
            factor_span = _factor_span(ml, A, generators)
            span = factor_span if span is None else _product_span(span, factor_span, A)
            polynomial = ml if polynomial is None else polynomial * ml
            if span.is_zero():
                break
        pieces.append(PieceSpan(component, polynomial, span, generators))
    return ValueSpan(A, pieces, needed)


def _commutation_partners(A: GradedMatrixAlgebra, generator: int) -> List[Tuple[int, RingMatrix]]:
    """One homogeneous basis representative per (degree, unit, parity), with a
    Grassmann generator not used by the values"""
    partners = []
    for g in A.support():
        for i, j in A.grading.units_of_degree(g):
            for p in A.entry_parities(g):
                partners.append((g, RingMatrix(A.n, {(i, j, (1 << generator) if p else 0): ONE}, A.budget)))
    return partners


# identity and centrality

def check_graded_identity(f: GPolynomial, A: GradedMatrixAlgebra) -> bool:
    return value_span(f, A).is_zero()


def check_graded_central(f: GPolynomial, A: GradedMatrixAlgebra) -> Verdict:
    """Identity, Central (every value commutes with every homogeneous element) or Neither"""
    budget = A.budget if A.uses_grassmann else None
    spans = value_span(f, A, reserve=1 if A.uses_grassmann else 0)
    if spans.is_zero():
        return Verdict(IDENTITY, budget=budget)
    partners = _commutation_partners(A, spans.generators_used)
    first: Optional[Evidence] = None
    for piece, vector, tag in spans.members():
        value = _to_matrix(A, vector)
        if first is None:
            first = Evidence(piece.polynomial, tag, value)
        for g, y in partners:
            if value * y != y * value:
                logger.debug(f"value {value.text()} does not commute with {y.text()}")
                return Verdict(NEITHER, Evidence(piece.polynomial, tag, value, y, g), budget)
    return Verdict(CENTRAL, first, budget)


def verify_evidence(verdict: Verdict, A: GradedMatrixAlgebra) -> bool:
    """The stored substitution re-evaluates to the stored value (and fails to commute
    with the stored partner for Neither)"""
    ev = verdict.evidence
    if ev is None:
        return verdict.status == IDENTITY
    value = evaluate(ev.polynomial, A, ev.substitution)
    if value != ev.value or value.is_zero():
        return False
    if verdict.status == NEITHER:
        return ev.against is not None and value * ev.against != ev.against * value
    return True


def stability_recheck(f: GPolynomial, A: GradedMatrixAlgebra, extra: int = 2) -> Optional[Verdict]:
    """The same check at budget B + extra; None for algebras without Grassmann entries"""
    if not A.uses_grassmann:
        return None
    wider = GradedMatrixAlgebra(A.kind, A.grading, min(A.budget + extra, MAX_BUDGET),
                                A.conductor, A.split, A.spec_text)
    return check_graded_central(f, wider)


def scalar_line_certificate(f: GPolynomial, A: GradedMatrixAlgebra) -> Optional[RingMatrix]:
    """The common direction P of all values when they lie on one line, normalized so
    its first non-zero diagonal entry is 1"""
    if A.kind != MNF:
        raise PreconditionViolated("scalar line certificates are computed on M_n(F)")
    line = value_span(f, A).combined()
    if line.dimension != 1:
        return None
    vector = line.members[0][0]
    diagonal = sorted(k for k in vector if k[0] == k[1])
    lead = vector[diagonal[0]] if diagonal else vector[min(vector)]
    P = _to_matrix(A, vector).scale(lead.inverse())
    copy = rename_disjoint(f, max((v.index for v in f.variables()), default=0))
    if check_graded_central(f * copy, A).status == CENTRAL and not P.is_invertible_diagonal():
        raise InvariantViolation(f"central square but the value line {P.text()} is not an invertible diagonal")
    return P


def value_component(f: GPolynomial, A: GradedMatrixAlgebra) -> Optional[int]:
    """The homogeneous component containing every value of f, if there is one"""
    candidates = set(A.support())
    for _, vector, _ in value_span(f, A).members():
        candidates = {g for g in candidates if all(A.admits(key, g) for key in vector)}
        if not candidates:
            return None
    return min(candidates) if candidates else None


def values_in_subspace(f: GPolynomial, A: GradedMatrixAlgebra, V: LinearSpan) -> bool:
    return all(V.contains(vector) for _, vector, _ in value_span(f, A).members())


def commutator_closure(f: GPolynomial, A: GradedMatrixAlgebra, V: LinearSpan) -> Optional[bool]:
    """When every value of f lies in V, whether every value of [f, y] with y neutral
    lies in V too; None when the premise fails"""
    if not values_in_subspace(f, A, V):
        return None
    y_index = max((v.index for v in f.variables()), default=0) + 1
    y = GPolynomial.variable(y_index, A.group.identity, f.group)
    return values_in_subspace(commutator(f, y), A, V)


def span_of(matrices: Sequence[RingMatrix]) -> LinearSpan:
    span = LinearSpan()
    for m in matrices:
        span.add(m.entries)
    return span


# ordinary polynomials

def lift_ordinary(f: GPolynomial, A: GradedMatrixAlgebra) -> GPolynomial:
    """x_i -> sum over the support of fresh x_{i,g}: an ordinary polynomial as a graded one"""
    if any(v.degree != f.group.identity for v in f.variables()):
        raise PreconditionViolated("ordinary polynomials have all variables of trivial degree")
    support = A.support()
    s = len(support)
    zero = GPolynomial({}, A.group)
    assignment = {}
    for v in f.variables():
        image = zero
        for k, g in enumerate(support, start=1):
            image = image + GPolynomial.variable((v.index - 1) * s + k, g, A.group)
        assignment[v] = image
    lifted = substitute(GPolynomial(f.terms, A.group) if f.group.order == 1 else f, assignment,
                        check_degrees=False)
    return lifted


@dataclass
class OrdinaryResult:
    verdict: Verdict
    product_verdict: Optional[Verdict] = None
    component: Optional[int] = None


def check_graded_central_ordinary(f: GPolynomial, A: GradedMatrixAlgebra,
                                  companion: Optional[GPolynomial] = None) -> OrdinaryResult:
    """Centrality of an ordinary polynomial over the whole algebra; with a companion g,
    also f*g and the component holding every value of f"""
    lifted = lift_ordinary(f, A)
    result = OrdinaryResult(check_graded_central(lifted, A))
    if companion is not None:
        shift = max((v.index for v in f.variables()), default=0)
        product = lift_ordinary(f * rename_disjoint(companion, shift), A)
        result.product_verdict = check_graded_central(product, A)
        result.component = value_component(lifted, A)
    return result


# the primeness classifier

@dataclass
class WitnessCertificate:
    f: GPolynomial
    P: RingMatrix
    k: int
    lam: Character
    note: str


@dataclass
class Classification:
    status: str
    grading: ElementaryGrading
    crossed: bool
    reason: str
    H: list
    orbit_list: List[List[int]]
    characters: int
    certificate: Optional[WitnessCertificate] = None


def classify_primeness(grading: ElementaryGrading, r: int, conductor: int = 1,
                       verify: bool = True) -> Classification:
    """Primeness holds iff the grading is a crossed product and the support has no
    non-trivial character into mu_r"""
    if not grading.is_distinct:
        raise PreconditionViolated(f"tuple ({', '.join(grading.names())}) has repeated entries")
    if grading.n > 8:
        raise SizeLimit(f"classification needs n <= 8, got {grading.n}")
    crossed = is_crossed_product(grading)
    H = crossed.H
    H_group = FiniteGroup.from_permutations(H)
    orbit_list = orbits(H, grading.n)
    representatives = [orbit[0] for orbit in orbit_list]
    if not crossed.is_crossed:
        lam = trivial_character(H_group)
        P = RingMatrix.zero(grading.n)
        for i in representatives[:-1]:
            P = P + P_matrix(H, lam, i)
        P = P - P_matrix(H, lam, representatives[-1])
        f = witness_polynomial(grading, P.diagonal())
        certificate = WitnessCertificate(f, P, 2, lam,
                                         f"not a crossed product ({crossed.reason}); {len(orbit_list)} orbits of H")
        logger.info(f"classification: Fails, not a crossed product ({crossed.reason})")
        result = Classification(FAILS, grading, False, crossed.reason, H, orbit_list, 1, certificate)
    else:
        characters = homs_to_roots(H_group, r)
        nontrivial = [c for c in characters if not c.is_trivial()]
        if nontrivial:
            lam = nontrivial[0]
            P = P_matrix(H, lam, representatives[0])
            f = witness_polynomial(grading, P.diagonal())
            certificate = WitnessCertificate(f, P, grading.n, lam,
                                             f"crossed product with {len(characters)} characters into mu_{r}")
            logger.info(f"classification: Fails, non-trivial character into mu_{r}")
            result = Classification(FAILS, grading, True, crossed.reason, H, orbit_list, len(characters),
                                    certificate)
        else:
            logger.info(f"classification: Holds, crossed product without characters into mu_{r}")
            return Classification(HOLDS, grading, True, crossed.reason, H, orbit_list, len(characters))
    if verify:
        verify_certificate(result.certificate, GradedMatrixAlgebra.mnf(grading, conductor))
    return result


@dataclass
class CertificateCheck:
    f_verdict: Verdict
    product_verdict: Verdict
    power_is_scalar: bool
    evaluates_to_P: bool


def verify_certificate(cert: WitnessCertificate, A: GradedMatrixAlgebra) -> CertificateCheck:
    """f is not central, k disjoint copies of f multiply to a central polynomial, P^k is
    scalar and f(E_12, ..., E_n1) = P"""
    f_verdict = check_graded_central(cert.f, A)
    product_verdict = check_graded_central(product_of_copies(cert.f, cert.k), A)
    power = cert.P ** cert.k
    cycle = {j: RingMatrix.unit(A.n, j, j % A.n + 1) for j in range(1, A.n + 1)}
    check = CertificateCheck(f_verdict, product_verdict,
                             power.is_scalar_matrix() and not power.is_zero(),
                             evaluate(cert.f, A, cycle) == cert.P)
    failures = []
    if f_verdict.status != NEITHER:
        failures.append(f"f is {f_verdict.status}, expected Neither")
    if product_verdict.status != CENTRAL:
        failures.append(f"product of {cert.k} copies is {product_verdict.status}, expected Central")
    if not check.power_is_scalar:
        failures.append(f"P^{cert.k} is not a scalar matrix")
    if not check.evaluates_to_P:
        failures.append("f(E_12, ..., E_n1) differs from P")
    if failures:
        raise InvariantViolation("certificate invalid: " + "; ".join(failures))
    return check


def expected_primeness(A: GradedMatrixAlgebra) -> str:
    """What the classifier predicts for the primeness property of A"""
    r = torsion_order(A.conductor)
    if not A.grading.is_distinct or A.n > 8:
        return UNKNOWN
    verdict = classify_primeness(A.grading, r, A.conductor, verify=False).status
    if A.kind in (MNF, MAB):
        return verdict
    return HOLDS if verdict == HOLDS else UNKNOWN


# the star transform

@dataclass
class TransferResult:
    f_star: GPolynomial
    base_identity: bool
    star_identity: bool

    @property
    def agree(self) -> bool:
        return self.base_identity == self.star_identity


def check_transfer_star(f: GPolynomial, a: int, b: int, budget: int, conductor: int = 1) -> TransferResult:
    """f is a graded identity of M_{a+b}(F) with tuple (0,...,0,1,...,1) iff f* is one of M_{a,b}(E)"""
    if f.group.order != 2:
        raise PreconditionViolated("the transfer check needs Z2-graded variables")
    if not f.is_zero() and not f.is_multilinear():
        raise NonMultilinear("the transfer check needs a multilinear polynomial")
    base = GradedMatrixAlgebra.mnf(ElementaryGrading(f.group, (0,) * a + (1,) * b), conductor)
    target = GradedMatrixAlgebra.mab(a, b, budget, conductor)
    f_star = transform_star(f, grassmann_bicharacter())
    return TransferResult(f_star, check_graded_identity(f, base), check_graded_identity(f_star, target))


# enumeration test of the primeness property

def _normalized(p: GPolynomial) -> GPolynomial:
    lead = p.sorted_terms()[0][1]
    return p.scale(lead.inverse())


def _canonical_text(p: GPolynomial) -> str:
    variables = sorted({v.index for v in p.variables()})
    best = None
    for perm in itertools.permutations(range(1, len(variables) + 1)):
        renamed = _normalized(rename_variables(p, dict(zip(variables, perm))))
        text = str(renamed)
        if best is None or text < best:
            best = text
    return best


def candidate_polynomials(group: FiniteGroup, degrees: Sequence[int], maxdeg: int,
                          coeffset: Sequence[CycloScalar], max_variables: int = 2) -> List[GPolynomial]:
    """Multihomogeneous polynomials in x_1..x_k (k <= max_variables, every variable
    present) of total degree <= maxdeg with coefficients from coeffset, up to scaling
    and renaming of variables"""
    values = [ZERO] + [c for c in coeffset if not CycloScalar.of(c).is_zero()]
    seen: Dict[str, GPolynomial] = {}
    for k in range(1, max_variables + 1):
        for counts in itertools.product(range(1, maxdeg + 1), repeat=k):
            if sum(counts) > maxdeg:
                continue
            letters = [i + 1 for i, c in enumerate(counts) for _ in range(c)]
            words = sorted(set(itertools.permutations(letters)))
            for var_degrees in itertools.product(degrees, repeat=k):
                monomials = [GMonomial(tuple(GVar(i, var_degrees[i - 1]) for i in w)) for w in words]
                for coeffs in itertools.product(values, repeat=len(monomials)):
                    if all(CycloScalar.of(c).is_zero() for c in coeffs):
                        continue
                    p = GPolynomial(dict(zip(monomials, coeffs)), group)
                    if len(p.variables()) != k:
                        continue
                    key = _canonical_text(p)
                    if key not in seen:
                        seen[key] = _normalized(p)
    return [seen[key] for key in sorted(seen, key=lambda t: (len(t), t))]


@dataclass
class CentralProduct:
    f: GPolynomial
    g: GPolynomial
    f_status: str
    g_status: str

    @property
    def factors_central(self) -> bool:
        return self.f_status == CENTRAL and self.g_status == CENTRAL


@dataclass
class ScanReport:
    expected: str
    candidates: int
    pairs: int
    central_products: List[CentralProduct] = field(default_factory=list)

    @property
    def counterexamples(self) -> List[CentralProduct]:
        return [c for c in self.central_products if not c.factors_central]

    @property
    def violations(self) -> List[CentralProduct]:
        return self.counterexamples if self.expected == HOLDS else []

    @property
    def consistent(self) -> bool:
        if self.expected == HOLDS:
            return not self.violations
        if self.expected == FAILS:
            return bool(self.counterexamples)
        return True


def primeness_enumeration_test(A: GradedMatrixAlgebra, maxdeg: int, coeffset: Sequence,
                               max_variables: int = 2) -> ScanReport:
    """Every central product f*g of candidate polynomials in disjoint variables,
    checked against the classifier's prediction"""
    if not 1 <= maxdeg <= 3:
        raise PreconditionViolated(f"maxdeg must lie in 1..3, got {maxdeg}")
    coeffs = [parse_scalar(c) if isinstance(c, str) else CycloScalar.of(c) for c in coeffset]
    candidates = candidate_polynomials(A.group, A.support(), maxdeg, coeffs, max_variables)
    expected = expected_primeness(A)
    statuses = [check_graded_central(c, A).status for c in candidates]
    report = ScanReport(expected, len(candidates), 0)
    logger.info(f"primeness scan: {len(candidates)} candidates, expected {expected}")
    for i, f in enumerate(candidates):
        if statuses[i] == IDENTITY:
            continue
        shift = max(v.index for v in f.variables())
        for j in range(len(candidates)):
            if statuses[j] == IDENTITY:
                continue
            g = rename_disjoint(candidates[j], shift)
            report.pairs += 1
            if check_graded_central(f * g, A).status == CENTRAL:
                report.central_products.append(CentralProduct(f, g, statuses[i], statuses[j]))
    logger.info(f"primeness scan: {report.pairs} pairs, {len(report.central_products)} central products, "
                f"{len(report.counterexamples)} with a non-central factor")
    return report


# M_n(E) instances

@dataclass
class MnEInstanceReport:
    classification: Classification
    budget: int
    witness_verdicts: Optional[Tuple[Verdict, Verdict]] = None
    scan: Optional[ScanReport] = None

    @property
    def consistent(self) -> bool:
        if self.scan is not None:
            return self.scan.consistent
        return True


def mne_instance_check(grading: ElementaryGrading, budget: int, conductor: int = 1,
                       maxdeg: int = 2, coeffset: Sequence = ("1", "-1")) -> MnEInstanceReport:
    """M_n(E) with the elementary grading on the matrix part: when primeness holds for
    M_n(F) the scan must find no violation on M_n(E); otherwise the witness of M_n(F)
    is evaluated on M_n(E)"""
    classification = classify_primeness(grading, torsion_order(conductor), conductor)
    A = GradedMatrixAlgebra.mne(grading, budget, conductor)
    report = MnEInstanceReport(classification, budget)
    if classification.status == FAILS:
        cert = classification.certificate
        report.witness_verdicts = (check_graded_central(cert.f, A),
                                   check_graded_central(product_of_copies(cert.f, cert.k), A))
    else:
        report.scan = primeness_enumeration_test(A, maxdeg, coeffset)
    return report
