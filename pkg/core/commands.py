"""
Command dispatch: one Command in, an exit code and a RunReport out.

Exit codes: 0 definitive answer, 1 property violation found, 2 input error,
3 Grassmann budget too small.
"""
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

from loguru import logger

from config import config
from core.checker import (
    FAILS, IDENTITY, check_graded_central, check_graded_central_ordinary, check_graded_identity,
    check_transfer_star, classify_primeness, mne_instance_check, primeness_enumeration_test,
    scalar_line_certificate, stability_recheck, verify_certificate, verify_evidence,
)
from core.errors import BudgetExceeded, GradedPIError, InvariantViolation, PreconditionViolated, SpecError
from core.freealg import GPolynomial, to_text, transform_f_h, transform_star
from core.groups import FiniteGroup, TRIVIAL_GROUP, orbits
from core.matalg import (
    MNE, MNF, GradedMatrixAlgebra, aut_subgroup_H, cycle_substitution, diagonal_character, envelope,
    envelope_compatible, evaluate, is_central_element, is_crossed_product, subs_classes, witness_polynomial,
)
from core.parser import parse_algebra_spec, parse_assignment, parse_diagonal, parse_h_map, parse_polynomial
from core.properties import run_suites
from core.regular import (
    P1_failures, center_equals_neutral, center_matches_radical, central_components, check_P2, grassmann_bicharacter,
    is_minimal, regular_from_spec,
)
from core.reports import (
    RunReport, certificate_report, classification_details, report_schema, scan_details, verdict_report,
)
from core.scalars import torsion_order

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


@dataclass
class Command:
    verb: str
    algebra: Optional[str] = None          # path to a spec file or the spec text itself
    polynomials: List[str] = field(default_factory=list)
    budget: Optional[int] = None
    conductor: Optional[int] = None
    maxdeg: Optional[int] = None
    seed: Optional[int] = None
    coeffs: Optional[List[str]] = None
    at: Optional[str] = None
    p: Optional[str] = None
    h: Optional[str] = None
    mode: str = "star"
    companion: Optional[str] = None
    ordinary: bool = False
    realization: Optional[str] = None
    cases: int = 50
    limit: int = 20
    archive_path: Optional[str] = None


@dataclass
class Context:
    command: Command
    algebra: Optional[GradedMatrixAlgebra]

    @property
    def conductor(self) -> int:
        if self.algebra is not None:
            return self.algebra.conductor
        return self.command.conductor if self.command.conductor is not None else config.field.conductor

    @property
    def budget(self) -> int:
        if self.algebra is not None and self.algebra.uses_grassmann:
            return self.algebra.budget
        return self.command.budget if self.command.budget is not None else config.grassmann.budget

    @property
    def group(self) -> FiniteGroup:
        return self.algebra.group if self.algebra is not None else TRIVIAL_GROUP

    def polynomial(self, k: int = 0, group: FiniteGroup = None) -> GPolynomial:
        return parse_polynomial(self.command.polynomials[k], group or self.group)

    def mnf(self) -> GradedMatrixAlgebra:
        if self.algebra.kind == MNF:
            return self.algebra
        return GradedMatrixAlgebra.mnf(self.algebra.grading, self.algebra.conductor)


def load_algebra(spec: str, budget: Optional[int] = None, conductor: Optional[int] = None) -> GradedMatrixAlgebra:
    path = Path(spec)
    if "=" not in spec and path.exists():
        text = path.read_text(encoding="utf-8")
    else:
        text = spec.replace(";", "\n")
    return parse_algebra_spec(text, budget, conductor, default_budget=config.grassmann.budget,
                              default_conductor=config.field.conductor)


# verbs

def _check_identity(ctx: Context) -> Dict[str, Any]:
    f = ctx.polynomial()
    A = ctx.algebra
    identity = check_graded_identity(f, A)
    details: Dict[str, Any] = {"identity": identity}
    if A.uses_grassmann:
        wider = stability_recheck(f, A)
        details["stable_at_budget"] = A.budget + 2
        details["stable"] = (wider.status == IDENTITY) == identity
    return {"status": "Identity" if identity else "NotIdentity", "polynomial": to_text(f), "details": details}


def _check_central(ctx: Context) -> Dict[str, Any]:
    A = ctx.algebra
    cmd = ctx.command
    details: Dict[str, Any] = {}
    if cmd.ordinary:
        f = ctx.polynomial(group=TRIVIAL_GROUP)
        companion = parse_polynomial(cmd.companion, TRIVIAL_GROUP) if cmd.companion else None
        result = check_graded_central_ordinary(f, A, companion)
        verdict = result.verdict
        if result.product_verdict is not None:
            details["product"] = result.product_verdict.status
            details["value_component"] = A.group.name(result.component) if result.component is not None else None
    else:
        f = ctx.polynomial()
        verdict = check_graded_central(f, A)
        if A.uses_grassmann:
            details["stable_at_budget"] = A.budget + 2
            details["stable"] = stability_recheck(f, A).status == verdict.status
    if not cmd.ordinary and not verify_evidence(verdict, A):
        raise InvariantViolation("stored evidence does not re-evaluate to the stored value")
    return {"status": verdict.status, "polynomial": to_text(f), "verdict": verdict_report(verdict, A.group),
            "details": details}


def _classify(ctx: Context) -> Dict[str, Any]:
    A = ctx.algebra
    r = torsion_order(A.conductor)
    try:
        result = classify_primeness(A.grading, r, A.conductor, verify=False)
    except PreconditionViolated as e:
        logger.warning(f"classification unsupported: {e}")
        return {"status": "Unsupported", "exit_code": EXIT_INPUT, "details": {"reason": str(e)}}
    details = classification_details(result)
    details["r"] = r
    report: Dict[str, Any] = {"status": result.status, "details": details}
    if result.certificate is not None:
        check = verify_certificate(result.certificate, ctx.mnf())
        report["certificate"] = certificate_report(result.certificate, check)
        report["polynomial"] = to_text(result.certificate.f)
    return report


def _aut_group(ctx: Context) -> Dict[str, Any]:
    grading = ctx.algebra.grading
    H = aut_subgroup_H(grading, config.max_matrix_size)
    crossed = is_crossed_product(grading)
    classes = subs_classes(grading)
    details = {
        "H": [str(sigma) for sigma in H],
        "order": len(H),
        "orbits": orbits(H, grading.n),
        "support": [grading.group.name(g) for g in crossed.support],
        "reason": crossed.reason,
        "isomorphism": {grading.group.name(s): str(sigma) for s, sigma in crossed.isomorphism.items()},
        "nonzero_substitutions": len(classes),
        "substitutions_in_H": sum(1 for c in classes if c.sigma is not None),
    }
    return {"status": "CrossedProduct" if crossed.is_crossed else "NotCrossedProduct", "details": details}


def _witness(ctx: Context) -> Dict[str, Any]:
    A = ctx.mnf()
    grading = A.grading
    if ctx.command.p:
        p = parse_diagonal(ctx.command.p)
    else:
        result = classify_primeness(grading, torsion_order(A.conductor), A.conductor, verify=False)
        if result.status != FAILS:
            raise PreconditionViolated("primeness holds; pass --p to build a witness for a chosen diagonal")
        p = result.certificate.P.diagonal()
    f = witness_polynomial(grading, p)
    value = evaluate(f, A, cycle_substitution(grading))
    line = scalar_line_certificate(f, A)
    verdict = check_graded_central(f, A)
    lam = diagonal_character(FiniteGroup.from_permutations(aut_subgroup_H(grading)), p)
    details = {
        "value_at_cycle": value.text(),
        "value_line": line.text() if line is not None else None,
        "lambda": lam.as_dict() if lam is not None else None,
    }
    return {"status": "Built", "polynomial": to_text(f), "verdict": verdict_report(verdict, A.group),
            "details": details}


def _transform(ctx: Context) -> Dict[str, Any]:
    cmd = ctx.command
    if cmd.realization:
        beta = regular_from_spec(cmd.realization, ctx.conductor).beta
    else:
        beta = grassmann_bicharacter()
    group = ctx.algebra.group if ctx.algebra is not None else beta.group
    if group.order != beta.group.order:
        raise PreconditionViolated(f"variables graded by {group} but the bicharacter lives on {beta.group}")
    f = ctx.polynomial(group=group)
    if cmd.mode == "h":
        if not cmd.h:
            raise SpecError("--mode h needs --h, e.g. --h \"x1=1,x2=0\"")
        transformed = transform_f_h(f, parse_h_map(cmd.h, beta.group), beta)
    elif cmd.mode == "star":
        transformed = transform_star(f, beta)
    else:
        raise SpecError(f"unknown transform mode '{cmd.mode}', expected h or star")
    return {"status": "Transformed", "polynomial": to_text(f),
            "details": {"mode": cmd.mode, "result": to_text(transformed)}}


def _envelope_check(ctx: Context) -> Dict[str, Any]:
    A = ctx.mnf()
    budget = ctx.command.budget if ctx.command.budget is not None else config.grassmann.budget
    target = envelope(A, budget)
    a, b = target.split
    compatible = envelope_compatible(a, b, budget)
    details: Dict[str, Any] = {"envelope": target.label(), "multiplication_agrees": compatible, "transfers": []}
    agree = compatible
    for k in range(len(ctx.command.polynomials)):
        result = check_transfer_star(ctx.polynomial(k), a, b, budget, A.conductor)
        details["transfers"].append({
            "f": to_text(ctx.polynomial(k)),
            "f_star": to_text(result.f_star),
            "base_identity": result.base_identity,
            "envelope_identity": result.star_identity,
            "agree": result.agree,
        })
        agree = agree and result.agree
    return {"status": "Agree" if agree else "Disagree", "exit_code": EXIT_OK if agree else EXIT_VIOLATION,
            "budget": budget, "details": details}


def _primeness_scan(ctx: Context) -> Dict[str, Any]:
    cmd = ctx.command
    maxdeg = cmd.maxdeg if cmd.maxdeg is not None else config.scan.maxdeg
    coeffs = cmd.coeffs or config.scan.coefficients
    report = primeness_enumeration_test(ctx.algebra, maxdeg, coeffs, config.scan.max_variables)
    details = scan_details(report, ctx.command.limit)
    details["maxdeg"] = maxdeg
    details["coefficients"] = list(coeffs)
    consistent = report.consistent
    return {"status": "Consistent" if consistent else "Inconsistent",
            "exit_code": EXIT_OK if consistent else EXIT_VIOLATION, "details": details}


def _mne_check(ctx: Context) -> Dict[str, Any]:
    A = ctx.algebra
    if A.kind != MNE:
        raise PreconditionViolated("mne-check needs an algebra of kind MnE")
    cmd = ctx.command
    maxdeg = cmd.maxdeg if cmd.maxdeg is not None else config.scan.maxdeg
    report = mne_instance_check(A.grading, A.budget, A.conductor, maxdeg, cmd.coeffs or config.scan.coefficients)
    details: Dict[str, Any] = {"matrix_grading": report.classification.status}
    if report.witness_verdicts is not None:
        f_verdict, product_verdict = report.witness_verdicts
        details["witness"] = to_text(report.classification.certificate.f)
        details["witness_on_MnE"] = f_verdict.status
        details["product_on_MnE"] = product_verdict.status
    if report.scan is not None:
        details["scan"] = scan_details(report.scan, cmd.limit)
    consistent = report.consistent
    return {"status": "Consistent" if consistent else "Inconsistent",
            "exit_code": EXIT_OK if consistent else EXIT_VIOLATION, "details": details}


def _eval(ctx: Context) -> Dict[str, Any]:
    A = ctx.algebra
    if not ctx.command.at:
        raise SpecError("eval needs --at, e.g. --at \"x1=E12,x2=E21\"")
    f = ctx.polynomial()
    value = evaluate(f, A, parse_assignment(ctx.command.at, A.n, A.budget))
    details = {"value": value.text(), "rows": value.rows(), "central": is_central_element(A, value)}
    return {"status": "Evaluated", "polynomial": to_text(f), "details": details}


def _schema(ctx: Context) -> Dict[str, Any]:
    return {"status": "Schema", "details": {"schema": report_schema()}}


def _history(ctx: Context) -> Dict[str, Any]:
    from core.database import list_reports
    reports = list_reports(ctx.command.limit, db_path=ctx.command.archive_path)
    return {"status": "History", "details": {"reports": reports}}


def _suite(ctx: Context) -> Dict[str, Any]:
    seed = ctx.command.seed if ctx.command.seed is not None else config.seed
    results = run_suites(seed, ctx.command.cases)
    passed = all(r.passed for r in results)
    details = {
        "seed": seed,
        "suites": {r.name: {"cases": r.cases, "failures": r.failures[:ctx.command.limit]} for r in results},
    }
    return {"status": "Passed" if passed else "Failed", "exit_code": EXIT_OK if passed else EXIT_VIOLATION,
            "details": details}


def _regular_check(ctx: Context) -> Dict[str, Any]:
    cmd = ctx.command
    if not cmd.realization:
        raise SpecError("regular-check needs --realization, e.g. pauli:m=2")
    spec = regular_from_spec(cmd.realization, ctx.conductor)
    H = spec.group
    p1_failures = P1_failures(spec)
    p1 = not p1_failures
    p2 = check_P2(spec)
    axioms = spec.beta.axiom_failures()
    details = {
        "realization": spec.describe(),
        "group": str(H),
        "beta": spec.beta.table_text(),
        "bicharacter_failures": axioms,
        "P1": p1,
        "P1_failures": [[H.name(h1), H.name(h2)] for h1, h2 in p1_failures],
        "P2": p2,
        "minimal": is_minimal(spec.beta),
        "central_components": {H.name(h): list(d) for h, d in central_components(spec).items()},
        "center_equals_neutral": center_equals_neutral(spec),
        "center_matches_radical": center_matches_radical(spec),
    }
    regular = p1 and p2 and not axioms
    return {"status": "Regular" if regular else "NotRegular",
            "exit_code": EXIT_OK if regular else EXIT_VIOLATION, "details": details}


VERBS: Dict[str, Callable[[Context], Dict[str, Any]]] = {
    "check-identity": _check_identity,
    "check-central": _check_central,
    "classify": _classify,
    "aut-group": _aut_group,
    "witness": _witness,
    "transform": _transform,
    "envelope-check": _envelope_check,
    "primeness-scan": _primeness_scan,
    "mne-check": _mne_check,
    "eval": _eval,
    "schema": _schema,
    "history": _history,
    "suite": _suite,
    "regular-check": _regular_check,
}

NEEDS_ALGEBRA = {"check-identity", "check-central", "classify", "aut-group", "witness", "envelope-check",
                 "primeness-scan", "mne-check", "eval"}
NEEDS_POLYNOMIAL = {"check-identity", "check-central", "transform", "eval"}


def _validate(command: Command):
    if command.verb not in VERBS:
        raise SpecError(f"unknown verb '{command.verb}'; expected one of {', '.join(VERBS)}")
    if command.verb in NEEDS_ALGEBRA and not command.algebra:
        raise SpecError(f"{command.verb} needs --algebra")
    if command.verb in NEEDS_POLYNOMIAL and not command.polynomials:
        raise SpecError(f"{command.verb} needs a polynomial")
    if command.conductor is not None and not 1 <= command.conductor <= config.max_conductor:
        raise SpecError(f"conductor must lie in 1..{config.max_conductor}, got {command.conductor}")
    if command.budget is not None and not 0 <= command.budget <= config.grassmann.max_budget:
        raise SpecError(f"budget must lie in 0..{config.grassmann.max_budget}, got {command.budget}")


def run(command: Command) -> Tuple[int, RunReport]:
    """Execute one command; library errors become exit codes, never tracebacks"""
    base = {
        "verb": command.verb,
        "conductor": command.conductor if command.conductor is not None else config.field.conductor,
        "budget": command.budget if command.budget is not None else config.grassmann.budget,
    }
    try:
        _validate(command)
        algebra = None
        if command.algebra:
            algebra = load_algebra(command.algebra, command.budget, command.conductor)
            base["algebra"] = algebra.describe()
        ctx = Context(command, algebra)
        base["conductor"], base["budget"] = ctx.conductor, ctx.budget
        outcome = VERBS[command.verb](ctx)
        fields = {**base, **outcome}
        fields.setdefault("exit_code", EXIT_OK)
        report = RunReport(**fields)
    except BudgetExceeded as e:
        logger.error(f"{command.verb}: {e}")
        report = RunReport(**base, status="BudgetExceeded", exit_code=EXIT_BUDGET, error=str(e),
                           details={"needed": e.needed, "budget": e.budget})
    except InvariantViolation as e:
        logger.error(f"{command.verb}: {e}")
        report = RunReport(**base, status="InvariantViolation", exit_code=EXIT_VIOLATION, error=str(e))
    except (GradedPIError, ValueError, OSError) as e:
        logger.error(f"{command.verb}: {e}")
        report = RunReport(**base, status="InputError", exit_code=EXIT_INPUT, error=str(e))
    return report.exit_code, report
