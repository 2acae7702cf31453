"""
Report models printed by the command line and stored in the archive
"""
import json
from datetime import datetime
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field

from core.checker import (
    CentralProduct, CertificateCheck, Classification, Evidence, ScanReport, Verdict, WitnessCertificate,
)
from core.freealg import to_text
from core.groups import FiniteGroup


class EvidenceReport(BaseModel):
    polynomial: str
    substitution: Dict[str, str]
    value: str
    value_rows: List[List[str]]
    against: Optional[str] = None
    against_degree: Optional[str] = None


class VerdictReport(BaseModel):
    status: str
    budget: Optional[int] = None
    budget_note: str = ""
    evidence: Optional[EvidenceReport] = None


class CertificateReport(BaseModel):
    f: str
    P: List[str]
    k: int
    lambda_: Dict[str, str] = Field(alias="lambda")
    note: str
    checks: Dict[str, Any] = Field(default_factory=dict)

    model_config = {"populate_by_name": True}


class CentralProductReport(BaseModel):
    f: str
    g: str
    f_status: str
    g_status: str


class RunReport(BaseModel):
    """Everything one command produced; status and exit code always agree"""
    verb: str
    status: str
    exit_code: int
    conductor: int
    budget: int
    algebra: str = ""
    polynomial: Optional[str] = None
    verdict: Optional[VerdictReport] = None
    certificate: Optional[CertificateReport] = None
    details: Dict[str, Any] = Field(default_factory=dict)
    error: Optional[str] = None
    created_at: str = Field(default_factory=lambda: datetime.now().isoformat(timespec="seconds"))

    def to_json(self) -> str:
        return self.model_dump_json(indent=2, by_alias=True)

    def to_text(self) -> str:
        lines = [f"{self.verb}: {self.status}"]
        if self.algebra:
            lines.append("algebra:")
            lines.extend(f"  {line}" for line in self.algebra.splitlines())
        lines.append(f"conductor = {self.conductor}, budget = {self.budget}")
        if self.polynomial is not None:
            lines.append(f"polynomial: {self.polynomial}")
        if self.verdict is not None:
            note = f" ({self.verdict.budget_note})" if self.verdict.budget_note else ""
            lines.append(f"verdict: {self.verdict.status}{note}")
            if self.verdict.evidence is not None:
                ev = self.verdict.evidence
                at = ", ".join(f"{k}={v}" for k, v in ev.substitution.items())
                lines.append(f"  evidence: {ev.polynomial} at {at} = {ev.value}")
                if ev.against is not None:
                    lines.append(f"  does not commute with {ev.against} (degree {ev.against_degree})")
        if self.certificate is not None:
            c = self.certificate
            lines.append(f"witness f = {c.f}, P = diag({', '.join(c.P)}), k = {c.k}")
            lines.append(f"  {c.note}")
            for name, value in c.checks.items():
                lines.append(f"  {name}: {value}")
        for key, value in self.details.items():
            if isinstance(value, (dict, list)):
                lines.append(f"{key}: {json.dumps(value, ensure_ascii=False)}")
            else:
                lines.append(f"{key}: {value}")
        if self.error:
            lines.append(f"error: {self.error}")
        return "\n".join(lines)


def evidence_report(evidence: Evidence, group: FiniteGroup) -> EvidenceReport:
    return EvidenceReport(
        polynomial=to_text(evidence.polynomial),
        substitution={v.text(evidence.polynomial.group): m.text() for v, m in sorted(evidence.substitution.items())},
        value=evidence.value.text(),
        value_rows=evidence.value.rows(),
        against=evidence.against.text() if evidence.against is not None else None,
        against_degree=group.name(evidence.against_degree) if evidence.against_degree is not None else None,
    )


def verdict_report(verdict: Verdict, group: FiniteGroup) -> VerdictReport:
    return VerdictReport(
        status=verdict.status,
        budget=verdict.budget,
        budget_note=verdict.budget_note,
        evidence=evidence_report(verdict.evidence, group) if verdict.evidence is not None else None,
    )


def certificate_report(cert: WitnessCertificate, check: Optional[CertificateCheck] = None) -> CertificateReport:
    checks: Dict[str, Any] = {}
    if check is not None:
        checks = {
            "f": check.f_verdict.status,
            f"product of {cert.k} copies": check.product_verdict.status,
            f"P^{cert.k} scalar": check.power_is_scalar,
            "f(E12, ..., En1) = P": check.evaluates_to_P,
        }
    return CertificateReport(
        f=to_text(cert.f),
        P=[str(x) for x in cert.P.diagonal()],
        k=cert.k,
        lambda_=cert.lam.as_dict(),
        note=cert.note,
        checks=checks,
    )


def classification_details(result: Classification) -> Dict[str, Any]:
    return {
        "crossed_product": result.crossed,
        "reason": result.reason,
        "H": [str(sigma) for sigma in result.H],
        "orbits": result.orbit_list,
        "characters": result.characters,
    }


def central_product_report(item: CentralProduct) -> CentralProductReport:
    return CentralProductReport(f=to_text(item.f), g=to_text(item.g), f_status=item.f_status,
                                g_status=item.g_status)


def scan_details(report: ScanReport, limit: int = 20) -> Dict[str, Any]:
    return {
        "expected": report.expected,
        "candidates": report.candidates,
        "pairs": report.pairs,
        "central_products": len(report.central_products),
        "counterexamples": [central_product_report(c).model_dump() for c in report.counterexamples[:limit]],
        "counterexample_count": len(report.counterexamples),
        "violations": len(report.violations),
        "consistent": report.consistent,
    }


def report_schema() -> Dict[str, Any]:
    return RunReport.model_json_schema(by_alias=True)
