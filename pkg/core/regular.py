"""
Regular gradings: bicharacters, the properties (P1)/(P2), condition (R1),
minimality and center checks, on three realization families:

- grassmann: E on a finite budget, graded by parity over Z2
- pauli:     M_m(F) graded by Z_m x Z_m, R_(a,b) spanned by X^a Y^b
- clock:     the commutative span of the powers of X, graded by Z_m (not minimal)
"""
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

from loguru import logger

from core.errors import BudgetExceeded, ConductorMismatch, PreconditionViolated, SpecError
from core.freealg import GMonomial
from core.grassmann import basis_masks
from core.groups import FiniteGroup, cyclic_product
from core.linalg import nullspace
from core.matalg import RingMatrix
from core.scalars import CycloScalar, ONE, root_of_unity, torsion_order


@dataclass(frozen=True)
class Bicharacter:
    """Commutation function beta: H x H -> F^x given by its table"""
    group: FiniteGroup
    values: Tuple[Tuple[CycloScalar, ...], ...]

    def __call__(self, h1: int, h2: int) -> CycloScalar:
        return self.values[h1][h2]

    def axiom_failures(self) -> List[str]:
        """Multiplicativity in each slot, skew-symmetry and beta(e, h) = 1"""
        H = self.group
        failures = []
        for a in H.elements:
            if self(H.identity, a) != ONE:
                failures.append(f"beta(e, {H.name(a)}) != 1")
            for b in H.elements:
                if self(b, a) * self(a, b) != ONE:
                    failures.append(f"beta not skew-symmetric at ({H.name(a)}, {H.name(b)})")
                for c in H.elements:
                    if self(H.mul(a, b), c) != self(a, c) * self(b, c):
                        failures.append(f"beta not multiplicative in the first slot at "
                                        f"({H.name(a)}, {H.name(b)}, {H.name(c)})")
                    if self(a, H.mul(b, c)) != self(a, b) * self(a, c):
                        failures.append(f"beta not multiplicative in the second slot at "
                                        f"({H.name(a)}, {H.name(b)}, {H.name(c)})")
        return failures

    def is_bicharacter(self) -> bool:
        return not self.axiom_failures()

    def radical(self) -> List[int]:
        """Elements h with beta(h, k) = 1 for every k"""
        H = self.group
        return [h for h in H.elements if all(self(h, k) == ONE for k in H.elements)]

    def table_text(self) -> Dict[str, Dict[str, str]]:
        H = self.group
        return {H.name(a): {H.name(b): str(self(a, b)) for b in H.elements} for a in H.elements}


def trivial_bicharacter(H: FiniteGroup) -> Bicharacter:
    return Bicharacter(H, tuple(tuple(ONE for _ in H.elements) for _ in H.elements))


def grassmann_bicharacter() -> Bicharacter:
    """beta(1, 1) = -1 on Z2, 1 otherwise"""
    Z2 = cyclic_product([2])
    return Bicharacter(Z2, ((ONE, ONE), (ONE, -ONE)))


def pauli_bicharacter(m: int) -> Bicharacter:
    """beta((a,b),(c,d)) = zeta_m^(ad - bc) on Z_m x Z_m"""
    H = cyclic_product([m, m])
    coords = [(k // m, k % m) for k in H.elements]
    values = tuple(
        tuple(root_of_unity(m, a * d - b * c) for (c, d) in coords)
        for (a, b) in coords
    )
    return Bicharacter(H, values)


def is_minimal(beta: Bicharacter) -> bool:
    """Every h != e has a partner h' with beta(h, h') != 1"""
    return beta.radical() == [beta.group.identity]


class Realization:
    """A concrete H-graded algebra, elements represented as RingMatrix"""

    kind = ""

    def __init__(self, group: FiniteGroup, size: int, budget: int = 0):
        self.group = group
        self.size = size
        self.budget = budget

    def basis(self, h: int) -> List[RingMatrix]:
        raise NotImplementedError

    def representatives(self, degrees: Sequence[int]) -> List[RingMatrix]:
        """Homogeneous elements of the given degrees whose products in any order
        and with any repetition pattern vanish only when forced to"""
        raise NotImplementedError

    def describe(self) -> str:
        raise NotImplementedError


class GrassmannRealization(Realization):
    kind = "grassmann"

    def __init__(self, budget: int):
        super().__init__(cyclic_product([2]), 1, budget)

    def basis(self, h: int) -> List[RingMatrix]:
        return [RingMatrix(1, {(1, 1, mask): ONE}, self.budget) for mask in basis_masks(self.budget, h)]

    def representatives(self, degrees: Sequence[int]) -> List[RingMatrix]:
        odd = sum(1 for h in degrees if h == 1)
        if odd > self.budget:
            raise BudgetExceeded(odd, self.budget, "Grassmann representatives")
        reps, generator = [], 0
        for h in degrees:
            if h == 1:
                reps.append(RingMatrix(1, {(1, 1, 1 << generator): ONE}, self.budget))
                generator += 1
            else:
                reps.append(RingMatrix.identity(1, self.budget))
        return reps

    def describe(self) -> str:
        return f"grassmann:budget={self.budget}"


def clock_matrix(m: int) -> RingMatrix:
    """X = diag(1, zeta, ..., zeta^(m-1))"""
    return RingMatrix.diag([root_of_unity(m, k) for k in range(m)])


def shift_matrix(m: int) -> RingMatrix:
    """Y = sum_j E_{j+1, j} (indices mod m)"""
    return RingMatrix(m, {(j % m + 1, j, 0): ONE for j in range(1, m + 1)})


class PauliRealization(Realization):
    kind = "pauli"

    def __init__(self, m: int):
        super().__init__(cyclic_product([m, m]), m)
        self.m = m
        X, Y = clock_matrix(m), shift_matrix(m)
        self._X_powers = [X ** a for a in range(m)]
        self._Y_powers = [Y ** b for b in range(m)]

    def element(self, a: int, b: int) -> RingMatrix:
        return self._X_powers[a % self.m] * self._Y_powers[b % self.m]

    def basis(self, h: int) -> List[RingMatrix]:
        return [self.element(h // self.m, h % self.m)]

    def representatives(self, degrees: Sequence[int]) -> List[RingMatrix]:
        return [self.basis(h)[0] for h in degrees]

    def describe(self) -> str:
        return f"pauli:m={self.m}"


class ClockRealization(Realization):
    kind = "clock"

    def __init__(self, m: int):
        super().__init__(cyclic_product([m]), m)
        self.m = m
        X = clock_matrix(m)
        self._powers = [X ** a for a in range(m)]

    def basis(self, h: int) -> List[RingMatrix]:
        return [self._powers[h]]

    def representatives(self, degrees: Sequence[int]) -> List[RingMatrix]:
        return [self._powers[h] for h in degrees]

    def describe(self) -> str:
        return f"clock:m={self.m}"


@dataclass(frozen=True)
class RegularGradingSpec:
    group: FiniteGroup
    beta: Bicharacter
    realization: Realization = field(compare=False)

    def describe(self) -> str:
        return self.realization.describe()


def grassmann_grading(budget: int) -> RegularGradingSpec:
    realization = GrassmannRealization(budget)
    return RegularGradingSpec(realization.group, grassmann_bicharacter(), realization)


def pauli_grading(m: int, conductor: int) -> RegularGradingSpec:
    """M_m(F) graded by Z_m x Z_m; needs zeta_m in F"""
    if m < 1:
        raise SpecError(f"pauli grading needs m >= 1, got {m}")
    if torsion_order(conductor) % m:
        raise ConductorMismatch(
            f"Q(zeta_{conductor}) has no primitive {m}-th root of unity; use a conductor divisible by {m}"
        )
    realization = PauliRealization(m)
    return RegularGradingSpec(realization.group, pauli_bicharacter(m), realization)


def clock_grading(m: int, conductor: int) -> RegularGradingSpec:
    if torsion_order(conductor) % m:
        raise ConductorMismatch(f"Q(zeta_{conductor}) has no primitive {m}-th root of unity")
    realization = ClockRealization(m)
    return RegularGradingSpec(realization.group, trivial_bicharacter(realization.group), realization)


def with_beta(spec: RegularGradingSpec, beta: Bicharacter) -> RegularGradingSpec:
    """Same realization, another commutation table (negative controls)"""
    if beta.group != spec.group:
        raise PreconditionViolated("the bicharacter must be defined on the grading group")
    return RegularGradingSpec(spec.group, beta, spec.realization)


# properties

def check_P1(spec: RegularGradingSpec, degrees: Sequence[int]) -> bool:
    """Whether homogeneous r_1, ..., r_n of the given degrees have r_1 ... r_n != 0"""
    product = RingMatrix.identity(spec.realization.size, spec.realization.budget)
    for r in spec.realization.representatives(degrees):
        product = product * r
    if product.is_zero():
        logger.debug(f"(P1) fails for degrees {[spec.group.name(h) for h in degrees]}")
        return False
    return True


def P1_failures(spec: RegularGradingSpec) -> List[Tuple[int, int]]:
    """Pairs of degrees whose representatives multiply to zero"""
    H = spec.group
    return [(h1, h2) for h1 in H.elements for h2 in H.elements if not check_P1(spec, [h1, h2])]


def check_P2(spec: RegularGradingSpec) -> bool:
    """a b = beta(h1, h2) b a on all pairs of homogeneous basis elements"""
    H = spec.group
    bases = {h: spec.realization.basis(h) for h in H.elements}
    for h1 in H.elements:
        for h2 in H.elements:
            factor = spec.beta(h1, h2)
            for a in bases[h1]:
                for b in bases[h2]:
                    if a * b != (b * a).scale(factor):
                        logger.debug(f"(P2) fails for degrees ({H.name(h1)}, {H.name(h2)})")
                        return False
    return True


def monomial_is_identity(spec: RegularGradingSpec, mono: GMonomial) -> bool:
    """Whether a monomial with H-degrees vanishes on the realization.

    Each distinct variable gets one representative; on the shipped families a
    monomial vanishes on all substitutions iff it vanishes on these.
    """
    variables = mono.variables()
    reps = dict(zip(variables, spec.realization.representatives([v.degree for v in variables])))
    product = RingMatrix.identity(spec.realization.size, spec.realization.budget)
    for v in mono.letters:
        product = product * reps[v]
        if product.is_zero():
            return True
    return False


def check_R1(spec: RegularGradingSpec, m1: GMonomial, m2: GMonomial) -> bool:
    """If neither monomial is a graded identity, neither is their product"""
    if {v.index for v in m1.letters} & {v.index for v in m2.letters}:
        raise PreconditionViolated("condition (R1) is stated for monomials in distinct variables")
    if monomial_is_identity(spec, m1) or monomial_is_identity(spec, m2):
        return True
    return not monomial_is_identity(spec, m1 * m2)


def central_components(spec: RegularGradingSpec) -> Dict[int, Tuple[int, int]]:
    """Per component h: (dimension of the central part of R_h, dimension of R_h).

    The center of a graded algebra is graded, so each component is handled alone.
    """
    H = spec.group
    everything = [b for h in H.elements for b in spec.realization.basis(h)]
    result: Dict[int, Tuple[int, int]] = {}
    for h in H.elements:
        basis = spec.realization.basis(h)
        if not basis:
            result[h] = (0, 0)
            continue
        rows = []
        for other in everything:
            commutators = [(b * other - other * b).entries for b in basis]
            keys = set().union(*commutators)
            for key in keys:
                rows.append({k: c[key] for k, c in enumerate(commutators) if key in c})
        kernel = nullspace(rows, list(range(len(basis))))
        result[h] = (len(kernel), len(basis))
    return result


def center_equals_neutral(spec: RegularGradingSpec) -> bool:
    """Z(R) = R_e, computed from the realization alone; beta is not consulted.
    On the Grassmann family this holds only within the budget."""
    dims = central_components(spec)
    H = spec.group
    ok = all(
        central == (total if h == H.identity else 0)
        for h, (central, total) in dims.items()
    )
    logger.debug(f"center check for {spec.describe()}: "
                 f"{ {H.name(h): d for h, d in dims.items()} } -> {ok}")
    return ok


def center_matches_radical(spec: RegularGradingSpec) -> bool:
    """The central components are exactly the full components R_h with h in the
    radical of beta; any other component must have a zero central part"""
    radical = set(spec.beta.radical())
    return all(
        central == (total if h in radical else 0)
        for h, (central, total) in central_components(spec).items()
    )


def regular_from_spec(text: str, conductor: int) -> RegularGradingSpec:
    """ "grassmann:budget=6", "pauli:m=3" or "clock:m=2" """
    kind, _, params = text.strip().partition(":")
    values = {}
    for item in filter(None, params.split(",")):
        key, _, value = item.partition("=")
        try:
            values[key.strip()] = int(value)
        except ValueError:
            raise SpecError(f"realization parameter '{item}' must be key=integer")
    kind = kind.strip().lower()
    if kind == "grassmann":
        return grassmann_grading(values.get("budget", 6))
    if kind == "pauli":
        return pauli_grading(values.get("m", 2), conductor)
    if kind == "clock":
        return clock_grading(values.get("m", 2), conductor)
    raise SpecError(f"unknown realization '{text}'; expected grassmann:budget=B, pauli:m=M or clock:m=M")
