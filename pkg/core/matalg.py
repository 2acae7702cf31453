"""
Graded matrix algebras M_n(F), M_n(E) and M_{a,b}(E) with elementary gradings
"""
import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from loguru import logger

from core.errors import (
    BudgetExceeded, InvariantViolation, NotAdmissible, NotHomomorphism,
    PreconditionViolated, SizeLimit, SpecError, TupleNotSorted,
)
from core.freealg import GMonomial, GPolynomial, GVar
from core.grassmann import (
    GrassmannElement, MAX_BUDGET, basis_masks, canonical_reordering_sign, mask_text, parity, wedge,
)
from core.groups import Character, FiniteGroup, Permutation, cyclic_product
from core.scalars import CycloScalar, ONE, ZERO

Key = Tuple[int, int, int]  # (row, column, Grassmann mask); rows and columns from 1

MNF, MNE, MAB = "MnF", "MnE", "Mab"
KINDS = (MNF, MNE, MAB)
Z2 = cyclic_product([2])


class RingMatrix:
    """Sparse n x n matrix with entries in E (budget > 0) or in the base field.

    Stored as {(i, j, mask): coefficient}, meaning sum coefficient * e_mask * E_ij.
    """

    __slots__ = ("n", "budget", "entries")

    def __init__(self, n: int, entries: Optional[Mapping[Key, object]] = None, budget: int = 0):
        clean: Dict[Key, CycloScalar] = {}
        for key, coeff in (entries or {}).items():
            c = CycloScalar.of(coeff)
            if not c.is_zero():
                clean[key] = c
        self.n = n
        self.budget = budget
        self.entries = clean

    @classmethod
    def zero(cls, n: int, budget: int = 0) -> "RingMatrix":
        return cls(n, {}, budget)

    @classmethod
    def unit(cls, n: int, i: int, j: int, mask: int = 0, coeff=1, budget: int = 0) -> "RingMatrix":
        return cls(n, {(i, j, mask): coeff}, budget)

    @classmethod
    def identity(cls, n: int, budget: int = 0) -> "RingMatrix":
        return cls(n, {(i, i, 0): ONE for i in range(1, n + 1)}, budget)

    @classmethod
    def diag(cls, values: Sequence, budget: int = 0) -> "RingMatrix":
        return cls(len(values), {(i, i, 0): v for i, v in enumerate(values, start=1)}, budget)

    @classmethod
    def from_entries(cls, n: int, entries: Mapping[Tuple[int, int], GrassmannElement], budget: int = 0) -> "RingMatrix":
        flat = {}
        for (i, j), element in entries.items():
            for mask, c in element.terms.items():
                flat[(i, j, mask)] = c
        return cls(n, flat, budget)

    # queries

    def is_zero(self) -> bool:
        return not self.entries

    def entry(self, i: int, j: int) -> GrassmannElement:
        return GrassmannElement(self.budget, {m: c for (a, b, m), c in self.entries.items() if (a, b) == (i, j)})

    def is_diagonal(self) -> bool:
        return all(i == j for i, j, _ in self.entries)

    def diagonal(self) -> List[CycloScalar]:
        """Diagonal of a matrix with base-field entries"""
        if any(m for _, _, m in self.entries):
            raise ValueError("diagonal() needs base-field entries")
        return [self.entries.get((i, i, 0), ZERO) for i in range(1, self.n + 1)]

    def is_scalar_matrix(self) -> bool:
        """c * I with c in the entry ring"""
        if not self.is_diagonal():
            return False
        first = self.entry(1, 1)
        return all(self.entry(i, i) == first for i in range(2, self.n + 1))

    def is_invertible_diagonal(self) -> bool:
        return self.is_diagonal() and all(not d.is_zero() for d in self.diagonal())

    # arithmetic

    def __add__(self, other: "RingMatrix") -> "RingMatrix":
        entries = dict(self.entries)
        for key, c in other.entries.items():
            entries[key] = entries.get(key, ZERO) + c
        return RingMatrix(self.n, entries, max(self.budget, other.budget))

    def __neg__(self) -> "RingMatrix":
        return RingMatrix(self.n, {k: -c for k, c in self.entries.items()}, self.budget)

    def __sub__(self, other: "RingMatrix") -> "RingMatrix":
        return self + (-other)

    def scale(self, c) -> "RingMatrix":
        c = CycloScalar.of(c)
        return RingMatrix(self.n, {k: c * v for k, v in self.entries.items()}, self.budget)

    def __mul__(self, other) -> "RingMatrix":
        if not isinstance(other, RingMatrix):
            return self.scale(other)
        by_row: Dict[int, List[Tuple[int, int, CycloScalar]]] = defaultdict(list)
        for (j, k, mb), cb in other.entries.items():
            by_row[j].append((k, mb, cb))
        entries: Dict[Key, CycloScalar] = {}
        for (i, j, ma), ca in self.entries.items():
            for k, mb, cb in by_row.get(j, ()):
                if ma & mb:
                    continue
                product = ca * cb
                if canonical_reordering_sign(ma, mb) < 0:
                    product = -product
                key = (i, k, ma | mb)
                entries[key] = entries.get(key, ZERO) + product
        return RingMatrix(self.n, entries, max(self.budget, other.budget))

    def __rmul__(self, other) -> "RingMatrix":
        return self.scale(other)

    def __pow__(self, k: int) -> "RingMatrix":
        result = RingMatrix.identity(self.n, self.budget)
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, RingMatrix):
            return NotImplemented
        return self.n == other.n and self.entries == other.entries

    def __hash__(self):
        return hash((self.n, frozenset(self.entries.items())))

    def text(self) -> str:
        if self.is_zero():
            return "0"
        pieces = []
        for key in sorted(self.entries):
            i, j, mask = key
            c = self.entries[key]
            unit = f"E{i}{j}" if self.n < 10 else f"E{i},{j}"
            body = unit if mask == 0 else f"{mask_text(mask)}*{unit}"
            if c == ONE:
                pieces.append(("+", body))
            elif c == -ONE:
                pieces.append(("-", body))
            elif c.is_rational():
                q = c.as_fraction()
                pieces.append(("-" if q < 0 else "+", f"{CycloScalar.of(abs(q))}*{body}"))
            else:
                pieces.append(("+", f"({c})*{body}"))
        first_sign, first = pieces[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out

    def rows(self) -> List[List[str]]:
        """Entry-wise text, for reports"""
        return [[str(self.entry(i, j)) for j in range(1, self.n + 1)] for i in range(1, self.n + 1)]

    def __repr__(self):
        return f"RingMatrix({self.n}, {self.text()!r})"

    def __str__(self):
        return self.text()


def matrix_commutator(a: RingMatrix, b: RingMatrix) -> RingMatrix:
    return a * b - b * a


@dataclass(frozen=True)
class ElementaryGrading:
    """deg E_ij = g_i^{-1} g_j for the tuple (g_1, ..., g_n)"""
    group: FiniteGroup
    tuple: Tuple[int, ...]

    def __post_init__(self):
        if not self.tuple:
            raise SpecError("an elementary grading needs a non-empty tuple")
        if any(not 0 <= g < self.group.order for g in self.tuple):
            raise SpecError(f"tuple entries must be elements of {self.group}")

    @property
    def n(self) -> int:
        return len(self.tuple)

    @property
    def is_distinct(self) -> bool:
        return len(set(self.tuple)) == len(self.tuple)

    def degree_of(self, i: int, j: int) -> int:
        G = self.group
        return G.mul(G.inv(self.tuple[i - 1]), self.tuple[j - 1])

    def support(self) -> List[int]:
        return sorted({self.degree_of(i, j) for i in range(1, self.n + 1) for j in range(1, self.n + 1)})

    def units_of_degree(self, g: int) -> List[Tuple[int, int]]:
        return [(i, j) for i in range(1, self.n + 1) for j in range(1, self.n + 1) if self.degree_of(i, j) == g]

    def names(self) -> List[str]:
        return [self.group.name(g) for g in self.tuple]


def degree_of(grading: ElementaryGrading, i: int, j: int) -> int:
    return grading.degree_of(i, j)


@dataclass(frozen=True)
class GradedMatrixAlgebra:
    """M_n(F), M_n(E) (E in the neutral component) or M_{a,b}(E) with its canonical Z2-grading"""
    kind: str
    grading: ElementaryGrading
    budget: int = 0
    conductor: int = 1
    split: Optional[Tuple[int, int]] = None
    spec_text: str = field(default="", compare=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise SpecError(f"unknown algebra kind '{self.kind}', expected one of {', '.join(KINDS)}")
        if not 0 <= self.budget <= MAX_BUDGET:
            raise BudgetExceeded(self.budget, MAX_BUDGET, "algebra")
        if self.kind == MAB:
            a, b = self.split or (None, None)
            if a is None or tuple(self.grading.tuple) != (0,) * a + (1,) * b or self.grading.group.order != 2:
                raise SpecError("M_{a,b}(E) needs the split (a, b) and the tuple (0,...,0,1,...,1) over Z2")

    @classmethod
    def mnf(cls, grading: ElementaryGrading, conductor: int = 1) -> "GradedMatrixAlgebra":
        return cls(MNF, grading, 0, conductor)

    @classmethod
    def mne(cls, grading: ElementaryGrading, budget: int, conductor: int = 1) -> "GradedMatrixAlgebra":
        return cls(MNE, grading, budget, conductor)

    @classmethod
    def mab(cls, a: int, b: int, budget: int, conductor: int = 1) -> "GradedMatrixAlgebra":
        return cls(MAB, ElementaryGrading(Z2, (0,) * a + (1,) * b), budget, conductor, (a, b))

    @property
    def n(self) -> int:
        return self.grading.n

    @property
    def group(self) -> FiniteGroup:
        return self.grading.group

    @property
    def uses_grassmann(self) -> bool:
        return self.kind != MNF

    def entry_parities(self, g: int) -> Tuple[int, ...]:
        """Grassmann parities allowed in the component of degree g"""
        if self.kind == MNF:
            return (0,)
        if self.kind == MAB:
            return (g,)
        return (0, 1)

    def admits(self, key: Key, g: int) -> bool:
        i, j, mask = key
        if self.grading.degree_of(i, j) != g or mask >> self.budget:
            return False
        if self.kind == MNF:
            return mask == 0
        if self.kind == MAB:
            return parity(mask) == g
        return True

    def is_homogeneous(self, matrix: RingMatrix, g: int) -> bool:
        return matrix.n == self.n and all(self.admits(key, g) for key in matrix.entries)

    def component_keys(self, g: int) -> List[Key]:
        keys = []
        for i, j in self.grading.units_of_degree(g):
            if self.kind == MNF:
                keys.append((i, j, 0))
            else:
                parity_filter = g if self.kind == MAB else None
                keys.extend((i, j, mask) for mask in basis_masks(self.budget, parity_filter))
        return keys

    def support(self) -> List[int]:
        return [g for g in self.grading.support() if self.component_keys(g)]

    def describe(self) -> str:
        if self.spec_text:
            return self.spec_text
        if self.kind == MAB:
            a, b = self.split
            return f"kind = Mab\na = {a}\nb = {b}\nconductor = {self.conductor}\nbudget = {self.budget}"
        lines = [f"kind = {self.kind}", f"n = {self.n}", f"group = {self.group}",
                 f"tuple = {', '.join(self.grading.names())}", f"conductor = {self.conductor}"]
        if self.kind == MNE:
            lines.append(f"budget = {self.budget}")
        return "\n".join(lines)

    def label(self) -> str:
        if self.kind == MAB:
            return f"M_{{{self.split[0]},{self.split[1]}}}(E)"
        entries = "E" if self.kind == MNE else "F"
        return f"M_{self.n}({entries}) graded by {self.group} via ({', '.join(self.grading.names())})"


def homogeneous_basis(A: GradedMatrixAlgebra, g: int) -> List[RingMatrix]:
    return [RingMatrix(A.n, {key: ONE}, A.budget) for key in A.component_keys(g)]


def full_basis(A: GradedMatrixAlgebra) -> List[Tuple[int, RingMatrix]]:
    return [(g, b) for g in A.support() for b in homogeneous_basis(A, g)]


# automorphisms and crossed products

def aut_subgroup_H(grading: ElementaryGrading, max_size: int = 8) -> List[Permutation]:
    """All sigma in S_n with deg E_{sigma(i) sigma(j)} = deg E_ij, sorted by images"""
    n = grading.n
    if n > max_size:
        raise SizeLimit(f"automorphism subgroup search needs n <= {max_size}, got {n}")
    deg = [[grading.degree_of(i, j) for j in range(1, n + 1)] for i in range(1, n + 1)]
    found: List[Permutation] = []
    images: List[int] = []

    def extend(k: int, used: set):
        if k == n:
            found.append(Permutation(tuple(c + 1 for c in images)))
            return
        for c in range(n):
            if c in used:
                continue
            if all(deg[images[p]][c] == deg[p][k] and deg[c][images[p]] == deg[k][p] for p in range(k)):
                images.append(c)
                used.add(c)
                extend(k + 1, used)
                used.discard(c)
                images.pop()

    extend(0, set())
    return sorted(found)


@dataclass
class CrossedProductVerdict:
    is_crossed: bool
    reason: str
    H: List[Permutation]
    support: List[int]
    isomorphism: Dict[int, Permutation] = field(default_factory=dict)  # support element -> sigma


def is_crossed_product(grading: ElementaryGrading) -> CrossedProductVerdict:
    """Crossed product grading by its support iff |H| = n"""
    if not grading.is_distinct:
        raise PreconditionViolated(f"tuple ({', '.join(grading.names())}) has repeated entries")
    G, n = grading.group, grading.n
    H = aut_subgroup_H(grading)
    support = grading.support()
    if len(H) != n:
        return CrossedProductVerdict(False, f"|H| = {len(H)} < n = {n}", H, support)
    # u_i = g_1^{-1} g_i; s u_i = u_{sigma_s(i)}
    u = [G.mul(G.inv(grading.tuple[0]), g) for g in grading.tuple]
    position = {x: k + 1 for k, x in enumerate(u)}
    isomorphism: Dict[int, Permutation] = {}
    for s in sorted(set(u)):
        try:
            sigma = Permutation(tuple(position[G.mul(s, x)] for x in u))
        except KeyError:
            raise InvariantViolation(f"|H| = n but {G.name(s)} does not permute the normalized tuple")
        if sigma not in H:
            raise InvariantViolation(f"sigma for {G.name(s)} is not a graded automorphism")
        isomorphism[s] = sigma
    for s, sigma_s in isomorphism.items():
        for t, sigma_t in isomorphism.items():
            if isomorphism[G.mul(s, t)] != sigma_s.compose(sigma_t):
                raise InvariantViolation("s -> sigma_s is not a homomorphism")
    if len(set(isomorphism.values())) != n:
        raise InvariantViolation("s -> sigma_s is not injective")
    if sorted(set(u)) != support:
        raise InvariantViolation("normalized tuple differs from the grading support")
    return CrossedProductVerdict(True, f"|H| = n = {n}", H, support, isomorphism)


def apply_automorphism(sigma: Permutation, matrix: RingMatrix) -> RingMatrix:
    """Lambda_sigma(E_ij) = E_{sigma(i) sigma(j)}"""
    return RingMatrix(matrix.n, {(sigma(i), sigma(j), m): c for (i, j, m), c in matrix.entries.items()},
                      matrix.budget)


def P_matrix(H: Sequence[Permutation], lam: Character, i: int) -> RingMatrix:
    """P(i) = sum over alpha in H of lambda(alpha) E_{alpha(i), alpha(i)}"""
    n = H[0].size
    entries: Dict[Key, CycloScalar] = {}
    for alpha in H:
        key = (alpha(i), alpha(i), 0)
        entries[key] = entries.get(key, ZERO) + lam.value_of(alpha)
    return RingMatrix(n, entries)


def diagonal_character(H_group: FiniteGroup, p: Sequence[CycloScalar]) -> Optional[Character]:
    """The character lambda with Lambda_sigma(diag p) = lambda(sigma)^{-1} diag p for all
    sigma in H, or None when diag p is not such an eigenvector"""
    p = [CycloScalar.of(x) for x in p]
    nonzero = [k for k, x in enumerate(p, start=1) if not x.is_zero()]
    if not nonzero:
        return None
    j0 = nonzero[0]
    values = []
    for sigma in H_group.permutations:
        # Lambda_sigma(diag p) has p_j at position sigma(j)
        image = [ZERO] * len(p)
        for j, x in enumerate(p, start=1):
            image[sigma(j) - 1] = x
        mu = image[j0 - 1] / p[j0 - 1]
        if any(image[k] != mu * p[k] for k in range(len(p))):
            return None
        values.append(mu.inverse())
    character = Character(domain=H_group, values=tuple(values))
    return character if character.is_homomorphism() else None


def witness_polynomial(grading: ElementaryGrading, p: Sequence) -> GPolynomial:
    """f = sum_k p_k x_k x_{k+1} ... x_{k-1} (indices mod n) with deg x_j = g_j^{-1} g_{j+1};
    f(E_12, E_23, ..., E_n1) = diag(p)"""
    if not grading.is_distinct:
        raise PreconditionViolated(f"tuple ({', '.join(grading.names())}) has repeated entries")
    n, G = grading.n, grading.group
    p = [CycloScalar.of(x) for x in p]
    if len(p) != n:
        raise PreconditionViolated(f"diagonal has {len(p)} entries, expected {n}")
    if all(x.is_zero() for x in p):
        raise PreconditionViolated("the diagonal must be non-zero")
    H_group = FiniteGroup.from_permutations(aut_subgroup_H(grading))
    if diagonal_character(H_group, p) is None:
        raise PreconditionViolated(
            "the diagonal is not a linear combination of the matrices P(i) for a character of H"
        )
    variables = [GVar(j, grading.degree_of(j, j % n + 1)) for j in range(1, n + 1)]
    terms = {}
    for k in range(n):
        letters = tuple(variables[(k + s) % n] for s in range(n))
        terms[GMonomial(letters)] = p[k]
    return GPolynomial(terms, G)


def cycle_substitution(grading: ElementaryGrading) -> Dict[GVar, RingMatrix]:
    """x_j -> E_{j, j+1}, the substitution under which the witness polynomial equals diag(p)"""
    n = grading.n
    return {
        GVar(j, grading.degree_of(j, j % n + 1)): RingMatrix.unit(n, j, j % n + 1)
        for j in range(1, n + 1)
    }


@dataclass
class SubstitutionClass:
    units: Tuple[Tuple[int, int], ...]
    sigma: Optional[Permutation]


def subs_classes(grading: ElementaryGrading) -> List[SubstitutionClass]:
    """Every elementary-matrix substitution with non-zero product for the monomial
    x_1 x_2 ... x_n of the witness polynomial, each with the sigma in H carrying
    the substitution E_12, ..., E_n1 onto it (None when there is none)"""
    n = grading.n
    H = set(aut_subgroup_H(grading))
    degrees = [grading.degree_of(j, j % n + 1) for j in range(1, n + 1)]
    result: List[SubstitutionClass] = []

    def walk(row: int, units: List[Tuple[int, int]]):
        k = len(units)
        if k == n:
            rows = tuple(a for a, _ in units)
            sigma = None
            if sorted(rows) == list(range(1, n + 1)):
                candidate = Permutation(rows)
                sigma = candidate if candidate in H else None
            result.append(SubstitutionClass(tuple(units), sigma))
            return
        for col in range(1, n + 1):
            if grading.degree_of(row, col) == degrees[k]:
                walk(col, units + [(row, col)])

    for start in range(1, n + 1):
        walk(start, [])
    return result


# coarsening

def coarsen(grading: ElementaryGrading, phi: Sequence[int], target: FiniteGroup) -> ElementaryGrading:
    """Elementary grading by the image tuple under a homomorphism phi: G -> target"""
    G = grading.group
    if len(phi) != G.order:
        raise NotHomomorphism(f"phi must give an image for each of the {G.order} elements")
    for a in G.elements:
        for b in G.elements:
            if phi[G.mul(a, b)] != target.mul(phi[a], phi[b]):
                raise NotHomomorphism(
                    f"phi({G.name(a)} * {G.name(b)}) != phi({G.name(a)}) * phi({G.name(b)})"
                )
    return ElementaryGrading(target, tuple(phi[g] for g in grading.tuple))


def reduction_hom(source: FiniteGroup, target: FiniteGroup) -> Tuple[int, ...]:
    """Componentwise reduction Z_{m1} x ... -> Z_{k1} x ... with k_i | m_i"""
    if not source.factors or not target.factors or len(source.factors) != len(target.factors):
        raise NotHomomorphism(f"no reduction map from {source} to {target}")
    if any(m % k for m, k in zip(source.factors, target.factors)):
        raise NotHomomorphism(f"{target} is not a quotient of {source} by reduction")
    source_elems = list(itertools.product(*[range(m) for m in source.factors]))
    target_index = {x: k for k, x in enumerate(itertools.product(*[range(k) for k in target.factors]))}
    return tuple(target_index[tuple(a % k for a, k in zip(x, target.factors))] for x in source_elems)


# the canonical Z2-grading and the envelope

def normalize_z2_tuple(values: Sequence[int]) -> Tuple[Tuple[int, ...], Permutation]:
    """Stable sort of a Z2 tuple; sorted[k] = values[sigma(k)]"""
    order = sorted(range(len(values)), key=lambda k: values[k])
    return tuple(values[k] for k in order), Permutation(tuple(k + 1 for k in order))


def envelope(A: GradedMatrixAlgebra, budget: int) -> GradedMatrixAlgebra:
    """M_{a+b}(F) tensor-hat E, realized as M_{a,b}(E)"""
    if A.kind != MNF or A.group.order != 2:
        raise PreconditionViolated("the envelope is built from M_n(F) with a Z2 elementary grading")
    values = tuple(A.grading.tuple)
    normalized, _ = normalize_z2_tuple(values)
    if values != normalized:
        raise TupleNotSorted(
            f"tuple ({', '.join(A.grading.names())}) is not of the form (0,...,0,1,...,1); "
            f"conjugate by the sorting permutation first"
        )
    a = values.count(0)
    b = len(values) - a
    result = GradedMatrixAlgebra.mab(a, b, budget, A.conductor)
    for h in (0, 1):
        tensor_keys = {
            (i, j, mask)
            for i, j in A.grading.units_of_degree(h)
            for mask in basis_masks(budget)
            if parity(mask) == h
        }
        if tensor_keys != set(result.component_keys(h)):
            raise InvariantViolation(f"envelope component {h} differs from M_{{{a},{b}}}(E)")
    logger.debug(f"envelope: M_{a + b}(F) -> M_{{{a},{b}}}(E) at budget {budget}")
    return result


def envelope_compatible(a: int, b: int, budget: int) -> bool:
    """Products of pure tensors E_ij (x) e_S in M_{a+b}(F) (x) E agree with the products
    of e_S E_ij in M_{a,b}(E), and land in the expected component"""
    base = GradedMatrixAlgebra.mnf(ElementaryGrading(Z2, (0,) * a + (1,) * b))
    target = GradedMatrixAlgebra.mab(a, b, budget)
    n = a + b
    pure = [(h, i, j, mask) for h in (0, 1) for (i, j) in base.grading.units_of_degree(h)
            for mask in basis_masks(budget, h)]
    for h1, i, j, m1 in pure:
        for h2, k, l, m2 in pure:
            unit_product = RingMatrix.unit(n, i, j) * RingMatrix.unit(n, k, l)
            grassmann = wedge(GrassmannElement(budget, {m1: ONE}), GrassmannElement(budget, {m2: ONE}))
            via_tensor = RingMatrix(n, {
                (r, c, m): coeff * g for (r, c, _), coeff in unit_product.entries.items()
                for m, g in grassmann.terms.items()
            }, budget)
            direct = RingMatrix.unit(n, i, j, m1, budget=budget) * RingMatrix.unit(n, k, l, m2, budget=budget)
            if via_tensor != direct or not target.is_homogeneous(direct, (h1 + h2) % 2):
                return False
    return True


# evaluation and centrality

def _lookup(assignment: Mapping, var: GVar):
    if var in assignment:
        return assignment[var]
    return assignment.get(var.index)


def evaluate(f: GPolynomial, A: GradedMatrixAlgebra, assignment: Mapping[Union[GVar, int], RingMatrix]) -> RingMatrix:
    """f(a_1, ..., a_m) for an admissible assignment"""
    values: Dict[GVar, RingMatrix] = {}
    for var in f.variables():
        matrix = _lookup(assignment, var)
        expected = A.group.name(var.degree)
        if matrix is None:
            raise NotAdmissible(var.text(f.group), expected, "no value given")
        if not A.is_homogeneous(matrix, var.degree):
            raise NotAdmissible(var.text(f.group), expected, f"got {matrix.text()}")
        values[var] = matrix
    result = RingMatrix.zero(A.n, A.budget)
    for mono, coeff in f.terms.items():
        term = RingMatrix.identity(A.n, A.budget)
        for v in mono.letters:
            term = term * values[v]
            if term.is_zero():
                break
        if not term.is_zero():
            result = result + term.scale(coeff)
    return result


def is_central_element(A: GradedMatrixAlgebra, v: RingMatrix) -> bool:
    """v commutes with every homogeneous basis element"""
    for _, basis_element in full_basis(A):
        if v * basis_element != basis_element * v:
            return False
    return True
