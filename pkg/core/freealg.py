"""
The free G-graded associative algebra: graded variables, monomials and polynomials,
substitution, multihomogeneous decomposition, multilinearization, the derivation
expansion of a commutator and the commutation-factor transforms.
"""
import itertools
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING, Dict, List, Mapping, Optional, Tuple, Union

from core.errors import DegreeMismatch, NonMultilinear
from core.groups import FiniteGroup, TRIVIAL_GROUP
from core.scalars import CycloScalar, ONE, ZERO

if TYPE_CHECKING:
    from core.regular import Bicharacter


@dataclass(frozen=True, order=True)
class GVar:
    """x_{i,g}: variable index and degree (an element index of the grading group)"""
    index: int
    degree: int = 0

    def text(self, group: FiniteGroup) -> str:
        if self.degree == group.identity:
            return f"x{self.index}"
        return f"x{self.index}[{group.name(self.degree)}]"


@dataclass(frozen=True)
class GMonomial:
    letters: Tuple[GVar, ...] = ()

    def sort_key(self):
        return (len(self.letters), tuple((v.index, v.degree) for v in self.letters))

    def __lt__(self, other: "GMonomial") -> bool:
        return self.sort_key() < other.sort_key()

    def __mul__(self, other: "GMonomial") -> "GMonomial":
        return GMonomial(self.letters + other.letters)

    def __len__(self):
        return len(self.letters)

    def degree(self, group: FiniteGroup) -> int:
        d = group.identity
        for v in self.letters:
            d = group.mul(d, v.degree)
        return d

    def variables(self) -> List[GVar]:
        return sorted(set(self.letters))

    def multidegree(self) -> Tuple[Tuple[GVar, int], ...]:
        counts: Dict[GVar, int] = defaultdict(int)
        for v in self.letters:
            counts[v] += 1
        return tuple(sorted(counts.items()))

    def text(self, group: FiniteGroup) -> str:
        if not self.letters:
            return "1"
        return "*".join(v.text(group) for v in self.letters)


UNIT = GMonomial()
Scalar = Union[int, Fraction, CycloScalar]


class GPolynomial:
    """Finite linear combination of graded monomials with CycloScalar coefficients.

    Terms with zero coefficient are never stored, so two polynomials are equal
    iff their term mappings are equal.
    """

    __slots__ = ("terms", "group")

    def __init__(self, terms: Optional[Mapping[GMonomial, Scalar]] = None, group: FiniteGroup = TRIVIAL_GROUP):
        clean: Dict[GMonomial, CycloScalar] = {}
        for mono, coeff in (terms or {}).items():
            c = CycloScalar.of(coeff)
            if not c.is_zero():
                clean[mono] = c
        self.terms = clean
        self.group = group
        _check_variables(clean, group)

    # constructors

    @classmethod
    def variable(cls, index: int, degree: int = 0, group: FiniteGroup = TRIVIAL_GROUP) -> "GPolynomial":
        return cls({GMonomial((GVar(index, degree),)): ONE}, group)

    @classmethod
    def constant(cls, value: Scalar, group: FiniteGroup = TRIVIAL_GROUP) -> "GPolynomial":
        return cls({UNIT: value}, group)

    @classmethod
    def from_monomial(cls, mono: GMonomial, coeff: Scalar = 1, group: FiniteGroup = TRIVIAL_GROUP) -> "GPolynomial":
        return cls({mono: coeff}, group)

    # queries

    def is_zero(self) -> bool:
        return not self.terms

    def sorted_terms(self) -> List[Tuple[GMonomial, CycloScalar]]:
        return sorted(self.terms.items(), key=lambda item: item[0].sort_key())

    def variables(self) -> List[GVar]:
        return sorted({v for mono in self.terms for v in mono.letters})

    def total_degree(self) -> int:
        return max((len(m) for m in self.terms), default=0)

    def multidegree(self) -> Optional[Tuple[Tuple[GVar, int], ...]]:
        """Common multidegree, None when not multihomogeneous"""
        degrees = {mono.multidegree() for mono in self.terms}
        return degrees.pop() if len(degrees) == 1 else None

    def is_multihomogeneous(self) -> bool:
        return self.is_zero() or self.multidegree() is not None

    def is_multilinear(self) -> bool:
        md = self.multidegree()
        return md is not None and all(count == 1 for _, count in md)

    def degree(self) -> Optional[int]:
        """G-degree when homogeneous, None otherwise"""
        degrees = {mono.degree(self.group) for mono in self.terms}
        if not degrees:
            return self.group.identity
        return degrees.pop() if len(degrees) == 1 else None

    # arithmetic

    def _group_with(self, other: "GPolynomial") -> FiniteGroup:
        if self.group is TRIVIAL_GROUP:
            return other.group
        return self.group

    def __add__(self, other: "GPolynomial") -> "GPolynomial":
        if not isinstance(other, GPolynomial):
            other = GPolynomial.constant(other, self.group)
        terms = dict(self.terms)
        for mono, coeff in other.terms.items():
            terms[mono] = terms.get(mono, ZERO) + coeff
        return GPolynomial(terms, self._group_with(other))

    __radd__ = __add__

    def __neg__(self) -> "GPolynomial":
        return GPolynomial({m: -c for m, c in self.terms.items()}, self.group)

    def __sub__(self, other: "GPolynomial") -> "GPolynomial":
        if not isinstance(other, GPolynomial):
            other = GPolynomial.constant(other, self.group)
        return self + (-other)

    def __rsub__(self, other) -> "GPolynomial":
        return (-self) + other

    def scale(self, c: Scalar) -> "GPolynomial":
        c = CycloScalar.of(c)
        return GPolynomial({m: c * coeff for m, coeff in self.terms.items()}, self.group)

    def __mul__(self, other) -> "GPolynomial":
        if not isinstance(other, GPolynomial):
            return self.scale(other)
        terms: Dict[GMonomial, CycloScalar] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mono = m1 * m2
                terms[mono] = terms.get(mono, ZERO) + c1 * c2
        return GPolynomial(terms, self._group_with(other))

    def __rmul__(self, other) -> "GPolynomial":
        return self.scale(other)

    def __pow__(self, k: int) -> "GPolynomial":
        if k < 0:
            raise ValueError("negative powers are not defined in the free algebra")
        result = GPolynomial.constant(1, self.group)
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, GPolynomial):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return f"GPolynomial({to_text(self)!r})"

    def __str__(self):
        return to_text(self)


def _check_variables(terms: Mapping[GMonomial, CycloScalar], group: FiniteGroup):
    seen: Dict[int, int] = {}
    for mono in terms:
        for v in mono.letters:
            if v.degree >= group.order:
                raise DegreeMismatch(f"x{v.index} has degree index {v.degree} outside {group}")
            if seen.setdefault(v.index, v.degree) != v.degree:
                raise DegreeMismatch(
                    f"variable index {v.index} used with degrees {group.name(seen[v.index])} "
                    f"and {group.name(v.degree)}"
                )


def commutator(p: GPolynomial, q: GPolynomial) -> GPolynomial:
    return p * q - q * p


def to_text(f: GPolynomial) -> str:
    """Printable form accepted back by the polynomial parser"""
    if f.is_zero():
        return "0"
    pieces = []
    for mono, c in f.sorted_terms():
        body = mono.text(f.group)
        if c.is_rational():
            q = c.as_fraction()
            sign = "-" if q < 0 else "+"
            mag = abs(q)
            if mag == 1:
                text = body
            else:
                number = str(mag.numerator) if mag.denominator == 1 else f"{mag.numerator}/{mag.denominator}"
                text = number if body == "1" else f"{number}*{body}"
        else:
            sign = "+"
            text = f"({c})" if body == "1" else f"({c})*{body}"
        pieces.append((sign, text))
    first_sign, first = pieces[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, text in pieces[1:]:
        out += f" {sign} {text}"
    return out


# substitution and decomposition

def substitute(f: GPolynomial, assignment: Mapping[GVar, GPolynomial], check_degrees: bool = True) -> GPolynomial:
    """Replace variables by polynomials of the same G-degree"""
    group = f.group
    if check_degrees:
        for var, poly in assignment.items():
            deg = poly.degree()
            if deg is None:
                raise DegreeMismatch(f"substitution for {var.text(group)} is not homogeneous")
            if not poly.is_zero() and deg != var.degree:
                raise DegreeMismatch(
                    f"substitution for {var.text(group)} has degree {poly.group.name(deg)}, "
                    f"expected {group.name(var.degree)}"
                )
    result = GPolynomial({}, group)
    for mono, coeff in f.terms.items():
        term = GPolynomial.constant(coeff, group)
        for v in mono.letters:
            image = assignment.get(v)
            term = term * (image if image is not None else GPolynomial.variable(v.index, v.degree, group))
        result = result + term
    if result.group is not group:
        result = GPolynomial(result.terms, group)
    return result


def multihomogeneous_components(f: GPolynomial) -> List[GPolynomial]:
    """Components by multidegree, ordered by total degree then multidegree"""
    buckets: Dict[tuple, Dict[GMonomial, CycloScalar]] = defaultdict(dict)
    for mono, coeff in f.terms.items():
        buckets[mono.multidegree()][mono] = coeff
    keys = sorted(buckets, key=lambda md: (sum(c for _, c in md), md))
    return [GPolynomial(buckets[k], f.group) for k in keys]


def multilinearize_with_map(f: GPolynomial) -> Tuple[GPolynomial, Dict[GVar, List[GVar]]]:
    """Full polarization of a multihomogeneous polynomial.

    Variables of degree one keep their index; every variable of degree d >= 2 is
    replaced by d fresh variables of the same G-degree taking the smallest indices
    not kept, allocated in increasing order of the original index.
    """
    md = f.multidegree()
    if md is None:
        if f.is_zero():
            return f, {}
        raise NonMultilinear("multilinearize needs a multihomogeneous polynomial")
    kept = {v.index for v, count in md if count == 1}
    fresh_indices = (i for i in itertools.count(1) if i not in kept)
    mapping: Dict[GVar, List[GVar]] = {}
    for v, count in md:
        if count == 1:
            mapping[v] = [v]
        else:
            mapping[v] = [GVar(next(fresh_indices), v.degree) for _ in range(count)]
    terms: Dict[GMonomial, CycloScalar] = {}
    for mono, coeff in f.terms.items():
        positions: Dict[GVar, List[int]] = defaultdict(list)
        for pos, v in enumerate(mono.letters):
            positions[v].append(pos)
        variables = sorted(positions)
        for choice in itertools.product(*[itertools.permutations(mapping[v]) for v in variables]):
            letters = list(mono.letters)
            for v, images in zip(variables, choice):
                for pos, image in zip(positions[v], images):
                    letters[pos] = image
            key = GMonomial(tuple(letters))
            terms[key] = terms.get(key, ZERO) + coeff
    return GPolynomial(terms, f.group), mapping


def multilinearize(f: GPolynomial) -> GPolynomial:
    return multilinearize_with_map(f)[0]


def derivation_components(f: GPolynomial) -> Dict[GVar, Tuple[GVar, GPolynomial]]:
    """For each variable x_i, a fresh z_i of the same degree and h_i: the part of
    f(..., x_i + z_i, ...) of degree one in z_i"""
    variables = f.variables()
    top = max((v.index for v in variables), default=0)
    result: Dict[GVar, Tuple[GVar, GPolynomial]] = {}
    for k, x in enumerate(variables, start=1):
        z = GVar(top + k, x.degree)
        terms: Dict[GMonomial, CycloScalar] = {}
        for mono, coeff in f.terms.items():
            for pos, v in enumerate(mono.letters):
                if v == x:
                    letters = mono.letters[:pos] + (z,) + mono.letters[pos + 1:]
                    key = GMonomial(letters)
                    terms[key] = terms.get(key, ZERO) + coeff
        result[x] = (z, GPolynomial(terms, f.group))
    return result


def commutator_expansion(f: GPolynomial, y: GPolynomial) -> GPolynomial:
    """sum_i h_i(x, [x_i, y]), which equals [f, y] since [., y] is a derivation"""
    total = GPolynomial({}, f.group)
    for x, (z, h) in derivation_components(f).items():
        x_poly = GPolynomial.variable(x.index, x.degree, f.group)
        total = total + substitute(h, {z: commutator(x_poly, y)}, check_degrees=False)
    return total


def rename_disjoint(f: GPolynomial, offset: int) -> GPolynomial:
    """Copy of f with every variable index shifted by offset"""
    terms = {
        GMonomial(tuple(GVar(v.index + offset, v.degree) for v in mono.letters)): coeff
        for mono, coeff in f.terms.items()
    }
    return GPolynomial(terms, f.group)


def rename_variables(f: GPolynomial, mapping: Mapping[int, int]) -> GPolynomial:
    terms = {
        GMonomial(tuple(GVar(mapping.get(v.index, v.index), v.degree) for v in mono.letters)): coeff
        for mono, coeff in f.terms.items()
    }
    return GPolynomial(terms, f.group)


def product_of_copies(f: GPolynomial, k: int) -> GPolynomial:
    """f(x_1..) * f(x_{s+1}..) * ... with k copies in pairwise disjoint variables"""
    shift = max((v.index for v in f.variables()), default=0)
    result = f
    for copy in range(1, k):
        result = result * rename_disjoint(f, copy * shift)
    return result


def split_product(f: GPolynomial) -> Optional[Tuple[GPolynomial, GPolynomial]]:
    """Find f = f1 * f2 with f1, f2 in disjoint sets of variables.

    Returns the split with the shortest left factor, or None. Every monomial must
    cut into a prefix over the left variables and a suffix over the rest, and the
    coefficient table of (prefix, suffix) pairs must have rank one.
    """
    if f.is_zero() or len(f.variables()) < 2:
        return None
    all_vars = set(f.variables())
    first = min(f.terms, key=GMonomial.sort_key)
    candidates = []
    for cut in range(1, len(first)):
        left = set(first.letters[:cut])
        right = set(first.letters[cut:])
        if left & right or left | right != all_vars:
            continue
        candidates.append(left)
    for left_vars in candidates:
        table: Dict[GMonomial, Dict[GMonomial, CycloScalar]] = defaultdict(dict)
        ok = True
        for mono, coeff in f.terms.items():
            cut = len([v for v in mono.letters if v in left_vars])
            prefix, suffix = mono.letters[:cut], mono.letters[cut:]
            if any(v not in left_vars for v in prefix) or any(v in left_vars for v in suffix):
                ok = False
                break
            table[GMonomial(prefix)][GMonomial(suffix)] = coeff
        if not ok:
            continue
        split = _rank_one(table)
        if split is not None:
            left_terms, right_terms = split
            return GPolynomial(left_terms, f.group), GPolynomial(right_terms, f.group)
    return None


def _rank_one(table: Mapping[GMonomial, Mapping[GMonomial, CycloScalar]]):
    rows = sorted(table, key=GMonomial.sort_key)
    cols = sorted({c for row in table.values() for c in row}, key=GMonomial.sort_key)
    r0 = rows[0]
    c0 = min(table[r0], key=GMonomial.sort_key)
    pivot = table[r0][c0]
    left = {r: table[r].get(c0, ZERO) for r in rows}
    right = {c: table[r0].get(c, ZERO) / pivot for c in cols}
    for r in rows:
        for c in cols:
            if table[r].get(c, ZERO) != left[r] * right[c]:
                return None
    return left, right


def factor_disjoint(f: GPolynomial) -> List[GPolynomial]:
    """Split f into a product of factors in pairwise disjoint variables"""
    factors = []
    rest = f
    while True:
        split = split_product(rest)
        if split is None:
            factors.append(rest)
            return factors
        left, rest = split
        factors.append(left)


# commutation factors

def crossing_scalar(m: GMonomial, h: Mapping[int, int], beta: "Bicharacter") -> CycloScalar:
    """epsilon with m(r_1, ..., r_s) = epsilon * r_1^{d_1} ... r_s^{d_s} for r_i in R_{h_i}.

    Every pair of letters a before b with index(a) > index(b) contributes beta(h_a, h_b).
    """
    eps = ONE
    letters = m.letters
    for p in range(len(letters)):
        a = letters[p].index
        for q in range(p + 1, len(letters)):
            b = letters[q].index
            if a > b:
                eps = eps * beta(h[a], h[b])
    return eps


def transform_f_h(f: GPolynomial, h: Mapping[int, int], beta: "Bicharacter") -> GPolynomial:
    """f_h: every monomial rescaled by its crossing scalar"""
    return GPolynomial({m: crossing_scalar(m, h, beta) * c for m, c in f.terms.items()}, f.group)


def transform_star(f: GPolynomial, beta: "Bicharacter") -> GPolynomial:
    """f*: f_h with h read off the variable degrees of a multilinear f"""
    if not f.is_zero() and not f.is_multilinear():
        raise NonMultilinear("the star transform needs a multilinear polynomial")
    h = {v.index: v.degree for v in f.variables()}
    return transform_f_h(f, h, beta)
