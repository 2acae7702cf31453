"""
Grassmann algebra on a finite number of generators e_1..e_k.

Basis monomials e_{i1}...e_{ij} (i1 < ... < ij) are stored as bitmasks, bit i-1
standing for e_i.
"""
import itertools
from typing import Dict, Iterator, List, Mapping, Optional, Sequence

from core.errors import BudgetExceeded
from core.scalars import CycloScalar, ONE, ZERO

MAX_BUDGET = 62


def canonical_reordering_sign(a_bits: int, b_bits: int) -> int:
    """Sign of e_A * e_B relative to e_{A+B} for disjoint A, B: (-1) to the number of
    pairs (i in A, j in B) with i > j."""
    a_bits >>= 1
    swaps = 0
    while a_bits:
        swaps += bin(a_bits & b_bits).count("1")
        a_bits >>= 1
    return -1 if swaps & 1 else 1


def parity(mask: int) -> int:
    return bin(mask).count("1") & 1


def mask_text(mask: int) -> str:
    if not mask:
        return "1"
    return "".join(f"e{i + 1}" for i in range(mask.bit_length()) if mask >> i & 1)


def mask_from_generators(generators: Sequence[int]) -> int:
    mask = 0
    for g in generators:
        mask |= 1 << (g - 1)
    return mask


def basis_masks(budget: int, parity_filter: Optional[int] = None) -> Iterator[int]:
    """All generator subsets within budget, by size then lexicographically"""
    for size in range(budget + 1):
        if parity_filter is not None and size % 2 != parity_filter:
            continue
        for combo in itertools.combinations(range(budget), size):
            yield sum(1 << i for i in combo)


class GrassmannElement:
    __slots__ = ("budget", "terms")

    def __init__(self, budget: int, terms: Optional[Mapping[int, object]] = None):
        if not 0 <= budget <= MAX_BUDGET:
            raise BudgetExceeded(budget, MAX_BUDGET, "Grassmann algebra")
        clean: Dict[int, CycloScalar] = {}
        limit = 1 << budget
        for mask, coeff in (terms or {}).items():
            if mask >= limit:
                raise BudgetExceeded(mask.bit_length(), budget, f"monomial {mask_text(mask)}")
            c = CycloScalar.of(coeff)
            if not c.is_zero():
                clean[mask] = c
        self.budget = budget
        self.terms = clean

    @classmethod
    def generator(cls, budget: int, i: int) -> "GrassmannElement":
        return cls(budget, {1 << (i - 1): ONE})

    @classmethod
    def monomial(cls, budget: int, generators: Sequence[int], coeff=1) -> "GrassmannElement":
        return cls(budget, {mask_from_generators(generators): coeff})

    @classmethod
    def scalar(cls, budget: int, value=1) -> "GrassmannElement":
        return cls(budget, {0: value})

    def is_zero(self) -> bool:
        return not self.terms

    def parity(self) -> Optional[int]:
        """0 or 1 when homogeneous, None otherwise"""
        parities = {parity(m) for m in self.terms}
        if not parities:
            return 0
        return parities.pop() if len(parities) == 1 else None

    def is_homogeneous(self) -> bool:
        return self.parity() is not None

    def __add__(self, other: "GrassmannElement") -> "GrassmannElement":
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, ZERO) + c
        return GrassmannElement(max(self.budget, other.budget), terms)

    def __neg__(self) -> "GrassmannElement":
        return GrassmannElement(self.budget, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "GrassmannElement") -> "GrassmannElement":
        return self + (-other)

    def scale(self, c) -> "GrassmannElement":
        c = CycloScalar.of(c)
        return GrassmannElement(self.budget, {m: c * v for m, v in self.terms.items()})

    def __mul__(self, other) -> "GrassmannElement":
        if isinstance(other, GrassmannElement):
            return wedge(self, other)
        return self.scale(other)

    def __rmul__(self, other) -> "GrassmannElement":
        return self.scale(other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GrassmannElement):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return f"GrassmannElement({self.budget}, {to_text(self)!r})"

    def __str__(self):
        return to_text(self)


def wedge(a: GrassmannElement, b: GrassmannElement) -> GrassmannElement:
    """Product in E; overlapping supports vanish"""
    terms: Dict[int, CycloScalar] = {}
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            if ma & mb:
                continue
            sign = canonical_reordering_sign(ma, mb)
            product = ca * cb
            key = ma | mb
            terms[key] = terms.get(key, ZERO) + (product if sign > 0 else -product)
    return GrassmannElement(max(a.budget, b.budget), terms)


def parity_component(a: GrassmannElement, p: int) -> GrassmannElement:
    """The E_p part of a"""
    return GrassmannElement(a.budget, {m: c for m, c in a.terms.items() if parity(m) == p % 2})


def parity_representatives(count: int, parities: Sequence[int], budget: int) -> List[GrassmannElement]:
    """One basis monomial per slot, pairwise disjoint supports: odd slots get the next
    fresh generator, even slots the unit"""
    if len(parities) != count:
        raise ValueError(f"expected {count} parities, got {len(parities)}")
    needed = sum(1 for p in parities if p % 2)
    if needed > budget:
        raise BudgetExceeded(needed, budget, "parity representatives")
    result, next_generator = [], 1
    for p in parities:
        if p % 2:
            result.append(GrassmannElement.generator(budget, next_generator))
            next_generator += 1
        else:
            result.append(GrassmannElement.scalar(budget))
    return result


def to_text(a: GrassmannElement) -> str:
    if a.is_zero():
        return "0"
    pieces = []
    for mask in sorted(a.terms, key=lambda m: (bin(m).count("1"), m)):
        c = a.terms[mask]
        body = mask_text(mask)
        if c == ONE:
            pieces.append(("+", body))
        elif c == -ONE:
            pieces.append(("-", body))
        elif c.is_rational():
            q = c.as_fraction()
            number = CycloScalar.of(abs(q))
            pieces.append(("-" if q < 0 else "+", str(number) if mask == 0 else f"{number}*{body}"))
        else:
            pieces.append(("+", f"({c})" if mask == 0 else f"({c})*{body}"))
    first_sign, first = pieces[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, text in pieces[1:]:
        out += f" {sign} {text}"
    return out
