"""
Finite groups as multiplication tables, permutations and degree-1 characters
"""
import csv
import itertools
from dataclasses import dataclass, field
from functools import cached_property
from math import gcd, prod
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from loguru import logger
from sympy.combinatorics import Permutation as SympyPermutation
from sympy.combinatorics import PermutationGroup

from core.errors import InvariantViolation, SpecError, UnknownGroupElement
from core.scalars import CycloScalar, ONE, root_of_unity


@dataclass(frozen=True, order=True)
class Permutation:
    """Bijection of {1..n}; images[i-1] is the image of i"""
    images: Tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(1, len(self.images) + 1)):
            raise ValueError(f"not a permutation: {self.images}")

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def from_cycles(cls, n: int, cycles: Iterable[Sequence[int]]) -> "Permutation":
        images = list(range(1, n + 1))
        for cycle in cycles:
            for k, point in enumerate(cycle):
                images[point - 1] = cycle[(k + 1) % len(cycle)]
        return cls(tuple(images))

    @property
    def size(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def compose(self, other: "Permutation") -> "Permutation":
        """self after other: (self o other)(i) = self(other(i))"""
        return Permutation(tuple(self(other(i)) for i in range(1, self.size + 1)))

    def inverse(self) -> "Permutation":
        images = [0] * self.size
        for i, image in enumerate(self.images, start=1):
            images[image - 1] = i
        return Permutation(tuple(images))

    def is_identity(self) -> bool:
        return self.images == tuple(range(1, self.size + 1))

    def cycles(self) -> List[Tuple[int, ...]]:
        seen, result = set(), []
        for start in range(1, self.size + 1):
            if start in seen:
                continue
            cycle, point = [], start
            while point not in seen:
                seen.add(point)
                cycle.append(point)
                point = self(point)
            if len(cycle) > 1:
                result.append(tuple(cycle))
        return result

    def __str__(self):
        cycles = self.cycles()
        if not cycles:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cycles)

    def to_sympy(self) -> SympyPermutation:
        return SympyPermutation([i - 1 for i in self.images])

    @classmethod
    def from_sympy(cls, perm: SympyPermutation, n: int) -> "Permutation":
        images = perm.array_form + list(range(perm.size, n))
        return cls(tuple(i + 1 for i in images))


@dataclass(frozen=True)
class FiniteGroup:
    """Group on element indices 0..order-1 given by its multiplication table"""
    table: Tuple[Tuple[int, ...], ...]
    names: Tuple[str, ...]
    aliases: Dict[str, int] = field(default_factory=dict, compare=False, hash=False)
    factors: Optional[Tuple[int, ...]] = None            # set for Z_{n1} x ... x Z_{nk}
    permutations: Optional[Tuple[Permutation, ...]] = None  # set for permutation groups
    check: bool = field(default=True, compare=False, hash=False)

    def __post_init__(self):
        n = len(self.table)
        if n == 0 or any(len(row) != n for row in self.table):
            raise SpecError("multiplication table must be square and non-empty")
        if len(self.names) != n:
            raise SpecError("one name per group element is required")
        if self.check:
            self._validate()

    def _validate(self):
        n = self.order
        full = set(range(n))
        for row in self.table:
            if set(row) != full:
                raise SpecError("multiplication table is not a Latin square")
        for col in range(n):
            if {self.table[row][col] for row in range(n)} != full:
                raise SpecError("multiplication table is not a Latin square")
        if n <= 64:
            t = self.table
            for a in range(n):
                for b in range(n):
                    ab = t[a][b]
                    for c in range(n):
                        if t[ab][c] != t[a][t[b][c]]:
                            raise SpecError(f"multiplication is not associative on "
                                            f"({self.names[a]}, {self.names[b]}, {self.names[c]})")

    @property
    def order(self) -> int:
        return len(self.table)

    @property
    def elements(self) -> range:
        return range(self.order)

    @cached_property
    def identity(self) -> int:
        return next(e for e in self.elements if self.table[e][e] == e)

    @cached_property
    def _inverses(self) -> Tuple[int, ...]:
        e = self.identity
        return tuple(next(b for b in self.elements if self.table[a][b] == e) for a in self.elements)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self._inverses[a]

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv(a), -k
        result = self.identity
        for _ in range(k):
            result = self.table[result][a]
        return result

    def element_order(self, a: int) -> int:
        e, x, k = self.identity, a, 1
        while x != e:
            x = self.table[x][a]
            k += 1
        return k

    def is_abelian(self) -> bool:
        return all(self.table[a][b] == self.table[b][a] for a in self.elements for b in self.elements)

    def name(self, a: int) -> str:
        return self.names[a]

    def index(self, name: str) -> int:
        """Resolve an element name or alias"""
        key = name.strip().replace(" ", "")
        if key in self.names:
            return self.names.index(key)
        if key in self.aliases:
            return self.aliases[key]
        raise UnknownGroupElement(name, list(self.names))

    def closure(self, generators: Iterable[int]) -> List[int]:
        """Smallest subgroup containing the generators, sorted"""
        elements = {self.identity}
        frontier = list(elements)
        gens = list(generators)
        while frontier:
            new = []
            for x in frontier:
                for g in gens:
                    y = self.table[x][g]
                    if y not in elements:
                        elements.add(y)
                        new.append(y)
            frontier = new
        return sorted(elements)

    @classmethod
    def from_permutations(cls, perms: Iterable[Permutation]) -> "FiniteGroup":
        """Table of a permutation group; elements sorted by image tuple"""
        elements = sorted(set(perms))
        position = {p: k for k, p in enumerate(elements)}
        try:
            table = tuple(tuple(position[a.compose(b)] for b in elements) for a in elements)
        except KeyError:
            raise SpecError("permutations are not closed under composition")
        names = tuple("e" if p.is_identity() else str(p) for p in elements)
        return cls(table=table, names=names, permutations=tuple(elements), check=False)

    def __str__(self):
        if self.factors:
            return "x".join(f"Z{n}" for n in self.factors)
        return f"group of order {self.order}"


def cyclic_product(orders: Sequence[int]) -> FiniteGroup:
    """Z_{n1} x ... x Z_{nk} with componentwise addition"""
    if not orders or any(n < 1 for n in orders):
        raise SpecError(f"cyclic factor orders must be positive, got {list(orders)}")
    elements = list(itertools.product(*[range(n) for n in orders]))
    position = {x: k for k, x in enumerate(elements)}
    table = tuple(
        tuple(position[tuple((a + b) % n for a, b, n in zip(x, y, orders))] for y in elements)
        for x in elements
    )
    aliases: Dict[str, int] = {}
    if len(orders) == 1:
        n = orders[0]
        names = tuple("e" if k == 0 else "g" if k == 1 else f"g^{k}" for k in range(n))
        for k in range(n):
            aliases[str(k)] = k
            aliases[f"g{k}"] = k
            aliases[f"g^{k}"] = k
    else:
        names = tuple("(" + ",".join(map(str, x)) + ")" for x in elements)
        for k, x in enumerate(elements):
            aliases[",".join(map(str, x))] = k
        aliases["e"] = 0
    aliases.setdefault("e", 0)
    return FiniteGroup(table=table, names=names, aliases=aliases, factors=tuple(orders),
                       check=len(elements) <= 16)


TRIVIAL_GROUP = cyclic_product([1])


def group_from_spec(spec: str) -> FiniteGroup:
    """ "Z2", "Z2xZ4", "trivial" or "table:<path>" """
    text = spec.strip()
    if text.lower() in ("trivial", "1", "z1"):
        return TRIVIAL_GROUP
    if text.startswith("table:"):
        return _group_from_csv(Path(text[len("table:"):]))
    try:
        orders = [int(part.strip()[1:]) for part in text.split("x")]
        if not all(part.strip().upper().startswith("Z") for part in text.split("x")):
            raise ValueError
    except ValueError:
        raise SpecError(f"unknown group spec '{spec}'; expected e.g. Z2, Z2xZ4, trivial, table:<path>")
    return cyclic_product(orders)


def _group_from_csv(path: Path) -> FiniteGroup:
    """CSV table: header row of element names, then one row per element
    starting with its name"""
    try:
        with open(path, newline="") as handle:
            rows = [[cell.strip() for cell in row] for row in csv.reader(handle) if row]
    except OSError as e:
        raise SpecError(f"cannot read group table {path}: {e}")
    header = [cell for cell in rows[0] if cell]
    position = {name: k for k, name in enumerate(header)}
    body = rows[1:]
    if len(body) != len(header):
        raise SpecError(f"group table {path} needs {len(header)} rows, found {len(body)}")
    table = [None] * len(header)
    try:
        for row in body:
            table[position[row[0]]] = tuple(position[cell] for cell in row[1:])
    except KeyError as e:
        raise SpecError(f"group table {path} uses unknown element {e}")
    if any(row is None for row in table):
        raise SpecError(f"group table {path} has duplicate rows")
    return FiniteGroup(table=tuple(table), names=tuple(header))


def subgroup_closure(n: int, generators: Iterable[Permutation]) -> List[Permutation]:
    """All elements of the permutation group generated on {1..n}, sorted"""
    gens = [g.to_sympy() for g in generators]
    if not gens:
        gens = [SympyPermutation(n - 1)]
    group = PermutationGroup(gens)
    return sorted(Permutation.from_sympy(p, n) for p in group.generate())


def orbits(H: Iterable[Permutation], n: int) -> List[List[int]]:
    """Orbits of the natural action on {1..n}, ordered by their least point"""
    perms = list(H)
    seen, result = set(), []
    for point in range(1, n + 1):
        if point in seen:
            continue
        orbit = sorted({p(point) for p in perms} | {point})
        seen.update(orbit)
        result.append(orbit)
    return result


@dataclass(frozen=True)
class Quotient:
    group: FiniteGroup
    projection: Tuple[int, ...]  # element of the source -> element of the quotient

    def __call__(self, a: int) -> int:
        return self.projection[a]


def commutator_subgroup(G: FiniteGroup) -> List[int]:
    commutators = {G.mul(G.mul(a, b), G.mul(G.inv(a), G.inv(b))) for a in G.elements for b in G.elements}
    return G.closure(commutators)


def abelianization(G: FiniteGroup) -> Tuple[FiniteGroup, Quotient]:
    """G/[G,G] and the projection onto it"""
    K = set(commutator_subgroup(G))
    coset_of: Dict[int, int] = {}
    representatives: List[int] = []
    # identity coset first, then cosets ordered by least element
    for a in [G.identity] + [x for x in G.elements if x != G.identity]:
        if a in coset_of:
            continue
        index = len(representatives)
        representatives.append(a)
        for k in K:
            coset_of[G.mul(a, k)] = index
    table = tuple(
        tuple(coset_of[G.mul(a, b)] for b in representatives) for a in representatives
    )
    names = tuple(G.name(a) for a in representatives)
    quotient = FiniteGroup(table=table, names=names, factors=G.factors if not K - {G.identity} else None,
                           check=False)
    logger.debug(f"abelianization: |G| = {G.order}, |[G,G]| = {len(K)}, quotient order {quotient.order}")
    return quotient, Quotient(group=quotient, projection=tuple(coset_of[a] for a in G.elements))


def cyclic_decomposition(A: FiniteGroup) -> List[Tuple[int, int]]:
    """Generators and orders (x_1, d_1), ... with A = <x_1> x ... x <x_k>, A abelian.

    Greedy: an element of maximal order modulo the part found so far, lifted to an
    element of the same order.
    """
    if not A.is_abelian():
        raise ValueError("cyclic_decomposition needs an abelian group")
    e = A.identity
    found: List[Tuple[int, int]] = []
    K = {e}
    while len(K) < A.order:
        def order_mod_k(x):
            y, d = x, 1
            while y not in K:
                y = A.mul(y, x)
                d += 1
            return d

        best = max(A.elements, key=lambda x: (order_mod_k(x), -x))
        d = order_mod_k(best)
        lift = next((best_k for best_k in sorted(A.mul(best, k) for k in K)
                     if A.element_order(best_k) == d), None)
        if lift is None:
            raise InvariantViolation(f"no lift of order {d} for element {A.name(best)}")
        found.append((lift, d))
        K = set(A.closure([x for x, _ in found]))
    return found


@dataclass(frozen=True)
class Character:
    """Homomorphism from a finite group to the roots of unity of the field"""
    domain: FiniteGroup
    values: Tuple[CycloScalar, ...]

    def __call__(self, a: int) -> CycloScalar:
        return self.values[a]

    def value_of(self, perm: Permutation) -> CycloScalar:
        return self.values[self.domain.permutations.index(perm)]

    def is_trivial(self) -> bool:
        return all(v == ONE for v in self.values)

    def is_homomorphism(self) -> bool:
        G = self.domain
        return self.values[G.identity] == ONE and all(
            self.values[G.mul(a, b)] == self.values[a] * self.values[b]
            for a in G.elements for b in G.elements
        )

    def as_dict(self) -> Dict[str, str]:
        return {self.domain.name(a): str(v) for a, v in enumerate(self.values)}


def trivial_character(G: FiniteGroup) -> Character:
    return Character(domain=G, values=tuple(ONE for _ in G.elements))


def homs_to_roots(G: FiniteGroup, r: int) -> List[Character]:
    """Every homomorphism G -> mu_r, the trivial one first"""
    if r < 1:
        raise ValueError(f"torsion order must be positive, got {r}")
    Q, projection = abelianization(G)
    factors = cyclic_decomposition(Q)
    # coordinates of each quotient element in the cyclic decomposition
    coords: Dict[int, Tuple[int, ...]] = {}
    for exponents in itertools.product(*[range(d) for _, d in factors]):
        x = Q.identity
        for (gen, _), k in zip(factors, exponents):
            x = Q.mul(x, Q.power(gen, k))
        coords[x] = exponents
    # the image of a generator of order d is zeta_r^k with d*k = 0 mod r
    choices = [[k for k in range(0, r, r // gcd(r, d))] for _, d in factors]
    characters = []
    for ks in itertools.product(*choices):
        values = []
        for a in G.elements:
            exponent = sum(k * c for k, c in zip(ks, coords[projection(a)]))
            values.append(root_of_unity(r, exponent))
        characters.append(Character(domain=G, values=tuple(values)))
    expected = prod(gcd(d, r) for _, d in factors)
    assert len(characters) == expected
    logger.debug(f"homs_to_roots: {len(characters)} characters into mu_{r} "
                 f"(cyclic factors {[d for _, d in factors]})")
    return characters
