"""
Exact arithmetic in the cyclotomic fields Q(zeta_m)
"""
import re
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import List, Optional, Sequence, Tuple, Union

from sympy import primefactors, totient

from core.errors import ZeroInverse
from core.linalg import solve_linear

Number = Union[int, Fraction, "CycloScalar"]


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> Tuple[int, ...]:
    """Coefficients (lowest degree first) of the m-th cyclotomic polynomial.

    Phi_m = (t^m - 1) / prod_{d | m, d < m} Phi_d, computed by exact division.
    """
    if m <= 0:
        raise ValueError("The argument to cyclotomic_polynomial must be positive.")
    poly = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            poly, rem = _divmod_monic(poly, list(cyclotomic_polynomial(d)))
            assert not any(rem)
    return tuple(poly)


def _divmod_monic(num: List, den: List) -> Tuple[List, List]:
    num = list(num)
    shift = len(num) - len(den)
    if shift < 0:
        return [0], num
    quotient = [0] * (shift + 1)
    for k in range(shift, -1, -1):
        c = num[k + len(den) - 1]
        quotient[k] = c
        if c:
            for j, d in enumerate(den):
                num[k + j] -= c * d
    return quotient, num[:len(den) - 1]


def phi(m: int) -> int:
    return int(totient(m))


def _reduce(poly: Sequence[Fraction], m: int) -> List[Fraction]:
    """Remainder of poly modulo Phi_m, padded to length phi(m)"""
    cyc = cyclotomic_polynomial(m)
    deg = len(cyc) - 1
    coeffs = [Fraction(c) for c in poly]
    for k in range(len(coeffs) - 1, deg - 1, -1):
        c = coeffs[k]
        if c:
            for j in range(deg):
                coeffs[k - deg + j] -= c * cyc[j]
            coeffs[k] = Fraction(0)
    coeffs = coeffs[:deg]
    return coeffs + [Fraction(0)] * (deg - len(coeffs))


def _lift(coeffs: Sequence[Fraction], source: int, target: int) -> List[Fraction]:
    """Embed Q(zeta_source) into Q(zeta_target) via zeta_source = zeta_target^(target/source)"""
    if source == target:
        return list(coeffs)
    step = target // source
    poly = [Fraction(0)] * ((len(coeffs) - 1) * step + 1)
    for j, c in enumerate(coeffs):
        poly[j * step] = c
    return _reduce(poly, target)


@lru_cache(maxsize=None)
def _subfield_basis(m: int, p: int) -> Tuple[Tuple[Fraction, ...], ...]:
    """Images of the powers of zeta_{m/p} inside Q(zeta_m)"""
    d = m // p
    columns = []
    for j in range(phi(d)):
        poly = [Fraction(0)] * (p * j + 1)
        poly[p * j] = Fraction(1)
        columns.append(tuple(_reduce(poly, m)))
    return tuple(columns)


def _canonical(m: int, coeffs: Sequence[Fraction]) -> Tuple[int, Tuple[Fraction, ...]]:
    """Descend to the least conductor whose field contains the value"""
    coeffs = [Fraction(c) for c in coeffs]
    while m > 1:
        if not any(coeffs[1:]):
            return 1, (coeffs[0],)
        for p in primefactors(m):
            solution = solve_linear(_subfield_basis(m, p), coeffs)
            if solution is not None:
                m, coeffs = m // p, solution
                break
        else:
            break
    return m, tuple(coeffs)


class CycloScalar:
    """Element of Q(zeta_m), stored in the power basis of its least conductor.

    Equality is structural because the representation is canonical.
    """

    __slots__ = ("conductor", "coeffs", "_hash")

    def __init__(self, conductor: int = 1, coeffs: Sequence = (0,), *, canonical: bool = False):
        if conductor < 1:
            raise ValueError(f"conductor must be positive, got {conductor}")
        if not canonical:
            coeffs = [Fraction(c) for c in coeffs]
            if len(coeffs) > phi(conductor):
                coeffs = _reduce(coeffs, conductor)
            coeffs = coeffs + [Fraction(0)] * (phi(conductor) - len(coeffs))
            conductor, coeffs = _canonical(conductor, coeffs)
        object.__setattr__(self, "conductor", conductor)
        object.__setattr__(self, "coeffs", tuple(coeffs))
        object.__setattr__(self, "_hash", hash((conductor, self.coeffs)))

    def __setattr__(self, key, value):
        raise AttributeError("CycloScalar is immutable")

    @classmethod
    def of(cls, value: Number) -> "CycloScalar":
        if isinstance(value, CycloScalar):
            return value
        return cls(1, (Fraction(value),), canonical=True)

    # queries

    def is_zero(self) -> bool:
        return self.conductor == 1 and self.coeffs[0] == 0

    def is_rational(self) -> bool:
        return self.conductor == 1

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    def __bool__(self):
        return not self.is_zero()

    # arithmetic

    def _common(self, other: "CycloScalar") -> Tuple[int, List[Fraction], List[Fraction]]:
        m = self.conductor * other.conductor // gcd(self.conductor, other.conductor)
        return m, _lift(self.coeffs, self.conductor, m), _lift(other.coeffs, other.conductor, m)

    def __add__(self, other: Number) -> "CycloScalar":
        other = _coerce(other)
        if other is None:
            return NotImplemented
        if self.conductor == 1 and other.conductor == 1:
            return CycloScalar(1, (self.coeffs[0] + other.coeffs[0],), canonical=True)
        m, a, b = self._common(other)
        return CycloScalar(m, [x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self) -> "CycloScalar":
        return CycloScalar(self.conductor, tuple(-c for c in self.coeffs), canonical=True)

    def __sub__(self, other: Number) -> "CycloScalar":
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Number) -> "CycloScalar":
        return (-self) + other

    def __mul__(self, other: Number) -> "CycloScalar":
        other = _coerce(other)
        if other is None:
            return NotImplemented
        if other.conductor == 1:
            c = other.coeffs[0]
            if c == 0:
                return ZERO
            return CycloScalar(self.conductor, tuple(x * c for x in self.coeffs), canonical=True)
        if self.conductor == 1:
            return other * self
        m, a, b = self._common(other)
        product = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        product[i + j] += x * y
        return CycloScalar(m, _reduce(product, m))

    __rmul__ = __mul__

    def inverse(self) -> "CycloScalar":
        if self.is_zero():
            raise ZeroInverse("zero has no inverse")
        if self.conductor == 1:
            return CycloScalar(1, (1 / self.coeffs[0],), canonical=True)
        m = self.conductor
        n = phi(m)
        # columns: self * zeta^j for j < phi(m); solve for the coordinates of 1
        columns = []
        for j in range(n):
            shifted = [Fraction(0)] * j + list(self.coeffs)
            columns.append(_reduce(shifted, m))
        target = [Fraction(1)] + [Fraction(0)] * (n - 1)
        solution = solve_linear(columns, target)
        if solution is None:
            raise ZeroInverse(f"{self} is not invertible")
        return CycloScalar(m, solution)

    def __truediv__(self, other: Number) -> "CycloScalar":
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other: Number) -> "CycloScalar":
        return CycloScalar.of(other) * self.inverse()

    def __pow__(self, k: int) -> "CycloScalar":
        if k < 0:
            return self.inverse() ** (-k)
        result, base = ONE, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # comparison

    def __eq__(self, other) -> bool:
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self.conductor == other.conductor and self.coeffs == other.coeffs

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"CycloScalar({to_text(self)!r})"

    def __str__(self):
        return to_text(self)


def _coerce(value) -> Optional[CycloScalar]:
    if isinstance(value, CycloScalar):
        return value
    if isinstance(value, (int, Fraction)):
        return CycloScalar.of(value)
    return None


ZERO = CycloScalar(1, (Fraction(0),), canonical=True)
ONE = CycloScalar(1, (Fraction(1),), canonical=True)


def add(a: CycloScalar, b: CycloScalar) -> CycloScalar:
    return a + b


def mul(a: CycloScalar, b: CycloScalar) -> CycloScalar:
    return a * b


def inverse(a: CycloScalar) -> CycloScalar:
    return CycloScalar.of(a).inverse()


def root_of_unity(m: int, k: int = 1) -> CycloScalar:
    """zeta_m^k in canonical form"""
    if m < 1:
        raise ValueError(f"root_of_unity needs m >= 1, got {m}")
    k %= m
    if m == 1 or k == 0:
        return ONE
    # zeta_m^k = zeta_{m/g}^{k/g}; t^k reduced modulo Phi_m
    poly = [Fraction(0)] * (k + 1)
    poly[k] = Fraction(1)
    return CycloScalar(m, _reduce(poly, m))


def torsion_order(m: int) -> int:
    """Number of roots of unity in Q(zeta_m)"""
    if m < 1:
        raise ValueError(f"torsion_order needs m >= 1, got {m}")
    return m if m % 2 == 0 else 2 * m


def multiplicative_order(a: CycloScalar, bound: Optional[int] = None) -> Optional[int]:
    """Order of a root of unity, None when a is not one"""
    a = CycloScalar.of(a)
    if a.is_zero():
        return None
    bound = bound or torsion_order(a.conductor)
    power = a
    for k in range(1, bound + 1):
        if power == ONE:
            return k
        power = power * a
    return None


# textual form: "a/b", "z{m}^k" and sums of rational multiples of them

_TERM = re.compile(
    r"\s*([+-])?\s*(?:(\d+)(?:\s*/\s*(\d+))?)?\s*(\*)?\s*(?:z(\d+)\s*(?:\^\s*(\d+))?)?\s*"
)


def parse_scalar(text: str) -> CycloScalar:
    """Parse sums like "1/2", "-z3^1", "1 - 2*z4^1" into a CycloScalar"""
    source = text.strip()
    if not source:
        raise ValueError("empty scalar")
    total = ZERO
    pos = 0
    while pos < len(source):
        match = _TERM.match(source, pos)
        sign, num, den, star, cond, power = match.groups()
        if match.end() == pos or (num is None and cond is None):
            raise ValueError(f"cannot parse scalar '{text}' at position {pos}")
        if pos > 0 and sign is None:
            raise ValueError(f"missing operator in scalar '{text}' at position {pos}")
        if star and (num is None or cond is None):
            raise ValueError(f"dangling '*' in scalar '{text}'")
        value = CycloScalar.of(Fraction(int(num), int(den) if den else 1)) if num is not None else ONE
        if cond is not None:
            value = value * root_of_unity(int(cond), int(power) if power else 1)
        total = total - value if sign == "-" else total + value
        pos = match.end()
    return total


def _fraction_text(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def to_text(a: CycloScalar) -> str:
    """Inverse of parse_scalar; power-basis coordinates of the least conductor"""
    a = CycloScalar.of(a)
    if a.is_rational():
        c = a.coeffs[0]
        return ("-" if c < 0 else "") + _fraction_text(abs(c))
    pieces = []
    for j, c in enumerate(a.coeffs):
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if j == 0:
            body = _fraction_text(mag)
        elif mag == 1:
            body = f"z{a.conductor}^{j}"
        else:
            body = f"{_fraction_text(mag)}*z{a.conductor}^{j}"
        pieces.append((sign, body))
    first_sign, first_body = pieces[0]
    text = ("-" if first_sign == "-" else "") + first_body
    for sign, body in pieces[1:]:
        text += f" {sign} {body}"
    return text
