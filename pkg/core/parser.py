"""
Text formats: polynomials, algebra specs, matrix literals and substitutions.

Polynomials are read by a small recursive descent parser:

    poly   := ['+' | '-'] term (('+' | '-') term)*
    term   := factor ('*'? factor)*
    factor := atom ('^' NAT)*
    atom   := var | coeff | '(' poly ')' | '[' poly ',' poly ']'
    var    := 'x' NAT ('[' NAME ']')?
    coeff  := NAT ('/' NAT)? | 'z' NAT ('^' NAT)?

A bracket right after a variable is its degree tag unless it holds a comma outside
parentheses, in which case it opens a commutator. Tags of product groups are
written with parentheses, x1[(1,0)].
"""
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, List, Optional

from loguru import logger

from core.errors import NotAdmissible, PolynomialSyntaxError, SpecError
from core.freealg import GPolynomial, commutator
from core.grassmann import canonical_reordering_sign
from core.groups import FiniteGroup, group_from_spec
from core.matalg import KINDS, MAB, MNE, ElementaryGrading, GradedMatrixAlgebra, RingMatrix
from core.scalars import CycloScalar, ONE, parse_scalar, root_of_unity


@dataclass
class Token:
    kind: str
    text: str
    line: int
    column: int
    groups: tuple = ()


class Lexer:
    grammar = [
        (r"x(\d+)(?:\[((?:\([^()]*\)|[^\[\](),])+)\])?", "VAR"),
        (r"z(\d+)(?:\^(\d+))?", "ROOT"),
        (r"\d+", "NAT"),
        (r"[-+*/^()\[\],]", "OP"),
    ]

    def __init__(self, text: str):
        self.text = text
        self.regex = re.compile("|".join(f"(?P<{kind}>{pattern})" for pattern, kind in self.grammar))

    def tokenize(self) -> Iterator[Token]:
        line, line_start, index = 1, 0, 0
        while index < len(self.text):
            char = self.text[index]
            if char == "\n":
                line, line_start, index = line + 1, index + 1, index + 1
                continue
            if char.isspace():
                index += 1
                continue
            match = self.regex.match(self.text, index)
            if not match:
                raise PolynomialSyntaxError(f"unexpected character '{char}'", line, index - line_start + 1)
            kind = match.lastgroup
            groups = ()
            if kind == "VAR":
                groups = (match.group(2), match.group(3))
            elif kind == "ROOT":
                groups = (match.group(5), match.group(6))
            yield Token(kind, match.group(0), line, index - line_start + 1, groups)
            index = match.end()
        yield Token("END", "", line, index - line_start + 1)


class PolynomialParser:
    """Recursive descent over the token stream; one instance per text"""

    def __init__(self, text: str, group: FiniteGroup):
        self.group = group
        self.tokens = list(Lexer(text).tokenize())
        self.position = 0

    @property
    def token(self) -> Token:
        return self.tokens[self.position]

    def peek(self, text: str) -> bool:
        return self.token.kind == "OP" and self.token.text == text

    def accept(self, text: str) -> bool:
        if self.peek(text):
            self.position += 1
            return True
        return False

    def expect(self, text: str):
        if not self.accept(text):
            self.fail(f"expected '{text}'")

    def fail(self, message: str):
        found = self.token.text or "end of input"
        raise PolynomialSyntaxError(f"{message}, found '{found}'", self.token.line, self.token.column)

    def parse(self) -> GPolynomial:
        result = self.poly()
        if self.token.kind != "END":
            self.fail("unexpected input after polynomial")
        return result

    def poly(self) -> GPolynomial:
        negative = False
        if self.accept("-"):
            negative = True
        else:
            self.accept("+")
        result = self.term()
        if negative:
            result = -result
        while self.peek("+") or self.peek("-"):
            sign = self.token.text
            self.position += 1
            term = self.term()
            result = result + term if sign == "+" else result - term
        return result

    def _starts_factor(self) -> bool:
        token = self.token
        return token.kind in ("VAR", "ROOT", "NAT") or self.peek("(") or self.peek("[")

    def term(self) -> GPolynomial:
        result = self.factor()
        while True:
            if self.accept("*"):
                result = result * self.factor()
            elif self._starts_factor():
                result = result * self.factor()
            else:
                return result

    def factor(self) -> GPolynomial:
        result = self.atom()
        while self.accept("^"):
            if self.token.kind != "NAT":
                self.fail("expected an exponent")
            result = result ** int(self.token.text)
            self.position += 1
        return result

    def atom(self) -> GPolynomial:
        token = self.token
        if token.kind == "VAR":
            self.position += 1
            index, tag = token.groups
            if int(index) < 1:
                raise PolynomialSyntaxError("variable indices start at 1", token.line, token.column)
            degree = self.group.identity if tag is None else self.group.index(tag.strip())
            return GPolynomial.variable(int(index), degree, self.group)
        if token.kind == "ROOT":
            self.position += 1
            m, k = token.groups
            if int(m) < 1:
                raise PolynomialSyntaxError("root of unity needs m >= 1", token.line, token.column)
            return GPolynomial.constant(root_of_unity(int(m), int(k) if k else 1), self.group)
        if token.kind == "NAT":
            self.position += 1
            value = Fraction(int(token.text))
            if self.peek("/") and self.tokens[self.position + 1].kind == "NAT":
                self.position += 1
                denominator = int(self.token.text)
                if denominator == 0:
                    raise PolynomialSyntaxError("zero denominator", self.token.line, self.token.column)
                value /= denominator
                self.position += 1
            return GPolynomial.constant(value, self.group)
        if self.accept("("):
            inner = self.poly()
            self.expect(")")
            return inner
        if self.accept("["):
            left = self.poly()
            self.expect(",")
            right = self.poly()
            self.expect("]")
            return commutator(left, right)
        self.fail("expected a variable, coefficient, '(' or '['")


def parse_polynomial(text: str, group: FiniteGroup) -> GPolynomial:
    polynomial = PolynomialParser(text, group).parse()
    logger.debug(f"parsed '{text}' with {len(polynomial.terms)} terms")
    return polynomial


# algebra specs

def parse_key_values(text: str) -> Dict[str, str]:
    values: Dict[str, str] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise SpecError(f"line {number}: expected 'key = value', got '{raw.strip()}'")
        key, value = (part.strip() for part in line.split("=", 1))
        if key in values:
            raise SpecError(f"line {number}: duplicate key '{key}'")
        values[key] = value
    return values


def _int_value(values: Dict[str, str], key: str, default: Optional[int] = None) -> Optional[int]:
    if key not in values:
        return default
    try:
        return int(values[key])
    except ValueError:
        raise SpecError(f"'{key}' must be an integer, got '{values[key]}'")


def parse_algebra_spec(text: str, budget: Optional[int] = None, conductor: Optional[int] = None,
                       default_budget: int = 6, default_conductor: int = 1) -> GradedMatrixAlgebra:
    """Algebra from a key-value spec; explicit budget or conductor arguments win over the file"""
    values = parse_key_values(text)
    known = {"kind", "n", "group", "tuple", "conductor", "budget", "a", "b"}
    unknown = sorted(set(values) - known)
    if unknown:
        raise SpecError(f"unknown keys in algebra spec: {', '.join(unknown)}")
    kind = values.get("kind")
    if kind not in KINDS:
        raise SpecError(f"kind must be one of {', '.join(KINDS)}, got '{kind}'")
    conductor = conductor if conductor is not None else _int_value(values, "conductor", default_conductor)
    budget = budget if budget is not None else _int_value(values, "budget", default_budget)
    if kind == MAB:
        a, b = _int_value(values, "a"), _int_value(values, "b")
        if a is None or b is None or a < 0 or b < 0 or a + b == 0:
            raise SpecError("Mab needs non-negative a and b with a + b >= 1")
        algebra = GradedMatrixAlgebra.mab(a, b, budget, conductor)
    else:
        group = group_from_spec(values.get("group", "trivial"))
        names = [name.strip() for name in values.get("tuple", "").split(",") if name.strip()]
        if not names:
            names = [group.name(group.identity)] * _int_value(values, "n", 1)
        n = _int_value(values, "n", len(names))
        if n != len(names):
            raise SpecError(f"n = {n} but the tuple has {len(names)} entries")
        grading = ElementaryGrading(group, tuple(group.index(name) for name in names))
        if kind == MNE:
            algebra = GradedMatrixAlgebra.mne(grading, budget, conductor)
        else:
            algebra = GradedMatrixAlgebra.mnf(grading, conductor)
    return GradedMatrixAlgebra(algebra.kind, algebra.grading, algebra.budget, algebra.conductor,
                               algebra.split, text.strip())


# matrices and substitutions

_MATRIX_TERM = re.compile(
    r"\s*(?P<sign>[+-])?\s*"
    r"(?:(?P<coeff>\([^()]*\)|\d+(?:\s*/\s*\d+)?)\s*\*?\s*)?"
    r"(?:(?P<grassmann>e\d+(?:\s*\*?\s*e\d+)*)\s*\*?\s*)?"
    r"(?P<unit>E\d\d|E\{\d+,\d+\}|I)\s*"
)


def _grassmann_monomial(text: str):
    """Mask and sign of a product of generators written in any order; None when a
    generator repeats"""
    mask, sign = 0, 1
    for number in re.findall(r"e(\d+)", text):
        if int(number) < 1:
            raise SpecError(f"Grassmann generators start at e1, got e{number}")
        bit = 1 << (int(number) - 1)
        if mask & bit:
            return None
        sign *= canonical_reordering_sign(mask, bit)
        mask |= bit
    return mask, sign


def parse_matrix_literal(text: str, n: int, budget: int = 0) -> RingMatrix:
    """Sums like "E12", "e1*E12 + e2*E21", "-2*E22", "(z3^1)*E11" or "I" """
    source = text.strip()
    if source == "0":
        return RingMatrix.zero(n, budget)
    result = RingMatrix.zero(n, budget)
    position = 0
    while position < len(source):
        match = _MATRIX_TERM.match(source, position)
        if not match or match.end() == position:
            raise SpecError(f"cannot read matrix literal '{text}' at position {position}")
        if position > 0 and match.group("sign") is None:
            raise SpecError(f"missing '+' or '-' in matrix literal '{text}' at position {position}")
        coeff = parse_scalar(match.group("coeff").strip("()")) if match.group("coeff") else ONE
        if match.group("sign") == "-":
            coeff = -coeff
        grassmann = _grassmann_monomial(match.group("grassmann") or "")
        unit = match.group("unit")
        position = match.end()
        if grassmann is None:
            continue
        mask, sign = grassmann
        if unit == "I":
            term = RingMatrix(n, {(i, i, mask): coeff * sign for i in range(1, n + 1)}, budget)
        else:
            digits = re.findall(r"\d+", unit)
            i, j = (int(digits[0][0]), int(digits[0][1])) if len(digits) == 1 else (int(digits[0]), int(digits[1]))
            if not (1 <= i <= n and 1 <= j <= n):
                raise SpecError(f"{unit} is outside a {n} x {n} matrix")
            term = RingMatrix(n, {(i, j, mask): coeff * sign}, budget)
        result = result + term
    return result


def _split_top_level(text: str, separators: str = ",;") -> List[str]:
    parts, depth, current = [], 0, ""
    for char in text:
        if char in "([{":
            depth += 1
        elif char in ")]}":
            depth -= 1
        if char in separators and depth == 0:
            parts.append(current)
            current = ""
        else:
            current += char
    parts.append(current)
    return [p.strip() for p in parts if p.strip()]


def parse_assignment(text: str, n: int, budget: int = 0) -> Dict[int, RingMatrix]:
    """"x1=E12,x2=E21" -> {1: E12, 2: E21}"""
    assignment: Dict[int, RingMatrix] = {}
    for part in _split_top_level(text):
        match = re.fullmatch(r"x(\d+)(?:\[[^\]]*\])?\s*=\s*(.+)", part, re.S)
        if not match:
            raise SpecError(f"expected 'xN=matrix', got '{part}'")
        index = int(match.group(1))
        if index in assignment:
            raise NotAdmissible(f"x{index}", "one value", "assigned twice")
        assignment[index] = parse_matrix_literal(match.group(2), n, budget)
    return assignment


def parse_diagonal(text: str) -> List[CycloScalar]:
    """"1, -1" or "1, z3^1, z3^2" """
    return [parse_scalar(part) for part in _split_top_level(text)]


def parse_h_map(text: str, group: FiniteGroup) -> Dict[int, int]:
    """"x1=1, x2=0" -> variable index to group element"""
    h: Dict[int, int] = {}
    for part in _split_top_level(text):
        match = re.fullmatch(r"x(\d+)\s*=\s*(.+)", part)
        if not match:
            raise SpecError(f"expected 'xN=element', got '{part}'")
        h[int(match.group(1))] = group.index(match.group(2).strip())
    return h
