"""
Exception hierarchy shared by the core modules
"""
from typing import Optional


class GradedPIError(Exception):
    """Base class for every error raised by the toolkit"""


class ZeroInverse(GradedPIError, ZeroDivisionError):
    pass


class DegreeMismatch(GradedPIError):
    pass


class NonMultilinear(GradedPIError):
    pass


class BudgetExceeded(GradedPIError):
    """The Grassmann truncation has too few generators for the requested check"""

    def __init__(self, needed: int, budget: int, what: str = "check"):
        self.needed = needed
        self.budget = budget
        super().__init__(f"{what} needs {needed} Grassmann generators, budget is {budget}")


class SizeLimit(GradedPIError):
    pass


class PreconditionViolated(GradedPIError):
    pass


class NotAdmissible(GradedPIError):
    """A matrix substituted for a variable is not homogeneous of the variable's degree"""

    def __init__(self, variable: str, expected: str, detail: str = ""):
        self.variable = variable
        self.expected = expected
        message = f"substitution for {variable} is not homogeneous of degree {expected}"
        if detail:
            message += f" ({detail})"
        super().__init__(message)


class NotHomomorphism(GradedPIError):
    pass


class TupleNotSorted(GradedPIError):
    pass


class ConductorMismatch(GradedPIError):
    pass


class SpecError(GradedPIError):
    """Malformed algebra, group or realization spec"""


class UnknownGroupElement(GradedPIError):
    def __init__(self, name: str, known: Optional[list] = None):
        self.name = name
        message = f"unknown group element '{name}'"
        if known:
            message += f"; known names: {', '.join(known)}"
        super().__init__(message)


class PolynomialSyntaxError(GradedPIError):
    def __init__(self, message: str, line: int, column: int):
        self.line = line
        self.column = column
        super().__init__(f"{message} at line {line}, column {column}")


class InvariantViolation(GradedPIError):
    """A certificate or structural invariant failed on recomputation"""
