"""
Exact linear algebra over any field whose elements support + - * / and == 0.

Used with Fraction (cyclotomic descent, inverses) and CycloScalar (value spans,
centralizers). Vectors are sparse dicts keyed by hashable, sortable coordinates.
"""
from typing import Any, Dict, Hashable, List, Optional, Sequence, Tuple

Vector = Dict[Hashable, Any]


def _is_zero(x) -> bool:
    return x == 0


def solve_linear(columns: Sequence[Sequence[Any]], target: Sequence[Any]) -> Optional[List[Any]]:
    """Find c with sum_j c_j * columns[j] == target.

    Returns one solution (free unknowns set to zero) or None if the system is
    inconsistent. All columns and the target have the same length.
    """
    rows = len(target)
    cols = len(columns)
    # augmented matrix, row-major
    matrix = [[columns[j][i] for j in range(cols)] + [target[i]] for i in range(rows)]
    pivots: List[Tuple[int, int]] = []
    r = 0
    for c in range(cols):
        pivot_row = next((i for i in range(r, rows) if not _is_zero(matrix[i][c])), None)
        if pivot_row is None:
            continue
        matrix[r], matrix[pivot_row] = matrix[pivot_row], matrix[r]
        lead = matrix[r][c]
        matrix[r] = [x / lead for x in matrix[r]]
        for i in range(rows):
            if i != r and not _is_zero(matrix[i][c]):
                factor = matrix[i][c]
                matrix[i] = [a - factor * b for a, b in zip(matrix[i], matrix[r])]
        pivots.append((r, c))
        r += 1
        if r == rows:
            break
    for i in range(r, rows):
        if not _is_zero(matrix[i][cols]):
            return None
    zero = target[0] - target[0] if rows else 0
    solution = [zero] * cols
    for row, c in pivots:
        solution[c] = matrix[row][cols]
    return solution


def nullspace(rows: Sequence[Vector], columns: Sequence[Hashable]) -> List[Vector]:
    """Basis of {c : sum_k c_k * row[k] == 0 for every row}.

    Each row is a sparse mapping column -> coefficient. The returned vectors are
    sparse mappings column -> value, one per free column, in column order.
    """
    order = {col: k for k, col in enumerate(columns)}
    reduced: Dict[Hashable, Vector] = {}  # pivot column -> row normalized at pivot
    for row in rows:
        vec = {col: val for col, val in row.items() if not _is_zero(val)}
        for pivot, prow in reduced.items():
            if pivot in vec:
                factor = vec[pivot]
                _axpy(vec, -factor, prow)
        if not vec:
            continue
        pivot = min(vec, key=order.__getitem__)
        lead = vec[pivot]
        vec = {col: val / lead for col, val in vec.items()}
        # keep the stored rows fully reduced
        for other, orow in reduced.items():
            if pivot in orow:
                _axpy(orow, -orow[pivot], vec)
        reduced[pivot] = vec
    basis = []
    for free in columns:
        if free in reduced:
            continue
        solution: Vector = {free: 1}
        for pivot, prow in reduced.items():
            if free in prow:
                solution[pivot] = -prow[free]
        basis.append(solution)
    return basis


def _axpy(target: Vector, factor, source: Vector):
    """target += factor * source, dropping zeros in place"""
    for key, val in source.items():
        new = target.get(key, 0) + factor * val
        if _is_zero(new):
            target.pop(key, None)
        else:
            target[key] = new


class LinearSpan:
    """Incrementally built span of sparse vectors, remembering where each
    independent member came from"""

    def __init__(self):
        self._rows: List[Tuple[Hashable, Vector]] = []  # (pivot, row scaled to 1 at pivot)
        self.members: List[Tuple[Vector, Any]] = []     # raw independent vectors with their tags

    @property
    def dimension(self) -> int:
        return len(self._rows)

    def is_zero(self) -> bool:
        return not self._rows

    def reduce(self, vector: Vector) -> Vector:
        vec = {k: v for k, v in vector.items() if not _is_zero(v)}
        for pivot, row in self._rows:
            if pivot in vec:
                _axpy(vec, -vec[pivot], row)
        return vec

    def contains(self, vector: Vector) -> bool:
        return not self.reduce(vector)

    def add(self, vector: Vector, tag: Any = None) -> bool:
        """Add a vector; returns True when it enlarged the span"""
        vec = self.reduce(vector)
        if not vec:
            return False
        pivot = min(vec)
        lead = vec[pivot]
        self._rows.append((pivot, {k: v / lead for k, v in vec.items()}))
        self.members.append((dict(vector), tag))
        return True

    def extend(self, other: "LinearSpan"):
        for vector, tag in other.members:
            self.add(vector, tag)
