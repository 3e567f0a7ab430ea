"""Dense linear algebra over the coefficient fields.

Exact systems go through sympy's ``DomainMatrix`` over ``QQ_I``; float systems
and every norm goes through numpy; spectra stay exact.
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from sympy import QQ_I, Dummy, Expr, Poly, roots
from sympy.polys.matrices import DomainMatrix

from weilforge.algebra.scalars import Scalar, ScalarField, to_complex

logger = logging.getLogger(__name__)

Matrix = Sequence[Sequence[Scalar]]


@dataclass(frozen=True)
class LinearSolution:
    values: list[Scalar]
    free_parameters: int
    consistent: bool


def to_numpy(rows: Matrix, n_cols: int | None = None) -> np.ndarray:
    if not rows:
        return np.zeros((0, n_cols or 0), dtype=complex)
    return np.array([[to_complex(v) for v in row] for row in rows], dtype=complex)


def _domain_matrix(rows: Matrix, n_cols: int) -> DomainMatrix:
    converted = [[QQ_I.convert(v) for v in row] for row in rows]
    return DomainMatrix(converted, (len(converted), n_cols), QQ_I)


def solve_system(
    rows: Matrix, rhs: Sequence[Scalar], field: ScalarField, n_cols: int
) -> LinearSolution:
    """Solve ``A x = b``; free parameters are set to zero."""
    if n_cols == 0:
        consistent = all(field.is_zero(field.coerce(v)) for v in rhs)
        return LinearSolution([], 0, consistent)
    if not rows:
        return LinearSolution([field.zero] * n_cols, n_cols, True)
    if field.exact:
        augmented = [list(row) + [value] for row, value in zip(rows, rhs, strict=True)]
        reduced, pivots = _domain_matrix(augmented, n_cols + 1).rref()
        table = reduced.to_list()
        if n_cols in pivots:
            return LinearSolution([field.zero] * n_cols, n_cols - len(pivots) + 1, False)
        values = [field.zero] * n_cols
        for row_index, column in enumerate(pivots):
            values[column] = QQ_I.convert(table[row_index][n_cols])
        return LinearSolution(values, n_cols - len(pivots), True)

    matrix = to_numpy(rows, n_cols)
    vector = np.array([to_complex(v) for v in rhs], dtype=complex)
    solution, *_ = np.linalg.lstsq(matrix, vector, rcond=None)
    rank = int(np.linalg.matrix_rank(matrix, tol=field.tolerance))
    residual = float(np.linalg.norm(matrix @ solution - vector)) if len(vector) else 0.0
    return LinearSolution(
        [complex(v) for v in solution], n_cols - rank, residual <= field.tolerance
    )


def rank(rows: Matrix, field: ScalarField, n_cols: int) -> int:
    if not rows or n_cols == 0:
        return 0
    if field.exact:
        return _domain_matrix(rows, n_cols).rank()
    return int(np.linalg.matrix_rank(to_numpy(rows, n_cols), tol=field.tolerance))


def nullspace(rows: Matrix, field: ScalarField, n_cols: int) -> list[list[Scalar]]:
    if not rows:
        return [
            [field.one if i == j else field.zero for i in range(n_cols)]
            for j in range(n_cols)
        ]
    if field.exact:
        reduced, pivots = _domain_matrix(rows, n_cols).rref()
        table = reduced.to_list()
    else:
        table, pivots = _float_rref(to_numpy(rows, n_cols), field.tolerance)
    basis = []
    for free in (c for c in range(n_cols) if c not in pivots):
        vector = [field.zero] * n_cols
        vector[free] = field.one
        for row_index, column in enumerate(pivots):
            vector[column] = -field.coerce(table[row_index][free])
        basis.append(vector)
    return basis


def _float_rref(matrix: np.ndarray, tolerance: float):
    work = matrix.astype(complex).copy()
    pivots: list[int] = []
    row = 0
    for column in range(work.shape[1]):
        if row >= work.shape[0]:
            break
        best = row + int(np.argmax(np.abs(work[row:, column])))
        if abs(work[best, column]) <= tolerance:
            continue
        work[[row, best]] = work[[best, row]]
        work[row] = work[row] / work[row, column]
        for other in range(work.shape[0]):
            if other != row:
                work[other] -= work[other, column] * work[row]
        pivots.append(column)
        row += 1
    return work.tolist(), tuple(pivots)


def operator_norm(rows: Matrix, n_cols: int) -> float:
    if not rows or n_cols == 0:
        return 0.0
    return float(np.linalg.svd(to_numpy(rows, n_cols), compute_uv=False)[0])


def exact_eigenvalues(rows: Matrix) -> list[Expr]:
    """Eigenvalues with multiplicity, as sympy numbers.

    Triangular matrices are read off the diagonal; anything else goes through
    the characteristic polynomial.
    """
    n = len(rows)
    if not n:
        return []
    matrix = _domain_matrix(rows, n)
    table = matrix.to_list()
    zero = QQ_I.zero
    if all(table[i][j] == zero for i in range(n) for j in range(i + 1, n)) or all(
        table[i][j] == zero for i in range(n) for j in range(i)
    ):
        return [QQ_I.to_sympy(table[i][i]) for i in range(n)]
    x = Dummy("x")
    characteristic = Poly([QQ_I.to_sympy(c) for c in matrix.charpoly()], x).as_expr()
    found = roots(characteristic, x)
    if sum(found.values()) != n:
        raise ValueError("spectrum has no closed form over the Gaussian rationals")
    return [value for value, multiplicity in found.items() for _ in range(multiplicity)]


def condition_number(rows: Matrix) -> float:
    if not rows:
        return 1.0
    return float(np.linalg.cond(to_numpy(rows, len(rows))))
