import random
from fractions import Fraction

import pytest

from parbundles.errors import UsageError
from parbundles.exactlin import (
    RatMatrix,
    in_row_span,
    kernel_basis,
    matrix,
    rank,
    rank_and_kernel,
    rat_str,
    rref,
    solution_space_dim,
    span_equal,
)


def random_matrix(rng, rows, cols, span=5):
    return matrix(
        [[Fraction(rng.randint(-span, span), rng.randint(1, 3)) for _ in range(cols)]
         for _ in range(rows)],
        cols=cols,
    )


def test_rank_and_kernel_identity():
    assert rank_and_kernel(RatMatrix.identity(3)) == (3, 0)


def test_rank_and_kernel_zero():
    assert rank_and_kernel(RatMatrix.zero(2, 4)) == (0, 4)


def test_rank_and_kernel_dependent_rows():
    # By hand: row 2 = 2 * row 1, so one pivot, two free columns.
    m = matrix([[1, 2, 3], [2, 4, 6]])
    assert rank_and_kernel(m) == (1, 2)


def test_solution_space_dim_unconstrained():
    assert solution_space_dim(RatMatrix.zero(0, 5), 5) == 5


def test_solution_space_dim_full_rank():
    assert solution_space_dim(RatMatrix.identity(3), 3) == 0


def test_solution_space_dim_repeated_row():
    # One independent row repeated three times: rank 1 over 4 unknowns.
    m = matrix([[1, 2, 0, -1]] * 3)
    assert solution_space_dim(m, 4) == 3


def test_solution_space_dim_column_mismatch():
    with pytest.raises(UsageError):
        solution_space_dim(RatMatrix.identity(3), 4)


def test_rank_equals_transpose_rank():
    rng = random.Random(101)
    for _ in range(40):
        m = random_matrix(rng, rng.randint(0, 5), rng.randint(1, 5))
        assert rank(m) == rank(m.transpose())


def test_appending_spanned_row_keeps_rank():
    rng = random.Random(202)
    for _ in range(30):
        m = random_matrix(rng, rng.randint(1, 4), rng.randint(1, 4))
        coeffs = [Fraction(rng.randint(-2, 2)) for _ in range(m.rows)]
        new_row = tuple(
            sum((coeffs[i] * m.entries[i][j] for i in range(m.rows)), Fraction(0))
            for j in range(m.cols)
        )
        extended = m.stack(RatMatrix(1, m.cols, (new_row,)))
        assert rank_and_kernel(extended) == (rank(m), m.cols - rank(m))


def test_solution_space_monotone_under_new_rows():
    rng = random.Random(303)
    for _ in range(20):
        cols = rng.randint(1, 5)
        m = RatMatrix.zero(0, cols)
        prev = solution_space_dim(m, cols)
        for _ in range(4):
            m = m.stack(random_matrix(rng, 1, cols))
            cur = solution_space_dim(m, cols)
            assert cur <= prev
            prev = cur


def test_kernel_basis_spans_kernel():
    rng = random.Random(404)
    for _ in range(30):
        m = random_matrix(rng, rng.randint(1, 4), rng.randint(1, 5))
        basis = kernel_basis(m)
        assert basis.rows == m.cols - rank(m)
        for v in basis.entries:
            assert all(x == 0 for x in m.apply(v))
        assert rank(basis) == basis.rows


def test_kernel_basis_of_empty_system_is_identity():
    basis = kernel_basis(RatMatrix.zero(0, 3))
    assert span_equal(basis, RatMatrix.identity(3))


def test_rref_pivots_are_unit_columns():
    m = matrix([[2, 4, 1], [1, 2, 0], [0, 0, 3]])
    reduced, pivots = rref(m)
    assert pivots == (0, 2)
    for i, pc in enumerate(pivots):
        col = [reduced.entries[r][pc] for r in range(reduced.rows)]
        assert col == [Fraction(1) if r == i else Fraction(0) for r in range(reduced.rows)]


def test_in_row_span():
    m = matrix([[1, 0, 1], [0, 1, 1]])
    assert in_row_span(m, (2, 3, 5))
    assert not in_row_span(m, (0, 0, 1))


def test_exactness_no_rounding():
    # A classically ill-conditioned system stays exact.
    n = 6
    hilbert = matrix([[Fraction(1, i + j + 1) for j in range(n)] for i in range(n)])
    assert rank(hilbert) == n


def test_rat_str():
    assert rat_str(Fraction(3)) == "3"
    assert rat_str(Fraction(-1, 2)) == "-1/2"
    assert rat_str(Fraction(2, 4)) == "1/2"
