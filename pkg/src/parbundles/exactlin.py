"""Dense exact linear algebra over the rationals.

Scalars are :class:`fractions.Fraction`: always in lowest terms with a
positive denominator, arithmetic exact, integers arbitrary precision.
Matrices are small and dense (flag bases, constraint systems), so plain
Gaussian elimination with exact pivoting is all we need.  There is no
floating-point mode anywhere in this package.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import UsageError

Rat = Fraction


def rat(value) -> Fraction:
    """Coerce an int, string ("p/q") or Fraction to an exact rational."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise UsageError(f"cannot interpret {value!r} as an exact rational")


@dataclass(frozen=True)
class RatMatrix:
    """Immutable dense matrix of exact rationals, row-major."""

    rows: int
    cols: int
    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise UsageError("matrix dimensions must be nonnegative")
        if len(self.entries) != self.rows:
            raise UsageError("entry rows do not match declared row count")
        for row in self.entries:
            if len(row) != self.cols:
                raise UsageError("ragged matrix rows")

    @staticmethod
    def from_rows(rows: Sequence[Sequence], cols: int | None = None) -> "RatMatrix":
        data = tuple(tuple(rat(x) for x in row) for row in rows)
        if cols is None:
            if not data:
                raise UsageError("column count required for an empty matrix")
            cols = len(data[0])
        return RatMatrix(len(data), cols, data)

    @staticmethod
    def zero(rows: int, cols: int) -> "RatMatrix":
        z = Fraction(0)
        return RatMatrix(rows, cols, tuple((z,) * cols for _ in range(rows)))

    @staticmethod
    def identity(n: int) -> "RatMatrix":
        return RatMatrix(
            n, n,
            tuple(tuple(Fraction(1 if i == j else 0) for j in range(n)) for i in range(n)),
        )

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i]

    def transpose(self) -> "RatMatrix":
        return RatMatrix(
            self.cols, self.rows,
            tuple(tuple(self.entries[i][j] for i in range(self.rows)) for j in range(self.cols)),
        )

    def mul(self, other: "RatMatrix") -> "RatMatrix":
        if self.cols != other.rows:
            raise UsageError("inner dimensions do not match")
        out = []
        for i in range(self.rows):
            left = self.entries[i]
            out.append(tuple(
                sum((left[k] * other.entries[k][j] for k in range(self.cols)), Fraction(0))
                for j in range(other.cols)
            ))
        return RatMatrix(self.rows, other.cols, tuple(out))

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        return self.mul(other)

    def stack(self, other: "RatMatrix") -> "RatMatrix":
        if self.cols != other.cols:
            raise UsageError("column counts differ")
        return RatMatrix(self.rows + other.rows, self.cols, self.entries + other.entries)

    def apply(self, vector: Sequence[Fraction]) -> tuple[Fraction, ...]:
        if len(vector) != self.cols:
            raise UsageError("vector length does not match column count")
        return tuple(
            sum((self.entries[i][j] * vector[j] for j in range(self.cols)), Fraction(0))
            for i in range(self.rows)
        )


def _echelonize(rows: list[list[Fraction]], cols: int, reduce_above: bool = True) -> list[int]:
    """In-place row echelon form; returns the pivot columns.

    Pivot rows are chosen by smallest numerator/denominator bit size to keep
    intermediate entries modest; over the rationals any nonzero pivot is
    exact, so this is purely a growth heuristic.  With ``reduce_above`` the
    result is the reduced form; without it only rows below each pivot are
    cleared (enough for rank).  Entries left of the current pivot column are
    already zero in every touched row, so updates start at the pivot column.
    """
    pivots: list[int] = []
    pr = 0
    nrows = len(rows)
    for pc in range(cols):
        best = None
        for r in range(pr, nrows):
            x = rows[r][pc]
            if x != 0:
                size = x.numerator.bit_length() + x.denominator.bit_length()
                if best is None or size < best[0]:
                    best = (size, r)
        if best is None:
            continue
        r = best[1]
        rows[pr], rows[r] = rows[r], rows[pr]
        piv_row = rows[pr]
        piv = piv_row[pc]
        if piv != 1:
            for c in range(pc, cols):
                piv_row[c] /= piv
        targets = range(nrows) if reduce_above else range(pr + 1, nrows)
        for r2 in targets:
            if r2 == pr:
                continue
            row2 = rows[r2]
            f = row2[pc]
            if f != 0:
                for c in range(pc, cols):
                    row2[c] -= f * piv_row[c]
        pivots.append(pc)
        pr += 1
        if pr == nrows:
            break
    return pivots


def rref(m: RatMatrix) -> tuple[RatMatrix, tuple[int, ...]]:
    """Reduced row echelon form and pivot columns (zero rows dropped)."""
    rows = [list(r) for r in m.entries]
    pivots = _echelonize(rows, m.cols)
    kept = tuple(tuple(rows[i]) for i in range(len(pivots)))
    return RatMatrix(len(pivots), m.cols, kept), tuple(pivots)


def rank(m: RatMatrix) -> int:
    rows = [list(r) for r in m.entries]
    return len(_echelonize(rows, m.cols, reduce_above=False))


def rank_and_kernel(m: RatMatrix) -> tuple[int, int]:
    """Rank and kernel dimension; always ``rank + kernel_dim == cols``."""
    r = rank(m)
    return r, m.cols - r


def solution_space_dim(constraints: RatMatrix, unknowns: int) -> int:
    """Dimension of the solution space of a homogeneous system."""
    if constraints.cols != unknowns:
        raise UsageError(
            f"constraint matrix has {constraints.cols} columns for {unknowns} unknowns"
        )
    return unknowns - rank(constraints)


def kernel_basis(m: RatMatrix) -> RatMatrix:
    """Rows form a basis of the right kernel {v : m v = 0}.

    For a matrix with no rows the kernel is everything and the identity is
    returned.  The basis is the canonical one read off the reduced echelon
    form: one vector per free column, with a 1 in the free slot.
    """
    reduced, pivots = rref(m)
    pivot_set = set(pivots)
    free = [c for c in range(m.cols) if c not in pivot_set]
    out = []
    for fc in free:
        v = [Fraction(0)] * m.cols
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -reduced.entries[i][fc]
        out.append(tuple(v))
    return RatMatrix(len(out), m.cols, tuple(out))


def in_row_span(m: RatMatrix, vector: Sequence[Fraction]) -> bool:
    """Whether ``vector`` lies in the span of the rows of ``m``."""
    if len(vector) != m.cols:
        raise UsageError("vector length does not match column count")
    extra = RatMatrix(1, m.cols, (tuple(rat(x) for x in vector),))
    return rank(m.stack(extra)) == rank(m)


def span_equal(a: RatMatrix, b: RatMatrix) -> bool:
    """Whether two row spans coincide as subspaces."""
    if a.cols != b.cols:
        raise UsageError("ambient dimensions differ")
    ra, rb = rank(a), rank(b)
    return ra == rb == rank(a.stack(b))


def rat_str(x: Fraction) -> str:
    """Serialize a rational as "p/q", or "p" when the denominator is 1."""
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def matrix(rows: Iterable[Iterable], cols: int | None = None) -> RatMatrix:
    """Shorthand constructor accepting ints, strings and Fractions."""
    return RatMatrix.from_rows([list(r) for r in rows], cols)
