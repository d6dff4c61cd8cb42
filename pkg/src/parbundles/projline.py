"""Vector bundles on the projective line via splitting types.

Every bundle is a direct sum of line bundles O(a_1) + ... + O(a_r); we only
ever store the multiset of degrees.  The global model for maps is:

* a homomorphism O(a) -> O(b) is a polynomial q(z) of degree <= b - a in the
  affine coordinate z (the zero map when b < a), and composition is
  polynomial multiplication;
* the fiber of O(a) at a finite point p is trivialized so that a section q
  evaluates to q(p); at the point at infinity a map of relative degree
  e = b - a evaluates to its coefficient of z^e.

The infinity convention is exactly the one that makes evaluation
multiplicative under composition (leading coefficients multiply), which the
test suite checks as an invariant.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import UsageError
from .exactlin import RatMatrix, rat

# ---------------------------------------------------------------------------
# Polynomials with exact rational coefficients.
#
# A polynomial is a trimmed tuple of Fractions, constant term first; the zero
# polynomial is the empty tuple.

Poly = tuple[Fraction, ...]

ZERO_POLY: Poly = ()


def poly(coeffs: Iterable) -> Poly:
    """Build a polynomial from coefficients (constant term first)."""
    c = [rat(x) for x in coeffs]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def poly_degree(p: Poly) -> int:
    """Degree, with the zero polynomial assigned -1."""
    return len(p) - 1


def poly_add(p: Poly, q: Poly) -> Poly:
    n = max(len(p), len(q))
    return poly([(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)])


def poly_mul(p: Poly, q: Poly) -> Poly:
    if not p or not q:
        return ZERO_POLY
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return poly(out)


def poly_scale(p: Poly, s: Fraction) -> Poly:
    return poly([s * a for a in p])


def poly_eval(p: Poly, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for a in reversed(p):
        acc = acc * x + a
    return acc


def poly_coeff(p: Poly, k: int) -> Fraction:
    if k < 0 or k >= len(p):
        return Fraction(0)
    return p[k]


# ---------------------------------------------------------------------------
# Points of the projective line.


@dataclass(frozen=True)
class PointOnLine:
    """A closed point: an exact rational coordinate, or None for infinity."""

    coordinate: Fraction | None

    @staticmethod
    def finite(x) -> "PointOnLine":
        return PointOnLine(rat(x))

    @property
    def is_infinity(self) -> bool:
        return self.coordinate is None

    def sort_key(self):
        if self.coordinate is None:
            return (1, Fraction(0))
        return (0, self.coordinate)

    def __str__(self) -> str:
        if self.coordinate is None:
            return "inf"
        x = self.coordinate
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


INFINITY = PointOnLine(None)
ORIGIN = PointOnLine(Fraction(0))


# ---------------------------------------------------------------------------
# Splitting types.


@dataclass(frozen=True)
class SplitBundle:
    """Multiset of line-bundle degrees, stored sorted non-increasing."""

    degrees: tuple[int, ...]

    def __post_init__(self):
        if not self.degrees:
            raise UsageError("a bundle has rank at least one")
        if any(not isinstance(d, int) for d in self.degrees):
            raise UsageError("splitting type entries must be integers")
        object.__setattr__(self, "degrees", tuple(sorted(self.degrees, reverse=True)))

    @property
    def rank(self) -> int:
        return len(self.degrees)

    @property
    def degree(self) -> int:
        return sum(self.degrees)


def split(degrees: Iterable[int]) -> SplitBundle:
    return SplitBundle(tuple(degrees))


def tensor_split(a: SplitBundle, b: SplitBundle) -> SplitBundle:
    return split(x + y for x in a.degrees for y in b.degrees)


def dual_split(a: SplitBundle) -> SplitBundle:
    return split(-x for x in a.degrees)


def twist_split(a: SplitBundle, t: int) -> SplitBundle:
    return split(x + t for x in a.degrees)


def direct_sum_split(a: SplitBundle, b: SplitBundle) -> SplitBundle:
    return split(a.degrees + b.degrees)


def hom_dim(a: SplitBundle, b: SplitBundle) -> int:
    """dim Hom(a, b) = sum of max(0, b_j - a_i + 1) over all summand pairs."""
    return sum(max(0, y - x + 1) for x in a.degrees for y in b.degrees)


def cohomology(a: SplitBundle) -> tuple[int, int]:
    """(h0, h1) of the bundle: per line O(d), h0 = max(0, d+1), h1 = max(0, -d-1)."""
    h0 = sum(max(0, d + 1) for d in a.degrees)
    h1 = sum(max(0, -d - 1) for d in a.degrees)
    return h0, h1


def pushforward_cyclic(k: int, n: int) -> SplitBundle:
    """Splitting type of the direct image of O(k) along z -> z^n.

    The direct image splits by monomial residue class; the class of z^i
    contributes O(floor((k - i)/n)).
    """
    if n < 2:
        raise UsageError("cover order must be at least 2")
    return split((k - i) // n for i in range(n))


def is_semistable_split(a: SplitBundle) -> bool:
    """On a rational curve, semistable means a constant splitting type."""
    return all(d == a.degrees[0] for d in a.degrees)


# ---------------------------------------------------------------------------
# Polynomial homomorphisms with fiber evaluation.


@dataclass(frozen=True)
class PolyHom:
    """A bundle map between split bundles as a matrix of polynomials.

    ``entries[j][i]`` is the component O(a_i) -> O(b_j), a polynomial of
    degree at most b_j - a_i (the zero polynomial when b_j < a_i).
    """

    source: SplitBundle
    target: SplitBundle
    entries: tuple[tuple[Poly, ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.target.rank:
            raise UsageError("entry rows must match target rank")
        for j, row in enumerate(self.entries):
            if len(row) != self.source.rank:
                raise UsageError("entry columns must match source rank")
            for i, q in enumerate(row):
                bound = self.target.degrees[j] - self.source.degrees[i]
                if q and poly_degree(q) > bound:
                    raise UsageError(
                        f"entry ({j},{i}) has degree {poly_degree(q)} > bound {bound}"
                    )

    @staticmethod
    def build(source: SplitBundle, target: SplitBundle, entries: Sequence[Sequence]) -> "PolyHom":
        """Coerce a nested sequence of scalars/coefficient lists to a PolyHom."""
        rows = []
        for row in entries:
            prow = []
            for q in row:
                if isinstance(q, (list, tuple)):
                    prow.append(poly(q))
                else:
                    prow.append(poly([q]))
            rows.append(tuple(prow))
        return PolyHom(source, target, tuple(rows))

    @staticmethod
    def identity(bundle: SplitBundle) -> "PolyHom":
        one = poly([1])
        return PolyHom(
            bundle, bundle,
            tuple(
                tuple(one if i == j else ZERO_POLY for i in range(bundle.rank))
                for j in range(bundle.rank)
            ),
        )

    @staticmethod
    def zero(source: SplitBundle, target: SplitBundle) -> "PolyHom":
        return PolyHom(
            source, target,
            tuple(tuple(ZERO_POLY for _ in range(source.rank)) for _ in range(target.rank)),
        )

    def compose(self, inner: "PolyHom") -> "PolyHom":
        """self o inner, defined when inner.target == self.source."""
        if inner.target != self.source:
            raise UsageError("composition mismatch")
        rows = []
        for k in range(self.target.rank):
            row = []
            for i in range(inner.source.rank):
                acc: Poly = ZERO_POLY
                for j in range(self.source.rank):
                    acc = poly_add(acc, poly_mul(self.entries[k][j], inner.entries[j][i]))
                row.append(acc)
            rows.append(tuple(row))
        return PolyHom(inner.source, self.target, tuple(rows))

    def eval_fiber(self, point: PointOnLine) -> RatMatrix:
        """Fiber matrix at a point; at infinity the relative leading coefficient."""
        rows = []
        for j in range(self.target.rank):
            row = []
            for i in range(self.source.rank):
                q = self.entries[j][i]
                if point.is_infinity:
                    row.append(poly_coeff(q, self.target.degrees[j] - self.source.degrees[i]))
                else:
                    row.append(poly_eval(q, point.coordinate))
            rows.append(tuple(row))
        return RatMatrix(self.target.rank, self.source.rank, tuple(rows))


def eval_fiber(phi: PolyHom, point: PointOnLine) -> RatMatrix:
    return phi.eval_fiber(point)
