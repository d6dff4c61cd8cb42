"""Equivariant bundles on the cyclic cover z -> z^N and the correspondence
with parabolic bundles on the base.

The cover is hard-coded: the squaring-type map of the projective line to
itself of degree N, totally ramified over 0 and infinity, with cyclic deck
group of order N.  Every linearized bundle splits equivariantly into lines,
so a bundle is a multiset of (degree e, character c) pairs; all group-action
bookkeeping happens on residues mod N (the action is diagonal on monomials),
keeping every computation in exact rational arithmetic:

* the monomial section z^t of the line (e, c) carries character (c + t) mod N;
* the fiber character at 0 is c, at infinity (c + e) mod N.

The correspondence sends the line (e, c) to the parabolic line of degree
(e - a0 - ainf)/N with weights a0/N at 0 and ainf/N at infinity, where
a0 = (-c) mod N and ainf = (c + e) mod N.  The sign convention is a pinned
free choice; the section-counting identities in the test suite validate it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, UsageError
from .exactlin import RatMatrix
from .parabolic import (
    ParLineData,
    ParabolicBundle,
    line_sum_build,
    sort_parts,
)
from .projline import INFINITY, ORIGIN, PointOnLine, SplitBundle, split


@dataclass(frozen=True)
class EquivLine:
    """A linearized line bundle on the cover: degree and character mod N."""

    e: int
    c: int


@dataclass(frozen=True)
class EquivBundle:
    """Multiset of equivariant lines for a cover of order n."""

    n: int
    lines: tuple[EquivLine, ...]

    def __post_init__(self):
        if self.n < 2:
            raise UsageError("cover order must be at least 2")
        if not self.lines:
            raise UsageError("an equivariant bundle has rank at least one")
        normalized = tuple(
            sorted((EquivLine(l.e, l.c % self.n) for l in self.lines),
                   key=lambda l: (-l.e, l.c))
        )
        object.__setattr__(self, "lines", normalized)

    @property
    def rank(self) -> int:
        return len(self.lines)

    @property
    def degree(self) -> int:
        return sum(l.e for l in self.lines)

    def splitting(self) -> SplitBundle:
        return split(l.e for l in self.lines)


def equiv_bundle(n: int, lines) -> EquivBundle:
    return EquivBundle(n, tuple(EquivLine(e, c) for e, c in lines))


# ---------------------------------------------------------------------------
# The correspondence.


def line_to_parabolic(line: EquivLine, n: int) -> ParLineData:
    a0 = (-line.c) % n
    ainf = (line.c + line.e) % n
    k, rem = divmod(line.e - a0 - ainf, n)
    assert rem == 0, "correspondence degree is always integral"
    return ParLineData.of(k, {ORIGIN: Fraction(a0, n), INFINITY: Fraction(ainf, n)})


def to_parabolic_lines(bundle: EquivBundle) -> tuple[ParLineData, ...]:
    return sort_parts(line_to_parabolic(l, bundle.n) for l in bundle.lines)


def to_parabolic(bundle: EquivBundle) -> ParabolicBundle:
    return line_sum_build([line_to_parabolic(l, bundle.n) for l in bundle.lines])


def line_from_parabolic(part: ParLineData, n: int) -> EquivLine:
    for point, w in part.weights:
        if point not in (ORIGIN, INFINITY):
            raise DomainError(f"parabolic point {point} is not over the branch locus")
        if (w * n).denominator != 1:
            raise DomainError(f"weight {w} is not a multiple of 1/{n}")
    w0 = part.weight_at(ORIGIN)
    winf = part.weight_at(INFINITY)
    c = int(-(w0 * n)) % n
    e = n * part.degree + int(w0 * n) + int(winf * n)
    return EquivLine(e, c)


def from_parabolic(parts, n: int) -> EquivBundle:
    """Inverse correspondence on sums of parabolic lines with weights in
    the 1/n lattice at 0 and infinity."""
    parts = list(parts)
    if not parts:
        raise UsageError("need at least one summand")
    return EquivBundle(n, tuple(line_from_parabolic(p, n) for p in parts))


# ---------------------------------------------------------------------------
# Algebra and sections.


def tensor_equiv(a: EquivBundle, b: EquivBundle) -> EquivBundle:
    if a.n != b.n:
        raise UsageError("cover orders differ")
    return EquivBundle(
        a.n,
        tuple(EquivLine(x.e + y.e, x.c + y.c) for x in a.lines for y in b.lines),
    )


def dual_equiv(a: EquivBundle) -> EquivBundle:
    return EquivBundle(a.n, tuple(EquivLine(-l.e, -l.c) for l in a.lines))


def direct_sum_equiv(a: EquivBundle, b: EquivBundle) -> EquivBundle:
    if a.n != b.n:
        raise UsageError("cover orders differ")
    return EquivBundle(a.n, a.lines + b.lines)


def equiv_h0(bundle: EquivBundle) -> tuple[int, int]:
    """(total, invariant) section counts.

    Sections of the line (e, c) are spanned by monomials z^t, 0 <= t <= e;
    the monomial is invariant exactly when c + t vanishes mod n.
    """
    total = 0
    invariant = 0
    for l in bundle.lines:
        total += max(0, l.e + 1)
        invariant += sum(1 for t in range(0, l.e + 1) if (l.c + t) % bundle.n == 0)
    return total, invariant


def equiv_semistable(bundle: EquivBundle) -> bool:
    """Equivariant semistability is ordinary semistability of the split type."""
    from .projline import is_semistable_split

    return is_semistable_split(bundle.splitting())


# ---------------------------------------------------------------------------
# The pushforward of the structure sheaf with its canonical filtration.


def regular_bundle(n: int) -> tuple[EquivBundle, ParabolicBundle]:
    """The rank-n bundle carrying the regular character representation.

    Upstairs it is the trivial bundle summed over all n characters; its
    parabolic correspondent is the pushforward of the structure sheaf with
    the vanishing-order flags at 0 and infinity, of parabolic degree zero.
    """
    what = EquivBundle(n, tuple(EquivLine(0, c) for c in range(n)))
    return what, to_parabolic(what)


def pushforward_flag_subspace(n: int, j: int, point: PointOnLine) -> tuple[RatMatrix, Fraction]:
    """Step j of the vanishing-order filtration on the pushforward fiber.

    The fiber is indexed by the monomial classes z^0 .. z^(n-1).  Step j
    (weight (n-j)/n) collects the classes whose local vanishing order at the
    point is at least n - j: at 0 the class z^i vanishes to order i, so the
    step is spanned by the classes i >= n - j; at infinity the class z^i
    (i >= 1) has local generator of vanishing order n - i, so the step is
    spanned by the classes 1 <= i <= j, with the constant class joining only
    at the full step j = n.
    """
    if n < 2:
        raise UsageError("cover order must be at least 2")
    if not (1 <= j <= n):
        raise UsageError(f"filtration index {j} outside 1..{n}")
    if point == ORIGIN:
        idx = list(range(n - j, n))
    elif point == INFINITY:
        idx = list(range(n)) if j == n else list(range(1, j + 1))
    else:
        raise UsageError("the filtration lives over the branch points 0 and infinity")
    basis = RatMatrix(
        len(idx), n,
        tuple(tuple(Fraction(1 if k == i else 0) for k in range(n)) for i in idx),
    )
    return basis, Fraction(n - j, n)
