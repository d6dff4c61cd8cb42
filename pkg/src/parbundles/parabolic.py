"""Parabolic bundles on the projective line.

A parabolic bundle is a split bundle together with, at finitely many marked
points, a weighted flag of fiber subspaces: strictly decreasing subspaces
(the first step is the full fiber) with strictly increasing weights in
[0, 1).  A point with no recorded flag carries the trivial structure (full
fiber, weight zero) wherever a flag is demanded.

Flags store explicit rational bases so that gauge twists and non-split test
inputs are representable; the parabolic Hom computation is honest linear
algebra on these subspaces, not combinatorial bookkeeping.

Rank-one summands are handled through :class:`ParLineData`, the convenience
form (degree, weight per point); duals and tensor products are provided for
sums of such lines, which is all the constructions here require.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import UsageError
from .exactlin import RatMatrix, rank, rat, span_equal
from .projline import PointOnLine, PolyHom, SplitBundle, split


def check_weight(w: Fraction) -> Fraction:
    w = rat(w)
    if not (0 <= w < 1):
        raise UsageError(f"parabolic weight {w} outside [0, 1)")
    return w


# ---------------------------------------------------------------------------
# Parabolic line data: the rank-one convenience form.


@dataclass(frozen=True)
class ParLineData:
    """A parabolic line bundle: a degree and a weight at each marked point.

    Zero weights are dropped, so two values are equal exactly when they
    describe the same parabolic line bundle.
    """

    degree: int
    weights: tuple[tuple[PointOnLine, Fraction], ...]

    def __post_init__(self):
        seen = set()
        cleaned = []
        for point, w in self.weights:
            w = check_weight(w)
            if point in seen:
                raise UsageError(f"duplicate weight for point {point}")
            seen.add(point)
            if w != 0:
                cleaned.append((point, w))
        cleaned.sort(key=lambda pw: pw[0].sort_key())
        object.__setattr__(self, "weights", tuple(cleaned))

    @staticmethod
    def of(degree: int, weights: Mapping[PointOnLine, Fraction] | None = None) -> "ParLineData":
        items = tuple((p, rat(w)) for p, w in (weights or {}).items())
        return ParLineData(degree, items)

    def weight_at(self, point: PointOnLine) -> Fraction:
        for p, w in self.weights:
            if p == point:
                return w
        return Fraction(0)

    @property
    def points(self) -> tuple[PointOnLine, ...]:
        return tuple(p for p, _ in self.weights)

    def parabolic_degree(self) -> Fraction:
        return Fraction(self.degree) + sum((w for _, w in self.weights), Fraction(0))


def par_line(degree: int, weights: Mapping | None = None) -> ParLineData:
    """Shorthand constructor; weights may be given as ints/strings/Fractions."""
    return ParLineData.of(degree, {p: rat(w) for p, w in (weights or {}).items()})


def par_dual_line(line: ParLineData) -> ParLineData:
    """Parabolic dual of a line: nonzero weights w become 1 - w and the
    degree drops by one per such point, so the parabolic degree negates."""
    new_weights = {p: 1 - w for p, w in line.weights}
    return ParLineData.of(-line.degree - len(line.weights), new_weights)


def par_tensor_line(a: ParLineData, b: ParLineData) -> ParLineData:
    """Parabolic tensor product of two lines: weights add modulo one and
    every carry (sum >= 1) increments the underlying degree."""
    points = sorted(set(a.points) | set(b.points), key=lambda p: p.sort_key())
    degree = a.degree + b.degree
    weights = {}
    for p in points:
        s = a.weight_at(p) + b.weight_at(p)
        if s >= 1:
            s -= 1
            degree += 1
        weights[p] = s
    return ParLineData.of(degree, weights)


# ---------------------------------------------------------------------------
# Flags and bundles.


@dataclass(frozen=True)
class FlagStep:
    basis: RatMatrix  # rows span the subspace
    weight: Fraction


@dataclass(frozen=True)
class QuasiParabolicFlag:
    """Weighted flag at one point: step 1 is the full fiber, subspaces
    strictly decrease, weights strictly increase within [0, 1)."""

    point: PointOnLine
    steps: tuple[FlagStep, ...]

    def __post_init__(self):
        if not self.steps:
            raise UsageError("a flag needs at least one step")
        dim = self.steps[0].basis.cols
        prev_rank = None
        prev_weight = None
        prev_basis = None
        for step in self.steps:
            check_weight(step.weight)
            if step.basis.cols != dim:
                raise UsageError("flag steps live in fibers of different dimension")
            r = rank(step.basis)
            if r != step.basis.rows:
                raise UsageError("flag step basis rows are linearly dependent")
            if prev_rank is None:
                if r != dim:
                    raise UsageError("first flag step must span the full fiber")
            else:
                if not (step.weight > prev_weight):
                    raise UsageError("flag weights must strictly increase")
                if not (0 < r < prev_rank):
                    raise UsageError("flag subspaces must strictly decrease")
                if rank(prev_basis.stack(step.basis)) != prev_rank:
                    raise UsageError("flag steps are not nested")
            prev_rank, prev_weight, prev_basis = r, step.weight, step.basis

    @property
    def fiber_dim(self) -> int:
        return self.steps[0].basis.cols

    def dims(self) -> tuple[int, ...]:
        return tuple(s.basis.rows for s in self.steps)

    def is_trivial_structure(self) -> bool:
        return len(self.steps) == 1


def trivial_flag(point: PointOnLine, dim: int, weight: Fraction = Fraction(0)) -> QuasiParabolicFlag:
    return QuasiParabolicFlag(point, (FlagStep(RatMatrix.identity(dim), check_weight(weight)),))


@dataclass(frozen=True)
class ParabolicBundle:
    underlying: SplitBundle
    flags: tuple[QuasiParabolicFlag, ...]

    def __post_init__(self):
        points = [f.point for f in self.flags]
        if len(set(points)) != len(points):
            raise UsageError("parabolic points must be pairwise distinct")
        for f in self.flags:
            if f.fiber_dim != self.underlying.rank:
                raise UsageError("flag fiber dimension does not match bundle rank")
        ordered = tuple(sorted(self.flags, key=lambda f: f.point.sort_key()))
        object.__setattr__(self, "flags", ordered)

    @property
    def rank(self) -> int:
        return self.underlying.rank

    @property
    def degree(self) -> int:
        return self.underlying.degree

    @property
    def parabolic_points(self) -> tuple[PointOnLine, ...]:
        return tuple(f.point for f in self.flags)

    def flag_at(self, point: PointOnLine) -> QuasiParabolicFlag:
        for f in self.flags:
            if f.point == point:
                return f
        return trivial_flag(point, self.rank)

    def weight_denominators(self) -> set[int]:
        return {s.weight.denominator for f in self.flags for s in f.steps}


def parabolic_degree(bundle: ParabolicBundle) -> Fraction:
    """Underlying degree plus the weight-multiplicity sum over all flags."""
    total = Fraction(bundle.degree)
    for f in bundle.flags:
        dims = list(f.dims()) + [0]
        for step, (d, d_next) in zip(f.steps, zip(dims, dims[1:])):
            total += step.weight * (d - d_next)
    return total


def _part_sort_key(part: ParLineData, points: Sequence[PointOnLine]):
    return (-part.degree, tuple(part.weight_at(p) for p in points))


def sort_parts(parts: Iterable[ParLineData]) -> tuple[ParLineData, ...]:
    """Canonical summand order: degree non-increasing, then weights ascending
    point by point.  This is the coordinate order line_sum_build uses."""
    parts = list(parts)
    points = sorted({p for part in parts for p in part.points}, key=lambda p: p.sort_key())
    return tuple(sorted(parts, key=lambda part: _part_sort_key(part, points)))


def line_sum_build(parts: Sequence[ParLineData]) -> ParabolicBundle:
    """Assemble a direct sum of parabolic lines into an explicit bundle.

    Summands are put in canonical order and become the fiber coordinates; at
    each marked point the flag groups coordinates by weight, each step
    spanned by the coordinates of weight at least its threshold.
    """
    if not parts:
        raise UsageError("a line sum needs at least one summand")
    ordered = sort_parts(parts)
    r = len(ordered)
    points = sorted({p for part in ordered for p in part.points}, key=lambda p: p.sort_key())
    flags = []
    for x in points:
        weights = [part.weight_at(x) for part in ordered]
        levels = sorted(set(weights))
        if levels == [Fraction(0)]:
            continue
        steps = []
        for w in levels:
            idx = [i for i in range(r) if weights[i] >= w]
            basis = RatMatrix(
                len(idx), r,
                tuple(tuple(Fraction(1 if j == i else 0) for j in range(r)) for i in idx),
            )
            steps.append(FlagStep(basis, w))
        flags.append(QuasiParabolicFlag(x, tuple(steps)))
    return ParabolicBundle(split(part.degree for part in ordered), tuple(flags))


def line_bundle(part: ParLineData) -> ParabolicBundle:
    return line_sum_build([part])


def gauge_twist(bundle: ParabolicBundle, gauge: PolyHom) -> ParabolicBundle:
    """Transport every flag subspace through a global automorphism.

    The gauge must be an endomorphism of the underlying bundle with nonzero
    determinant; the degree bounds force the determinant to be a constant
    polynomial, so exact invertibility is the fiber matrix at z = 0 having
    full rank.  Weights are untouched and the result is isomorphic to the
    input as a parabolic bundle.
    """
    if gauge.source != bundle.underlying or gauge.target != bundle.underlying:
        raise UsageError("gauge must be an endomorphism of the underlying bundle")
    zero = PointOnLine.finite(0)
    if rank(gauge.eval_fiber(zero)) != bundle.rank:
        raise UsageError("gauge is not invertible (determinant vanishes)")
    new_flags = []
    for f in bundle.flags:
        g = gauge.eval_fiber(f.point)
        gt = g.transpose()
        steps = tuple(FlagStep(step.basis.mul(gt), step.weight) for step in f.steps)
        new_flags.append(QuasiParabolicFlag(f.point, steps))
    return ParabolicBundle(bundle.underlying, tuple(new_flags))


def oracle_semistable_single_point(bundle: ParabolicBundle) -> bool:
    """Direct semistability test for at most one parabolic point: constant
    splitting type and a trivial (single-step) flag."""
    from .projline import is_semistable_split

    if len(bundle.flags) > 1:
        raise UsageError("single-point oracle requires at most one parabolic point")
    if not is_semistable_split(bundle.underlying):
        return False
    return all(f.is_trivial_structure() for f in bundle.flags)


def oracle_semistable_line_sum(parts: Sequence[ParLineData]) -> bool:
    """A sum of parabolic lines is semistable exactly when every summand has
    the same parabolic degree."""
    if not parts:
        raise UsageError("a line sum needs at least one summand")
    first = parts[0].parabolic_degree()
    return all(p.parabolic_degree() == first for p in parts)


def flags_equal(a: ParabolicBundle, b: ParabolicBundle) -> bool:
    """Same underlying type and, pointwise, the same weighted subspaces."""
    if a.underlying != b.underlying:
        return False
    points = {f.point for f in a.flags} | {f.point for f in b.flags}
    for x in points:
        fa, fb = a.flag_at(x), b.flag_at(x)
        if len(fa.steps) != len(fb.steps):
            return False
        for sa, sb in zip(fa.steps, fb.steps):
            if sa.weight != sb.weight or not span_equal(sa.basis, sb.basis):
                return False
    return True


def floor_div(d: Fraction, r: int) -> int:
    """Integral part of d/r for an exact rational d."""
    return math.floor(Fraction(d) / r)
