"""Test bundles whose parabolic Hom vanishing certifies semistability.

Two constructions, one per marked-point configuration:

* two-point mode (points 0 and infinity): pull the problem to the cyclic
  cover, where the detector for rank r, degree D is the line bundle of
  degree floor(D/r) + 1 -- maps out of it vanish exactly on the constant
  splitting types.  Summing the detector over all n characters and
  descending gives a parabolic bundle, and tensoring with the regular
  bundle of the cover turns ordinary Hom on the cover into parabolic Hom on
  the base.  The result has rank n^2.

* single-point mode (point 0): a single parabolic line of degree
  floor(d/r) carrying weight alpha + 1/n, where alpha is the fractional
  part of d/r.  When the weight reaches or exceeds 1 the integer part is
  carried into the degree (reaching exactly 1 gives the trivial structure).
  The certificate is only guaranteed on the sublattice where d/r is a
  multiple of 1/n; outside it the harness records known disagreements
  rather than asserting them away.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, UsageError
from .equivariant import EquivBundle, EquivLine, regular_bundle, to_parabolic_lines
from .hompar import hom_par_vanishes
from .parabolic import (
    ParLineData,
    ParabolicBundle,
    line_sum_build,
    parabolic_degree,
    par_tensor_line,
    sort_parts,
)
from .projline import ORIGIN, PointOnLine
from .exactlin import rat


class Mode(str, enum.Enum):
    SINGLE_POINT = "single-point"
    TWO_POINT = "two-point"


@dataclass(frozen=True)
class RaynaudRequest:
    r: int
    d: Fraction
    n: int
    mode: Mode

    def __post_init__(self):
        object.__setattr__(self, "d", rat(self.d))
        object.__setattr__(self, "mode", Mode(self.mode))
        if self.r < 1:
            raise UsageError("rank must be at least 1")
        if self.n < 2:
            raise UsageError("cover order must be at least 2")
        if (self.d * self.n).denominator != 1:
            raise DomainError(
                f"parabolic degree {self.d} is not a multiple of 1/{self.n}"
            )


@dataclass(frozen=True)
class TwoPointProvenance:
    m: int
    cover_lines: tuple[EquivLine, ...]     # detector lines upstairs
    descended: tuple[ParLineData, ...]     # their parabolic correspondents
    regular: tuple[ParLineData, ...]       # summands of the regular bundle


class SinglePointCase(str, enum.Enum):
    WEIGHTED = "weighted"          # alpha + 1/n < 1
    TRIVIAL = "trivial"            # alpha + 1/n = 1
    CARRIED = "carried"            # alpha + 1/n > 1, integer part moved to degree


@dataclass(frozen=True)
class SinglePointProvenance:
    d0: int
    alpha: Fraction
    case: SinglePointCase


@dataclass(frozen=True)
class RaynaudBundle:
    request: RaynaudRequest
    parts: tuple[ParLineData, ...]
    bundle: ParabolicBundle
    provenance: TwoPointProvenance | SinglePointProvenance

    def weights_in_lattice(self) -> bool:
        """Whether every weight of the test bundle lies in the 1/n lattice."""
        n = self.request.n
        return all((w * n).denominator == 1 for p in self.parts for _, w in p.weights)


def raynaud_line_degree(r: int, degree: int) -> int:
    """Degree m of the detector line for rank r, total degree `degree`:
    maps O(m) -> E vanish for every summand of E exactly when the splitting
    type is constant, which forces r | degree."""
    if r < 1:
        raise UsageError("rank must be at least 1")
    return degree // r + 1


def two_point_bundle(r: int, d, n: int) -> RaynaudBundle:
    req = RaynaudRequest(r, rat(d), n, Mode.TWO_POINT)
    cover_degree = int(req.d * n)
    m = raynaud_line_degree(r, cover_degree)
    cover = EquivBundle(n, tuple(EquivLine(m, c) for c in range(n)))
    descended = to_parabolic_lines(cover)
    regular_cover, _ = regular_bundle(n)
    regular_parts = to_parabolic_lines(regular_cover)
    parts = sort_parts(
        par_tensor_line(w, line) for w in regular_parts for line in descended
    )
    bundle = line_sum_build(parts)
    assert bundle.rank == n * n
    return RaynaudBundle(
        req, parts, bundle,
        TwoPointProvenance(m, cover.lines, descended, regular_parts),
    )


def single_point_bundle(r: int, d, n: int, point: PointOnLine = ORIGIN) -> RaynaudBundle:
    req = RaynaudRequest(r, rat(d), n, Mode.SINGLE_POINT)
    slope = req.d / r
    d0 = math.floor(slope)
    alpha = slope - d0
    weight = alpha + Fraction(1, n)
    if weight < 1:
        case = SinglePointCase.WEIGHTED
        part = ParLineData.of(d0, {point: weight})
    elif weight == 1:
        case = SinglePointCase.TRIVIAL
        part = ParLineData.of(d0 + 1, {})
    else:
        case = SinglePointCase.CARRIED
        part = ParLineData.of(d0 + 1, {point: weight - 1})
    return RaynaudBundle(
        req, (part,), line_sum_build([part]),
        SinglePointProvenance(d0, alpha, case),
    )


def build(request: RaynaudRequest) -> RaynaudBundle:
    if request.mode is Mode.TWO_POINT:
        return two_point_bundle(request.r, request.d, request.n)
    return single_point_bundle(request.r, request.d, request.n)


def certify_semistable(candidate: ParabolicBundle, certifier: RaynaudBundle) -> bool:
    """The criterion itself: no nonzero parabolic homomorphism from the test
    bundle means semistable.  Validates that the candidate matches the test
    bundle's (rank, parabolic degree, weight lattice) before deciding."""
    req = certifier.request
    if candidate.rank != req.r:
        raise UsageError(f"candidate has rank {candidate.rank}, certifier expects {req.r}")
    pardeg = parabolic_degree(candidate)
    if pardeg != req.d:
        raise UsageError(f"candidate has parabolic degree {pardeg}, certifier expects {req.d}")
    for den in candidate.weight_denominators():
        if req.n % den != 0:
            raise DomainError(
                f"candidate weight denominator {den} is outside the 1/{req.n} lattice"
            )
    return hom_par_vanishes(certifier.bundle, candidate)
