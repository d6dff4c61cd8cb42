"""Exact dimension of the space of parabolic homomorphisms.

A bundle map phi: E0 -> F0 is parabolic when, at every marked point x and
every source flag step (U, alpha), the fiber image phi_x(U) lands in the
largest target flag subspace whose weight is >= alpha (the zero subspace if
no target step qualifies).  Equal weights impose no condition; only a strict
excess of source weight over target weight triggers one.

The condition is linear in the polynomial coefficients of phi, so the
dimension is the corank of one homogeneous constraint matrix:

* unknowns: one per coefficient of each polynomial entry q_ji (degree at
  most b_j - a_i);
* rows: for each point, each source step and each functional annihilating
  the permitted target subspace, the composite functional o phi_x o (step
  basis vector) expressed in the coefficients.

For bundles whose flags are all coordinate subspaces (direct sums of
parabolic lines, as produced by line_sum_build), the system decouples into
independent line-to-line blocks; hom_par_dim detects that structurally and
sums the blocks, which is what makes exhaustive verification campaigns
affordable.  The block route is itself validated against the full solver by
the additivity tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import UsageError
from .exactlin import RatMatrix, in_row_span, kernel_basis, rank, rref, solution_space_dim
from .parabolic import ParabolicBundle, ParLineData, QuasiParabolicFlag, line_bundle
from .projline import PointOnLine, PolyHom, ZERO_POLY, hom_dim, poly


@dataclass(frozen=True)
class CoeffBlock:
    """Coefficient layout of one polynomial entry q_ji inside the unknowns."""

    j: int
    i: int
    offset: int
    count: int  # b_j - a_i + 1


@dataclass(frozen=True)
class HomParSystem:
    source: ParabolicBundle
    target: ParabolicBundle
    unknowns: int
    blocks: tuple[CoeffBlock, ...]
    constraints: RatMatrix


def _coeff_layout(source, target) -> tuple[int, tuple[CoeffBlock, ...]]:
    blocks = []
    offset = 0
    for j, b in enumerate(target.degrees):
        for i, a in enumerate(source.degrees):
            count = b - a + 1
            if count > 0:
                blocks.append(CoeffBlock(j, i, offset, count))
                offset += count
    return offset, tuple(blocks)


def _permitted_subspace(flag: QuasiParabolicFlag, alpha: Fraction) -> RatMatrix:
    """Largest flag subspace of weight >= alpha; zero subspace if none."""
    for step in flag.steps:
        if step.weight >= alpha:
            return step.basis
    return RatMatrix.zero(0, flag.fiber_dim)


def build_system(source: ParabolicBundle, target: ParabolicBundle) -> HomParSystem:
    """Assemble the flag-compatibility constraints on polynomial coefficients."""
    unknowns, blocks = _coeff_layout(source.underlying, target.underlying)
    points = sorted(
        set(source.parabolic_points) | set(target.parabolic_points),
        key=lambda p: p.sort_key(),
    )
    by_column: dict[tuple[int, int], CoeffBlock] = {(blk.j, blk.i): blk for blk in blocks}
    rows: list[tuple[Fraction, ...]] = []
    for x in points:
        src_flag = source.flag_at(x)
        tgt_flag = target.flag_at(x)
        # Powers of the coordinate for evaluating each coefficient at x.
        for step in src_flag.steps:
            permitted = _permitted_subspace(tgt_flag, step.weight)
            annihilator = kernel_basis(permitted) if permitted.rows else RatMatrix.identity(
                target.underlying.rank
            )
            if annihilator.rows == 0:
                continue
            for u in step.basis.entries:
                for c in annihilator.entries:
                    row = [Fraction(0)] * unknowns
                    for (j, i), blk in by_column.items():
                        scale = c[j] * u[i]
                        if scale == 0:
                            continue
                        if x.is_infinity:
                            # Only the relative leading coefficient survives.
                            row[blk.offset + blk.count - 1] += scale
                        else:
                            p = Fraction(1)
                            for t in range(blk.count):
                                row[blk.offset + t] += scale * p
                                p *= x.coordinate
                    rows.append(tuple(row))
    constraints = RatMatrix(len(rows), unknowns, tuple(rows))
    return HomParSystem(source, target, unknowns, blocks, constraints)


def hom_par_dim_general(source: ParabolicBundle, target: ParabolicBundle) -> int:
    """Dimension by the full constraint solver, no structural shortcuts."""
    system = build_system(source, target)
    return solution_space_dim(system.constraints, system.unknowns)


# ---------------------------------------------------------------------------
# Structural decomposition for coordinate line sums.


def _coordinate_sets(flag: QuasiParabolicFlag) -> list[set[int]] | None:
    """Per step, the coordinate set it spans, or None if any step is not a
    coordinate subspace (detected on the canonical echelon form)."""
    out = []
    for step in flag.steps:
        reduced, _ = rref(step.basis)
        coords = set()
        for row in reduced.entries:
            nz = [k for k, v in enumerate(row) if v != 0]
            if len(nz) != 1:
                return None
            coords.add(nz[0])
        out.append(coords)
    return out


# Decompositions are requested over and over for the same long-lived test
# bundle during campaigns; key the memo on object identity (cheaper than
# hashing whole bundles) and hold a reference so ids cannot be recycled.
_DECOMP_CACHE: dict[int, tuple[ParabolicBundle, "tuple[ParLineData, ...] | None"]] = {}


def line_decomposition(bundle: ParabolicBundle) -> tuple[ParLineData, ...] | None:
    """Split a bundle into parabolic lines when every flag step is a
    coordinate subspace; coordinate k gets the weight of the deepest step
    containing it.  Returns None when the flags are not coordinate-diagonal.
    """
    hit = _DECOMP_CACHE.get(id(bundle))
    if hit is not None and hit[0] is bundle:
        return hit[1]
    r = bundle.rank
    weights: list[dict[PointOnLine, Fraction]] = [dict() for _ in range(r)]
    result: tuple[ParLineData, ...] | None = None
    for flag in bundle.flags:
        sets = _coordinate_sets(flag)
        if sets is None:
            break
        for coords, step in zip(sets, flag.steps):
            for k in coords:
                weights[k][flag.point] = step.weight
    else:
        result = tuple(
            ParLineData.of(bundle.underlying.degrees[k], weights[k]) for k in range(r)
        )
    if len(_DECOMP_CACHE) > 4096:
        _DECOMP_CACHE.clear()
    _DECOMP_CACHE[id(bundle)] = (bundle, result)
    return result


def hom_par_dim_lines(src: ParLineData, tgt: ParLineData) -> int:
    """Line-to-line dimension in closed form.

    Maps are polynomials of degree at most delta = deg(tgt) - deg(src); each
    point where the source weight strictly exceeds the target weight forces
    the fiber value to vanish, and vanishing conditions at distinct points
    (including the leading coefficient at infinity) are independent.
    """
    delta = tgt.degree - src.degree
    if delta < 0:
        return 0
    triggered = sum(1 for p, w in src.weights if w > tgt.weight_at(p))
    return max(0, delta + 1 - triggered)


def _grouped(lines: Sequence[ParLineData]) -> list[tuple[ParLineData, int]]:
    order: list[ParLineData] = []
    counts: dict[ParLineData, int] = {}
    for line in lines:
        if line not in counts:
            order.append(line)
            counts[line] = 0
        counts[line] += 1
    return [(line, counts[line]) for line in order]


_LINE_BUNDLE_CACHE: dict[ParLineData, ParabolicBundle] = {}


def _cached_line_bundle(line: ParLineData) -> ParabolicBundle:
    bundle = _LINE_BUNDLE_CACHE.get(line)
    if bundle is None:
        if len(_LINE_BUNDLE_CACHE) > 4096:
            _LINE_BUNDLE_CACHE.clear()
        bundle = _LINE_BUNDLE_CACHE[line] = line_bundle(line)
    return bundle


def hom_par_dim(source: ParabolicBundle, target: ParabolicBundle) -> int:
    """Dimension of the space of parabolic homomorphisms source -> target.

    Coordinate line sums on either side are split off summand by summand
    (the constraint system decouples per coordinate); whatever does not
    decompose goes through the general solver.
    """
    src_lines = line_decomposition(source)
    tgt_lines = line_decomposition(target)
    if src_lines is not None and tgt_lines is not None:
        return sum(
            ms * mt * hom_par_dim_lines(s, t)
            for s, ms in _grouped(src_lines)
            for t, mt in _grouped(tgt_lines)
        )
    if src_lines is not None:
        return sum(
            mult * hom_par_dim_general(_cached_line_bundle(line), target)
            for line, mult in _grouped(src_lines)
        )
    if tgt_lines is not None:
        return sum(
            mult * hom_par_dim_general(source, _cached_line_bundle(line))
            for line, mult in _grouped(tgt_lines)
        )
    return hom_par_dim_general(source, target)


def hom_par_vanishes(source: ParabolicBundle, target: ParabolicBundle) -> bool:
    """Whether hom_par_dim(source, target) == 0, stopping at the first
    nonzero block; every block dimension is nonnegative, so this computes
    exactly the same predicate."""
    src_lines = line_decomposition(source)
    tgt_lines = line_decomposition(target)
    if src_lines is not None and tgt_lines is not None:
        return all(
            hom_par_dim_lines(s, t) == 0
            for s, _ in _grouped(src_lines) for t, _ in _grouped(tgt_lines)
        )
    if src_lines is not None:
        return all(
            hom_par_dim_general(_cached_line_bundle(line), target) == 0
            for line, _ in _grouped(src_lines)
        )
    if tgt_lines is not None:
        return all(
            hom_par_dim_general(source, _cached_line_bundle(line)) == 0
            for line, _ in _grouped(tgt_lines)
        )
    return hom_par_dim_general(source, target) == 0


# ---------------------------------------------------------------------------
# Explicit witnesses.


def _hom_from_coefficients(system: HomParSystem, vector: Sequence[Fraction]) -> PolyHom:
    src = system.source.underlying
    tgt = system.target.underlying
    entries = [[ZERO_POLY for _ in range(src.rank)] for _ in range(tgt.rank)]
    for blk in system.blocks:
        entries[blk.j][blk.i] = poly(vector[blk.offset:blk.offset + blk.count])
    return PolyHom(src, tgt, tuple(tuple(row) for row in entries))


def _satisfies_constraints(phi: PolyHom, source: ParabolicBundle, target: ParabolicBundle) -> bool:
    """Re-check a map against the flag conditions by direct evaluation,
    independently of the solver that produced it."""
    points = sorted(
        set(source.parabolic_points) | set(target.parabolic_points),
        key=lambda p: p.sort_key(),
    )
    for x in points:
        m = phi.eval_fiber(x)
        tgt_flag = target.flag_at(x)
        for step in source.flag_at(x).steps:
            permitted = _permitted_subspace(tgt_flag, step.weight)
            for u in step.basis.entries:
                image = m.apply(u)
                if permitted.rows == 0:
                    if any(v != 0 for v in image):
                        return False
                elif not in_row_span(permitted, image):
                    return False
    return True


def hom_par_basis(source: ParabolicBundle, target: ParabolicBundle) -> list[PolyHom]:
    """A basis of the parabolic Hom space as explicit polynomial matrices.

    Every member is re-verified against the flag conditions by direct fiber
    evaluation before being returned.
    """
    system = build_system(source, target)
    if system.unknowns == 0:
        return []
    basis_rows = kernel_basis(system.constraints)
    out = []
    for vector in basis_rows.entries:
        phi = _hom_from_coefficients(system, vector)
        if not _satisfies_constraints(phi, source, target):
            raise AssertionError("solver produced a non-parabolic basis element")
        out.append(phi)
    return out
