import random
from fractions import Fraction

import pytest

from parbundles.equivariant import equiv_bundle, regular_bundle, to_parabolic
from parbundles.errors import UsageError
from parbundles.exactlin import matrix
from parbundles.hompar import (
    build_system,
    hom_par_basis,
    hom_par_dim,
    hom_par_dim_general,
    hom_par_dim_lines,
    line_decomposition,
)
from parbundles.parabolic import (
    FlagStep,
    ParabolicBundle,
    QuasiParabolicFlag,
    gauge_twist,
    line_bundle,
    line_sum_build,
    par_line,
)
from parbundles.projline import INFINITY, ORIGIN, PolyHom, hom_dim, split

P0, PINF = ORIGIN, INFINITY
HALF = Fraction(1, 2)


def rand_line(rng, n=4):
    return par_line(
        rng.randint(-2, 2),
        {P0: Fraction(rng.randrange(n), n), PINF: Fraction(rng.randrange(n), n)},
    )


def both(e, f):
    """Fast-path and general-solver dimensions must always agree."""
    fast = hom_par_dim(e, f)
    general = hom_par_dim_general(e, f)
    assert fast == general
    return fast


# --- worked dimensions --------------------------------------------------------

def test_self_hom_of_weighted_line():
    e = line_bundle(par_line(0, {P0: HALF}))
    assert both(e, e) == 1


def test_forced_vanishing_in_degree_zero():
    src = line_bundle(par_line(0, {P0: Fraction(3, 4)}))
    tgt = line_sum_build([par_line(0, {P0: HALF}), par_line(0)])
    assert both(src, tgt) == 0


def test_vanishing_leading_coefficient():
    src = line_bundle(par_line(0, {PINF: HALF}))
    tgt = line_bundle(par_line(1))
    assert both(src, tgt) == 1


def test_regular_bundle_instance():
    _, wpar = regular_bundle(2)
    v = line_bundle(par_line(0, {PINF: HALF}))
    assert both(wpar, v) == 2


# --- invariants ----------------------------------------------------------------

def test_identity_always_parabolic():
    rng = random.Random(21)
    for _ in range(25):
        parts = [rand_line(rng) for _ in range(rng.randint(1, 3))]
        e = line_sum_build(parts)
        assert hom_par_dim(e, e) >= 1


def test_bounded_by_plain_hom_with_equality_when_trivial():
    rng = random.Random(22)
    for _ in range(25):
        e = line_sum_build([rand_line(rng) for _ in range(rng.randint(1, 2))])
        f = line_sum_build([rand_line(rng) for _ in range(rng.randint(1, 2))])
        d = both(e, f)
        assert d <= hom_dim(e.underlying, f.underlying)
        bare_e = ParabolicBundle(e.underlying, ())
        bare_f = ParabolicBundle(f.underlying, ())
        assert both(bare_e, bare_f) == hom_dim(e.underlying, f.underlying)


def test_gauge_invariance_both_sides():
    rng = random.Random(23)
    from parbundles.harness import random_gauge

    for _ in range(12):
        e = line_sum_build([rand_line(rng) for _ in range(rng.randint(1, 2))])
        f = line_sum_build([rand_line(rng) for _ in range(rng.randint(1, 2))])
        d = hom_par_dim(e, f)
        ge = gauge_twist(e, random_gauge(rng, e.underlying))
        gf = gauge_twist(f, random_gauge(rng, f.underlying))
        assert hom_par_dim(ge, f) == d
        assert hom_par_dim(e, gf) == d
        assert hom_par_dim(ge, gf) == d
        assert hom_par_dim_general(ge, gf) == d


def test_additivity_against_general_solver():
    # Block-coordinate direct sums decompose; the decomposition must agree
    # with the full constraint solver on both sides.
    rng = random.Random(24)
    for _ in range(15):
        parts_e = [rand_line(rng) for _ in range(rng.randint(1, 2))]
        parts_f = [rand_line(rng) for _ in range(rng.randint(1, 2))]
        e = line_sum_build(parts_e)
        f = line_sum_build(parts_f)
        total = hom_par_dim_general(e, f)
        assert hom_par_dim(e, f) == total
        by_blocks = sum(
            hom_par_dim_general(line_bundle(a), line_bundle(b))
            for a in parts_e for b in parts_f
        )
        assert by_blocks == total
        closed_form = sum(hom_par_dim_lines(a, b) for a in parts_e for b in parts_f)
        assert closed_form == total


def test_equal_weights_impose_no_condition():
    # Strict-excess semantics: identical weights on both sides leave the
    # full Hom space available.
    src = line_bundle(par_line(0, {P0: HALF, PINF: HALF}))
    tgt = line_bundle(par_line(0, {P0: HALF, PINF: HALF}))
    assert both(src, tgt) == 1


def test_threshold_uses_largest_qualifying_subspace():
    # Target has steps of weight 0 and 3/4; a source weight of 1/2 may land
    # anywhere in the weight >= 1/2 subspace, here the 3/4 line.
    tgt = line_sum_build([par_line(0, {P0: Fraction(3, 4)}), par_line(0)])
    src = line_bundle(par_line(0, {P0: HALF}))
    assert both(src, tgt) == 1


def test_non_coordinate_flags_use_general_solver():
    flag = QuasiParabolicFlag(P0, (
        FlagStep(matrix([[1, 0], [0, 1]]), Fraction(0)),
        FlagStep(matrix([[1, 1]]), HALF),
    ))
    e = ParabolicBundle(split([0, 0]), (flag,))
    assert line_decomposition(e) is None
    tgt = line_bundle(par_line(0))
    # maps must kill the diagonal line at 0: one condition on two constants
    assert hom_par_dim(e, tgt) == hom_dim(e.underlying, tgt.underlying) - 1


# --- bases ----------------------------------------------------------------------

def test_basis_of_self_hom_contains_identity_direction():
    e = line_bundle(par_line(0, {P0: HALF}))
    basis = hom_par_basis(e, e)
    assert len(basis) == 1
    entry = basis[0].entries[0][0]
    assert len(entry) == 1 and entry[0] != 0


def test_basis_matches_dimension_and_reverifies():
    rng = random.Random(25)
    for _ in range(10):
        e = line_sum_build([rand_line(rng) for _ in range(rng.randint(1, 2))])
        f = line_sum_build([rand_line(rng) for _ in range(rng.randint(1, 2))])
        basis = hom_par_basis(e, f)
        assert len(basis) == hom_par_dim(e, f)
        for phi in basis:
            assert phi.source == e.underlying and phi.target == f.underlying


def test_basis_explicit_solution():
    src = line_bundle(par_line(0, {PINF: HALF}))
    tgt = line_bundle(par_line(1))
    basis = hom_par_basis(src, tgt)
    assert len(basis) == 1
    # degree <= 1 map with vanishing leading coefficient: a constant section
    assert basis[0].entries[0][0] == (Fraction(1),)


def test_dim_zero_pair_has_empty_basis():
    src = line_bundle(par_line(1))
    tgt = line_bundle(par_line(0))
    assert hom_par_basis(src, tgt) == []
    assert both(src, tgt) == 0


def test_system_unknowns_match_hom_dim():
    e = line_sum_build([par_line(1), par_line(0, {P0: HALF})])
    f = line_sum_build([par_line(2), par_line(0)])
    system = build_system(e, f)
    assert system.unknowns == hom_dim(e.underlying, f.underlying)


def test_mixed_decomposition_paths_agree():
    # coordinate source against a gauge-twisted (non-coordinate) target
    rng = random.Random(26)
    from parbundles.harness import random_gauge

    for _ in range(10):
        e = line_sum_build([rand_line(rng) for _ in range(rng.randint(1, 2))])
        f = line_sum_build([rand_line(rng), rand_line(rng)])
        gf = gauge_twist(f, random_gauge(rng, f.underlying))
        assert hom_par_dim(e, gf) == hom_par_dim_general(e, gf)
        assert hom_par_dim(gf, e) == hom_par_dim_general(gf, e)
