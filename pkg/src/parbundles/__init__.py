"""Exact-arithmetic semistability certificates for parabolic bundles on the
projective line, with the cyclic-cover correspondence and an exhaustive
verification harness."""

from .exactlin import RatMatrix, matrix, rank_and_kernel, solution_space_dim
from .projline import (
    INFINITY,
    ORIGIN,
    PointOnLine,
    PolyHom,
    SplitBundle,
    cohomology,
    direct_sum_split,
    dual_split,
    hom_dim,
    is_semistable_split,
    pushforward_cyclic,
    split,
    tensor_split,
    twist_split,
)
from .parabolic import (
    ParLineData,
    ParabolicBundle,
    QuasiParabolicFlag,
    gauge_twist,
    line_sum_build,
    oracle_semistable_line_sum,
    oracle_semistable_single_point,
    par_dual_line,
    par_line,
    par_tensor_line,
    parabolic_degree,
)
from .hompar import hom_par_basis, hom_par_dim, hom_par_dim_general
from .equivariant import (
    EquivBundle,
    EquivLine,
    equiv_bundle,
    equiv_h0,
    equiv_semistable,
    from_parabolic,
    pushforward_flag_subspace,
    regular_bundle,
    to_parabolic,
    to_parabolic_lines,
)
from .raynaud import (
    Mode,
    RaynaudBundle,
    RaynaudRequest,
    build,
    certify_semistable,
    raynaud_line_degree,
    single_point_bundle,
    two_point_bundle,
)
from .harness import (
    CampaignConfig,
    VerificationReport,
    enumerate_line_sums,
    find_min_counterexample,
    run_identity_campaign,
    run_theorem_campaign,
)

__version__ = "0.1.0"
