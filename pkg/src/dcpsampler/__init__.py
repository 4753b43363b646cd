"""Uniform Boltzmann sampling of digitally convex polyominoes and
NW-convex lattice paths, with exact enumeration oracles, tuning, and
limit-shape analytics."""

from .analytics import (
    CONSTANTS,
    AsymptoticConstants,
    ShapeProfile,
    abscissa_of_slope,
    asym_count,
    asym_count_log,
    asym_moments,
    coprime_slope_sum,
    expected_initial_steps,
    initial_rise,
    limit_shape,
    profile_csv,
    shape_profile,
)
from .boltzmann import (
    SampleReport,
    TrialCapExceeded,
    assemble_path,
    sample_coprime_pair,
    sample_multiset,
    sample_path_approx,
    sample_path_exact,
    sample_path_free,
    sample_record,
    sample_size_index,
)
from .christoffel import (
    EMPTY_MULTISET,
    CoprimeSegment,
    PathWord,
    SegmentMultiset,
    christoffel_word,
    is_christoffel_primitive,
    slope_compare,
)
from .gfseries import (
    GfContext,
    Moments,
    ResourceLimitError,
    TotientTable,
    build_context,
    mean_size,
    series_identity_check,
    size_variance,
    totient_sieve,
    tune_parameter,
)
from .oracle import (
    CountTable,
    christoffel_factorization,
    count_paths,
    enumerate_paths,
    is_nw_convex,
    is_nw_convex_geometric,
)
from .polyomino import (
    ContourError,
    Polyomino,
    assemble_contour,
    closure_check,
    is_digitally_convex,
    polyomino_record,
    render_svg,
    sample_dcp,
)
from .rng import RngStream

__version__ = "0.1.0"
