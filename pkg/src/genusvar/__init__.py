"""Representation numbers of positive definite integral quadratic forms.

Genus averages against local densities, automorphism orbits, harmonic Weyl
sums and theta series, and the geometric/spectral variance of smoothed
representation counts, with equidistribution statistics on the unit quadric.
"""

__version__ = "0.1.0"

from .errors import (
    AllZeroSeries,
    BudgetExceeded,
    DegenerateScale,
    DimensionTooSmall,
    EmptyGenus,
    EmptySolutionSet,
    GenusVarError,
    InconsistentGenus,
    InputError,
    NoPoints,
    NotIntegral,
    NotPositiveDefinite,
    NotStabilized,
    NotSymmetric,
    ParseError,
    QuadratureFailure,
    RootSplittingError,
    TargetNotPositive,
    UnsupportedN,
)
from .forms import (
    GenusData,
    QuadForm,
    direct_sum,
    e8_form,
    genus_of_single,
    identity_form,
    load_form,
    load_genus,
    read_form_entries,
    validate_form,
)
from .enumeration import (
    RepSet,
    RootProfile,
    rep_count,
    rep_matrices,
    root_vectors,
    short_vectors,
)
from .isometry import (
    OrbitDecomposition,
    aut_order,
    automorphism_generators,
    is_isometric,
    orbit_decompose,
)
from .roots import (
    RootAnalysis,
    norm1_span_analysis,
    orthogonal_root_basis,
    verify_root_bounds,
)
from .mass import (
    CutoffReport,
    LocalDensity,
    SiegelReport,
    archimedean_density,
    cutoff_thresholds,
    even_unimodular_mass,
    local_density,
    mass_probability,
    siegel_average,
    siegel_main_term,
    sigma_good,
)
from .harmonics import (
    HarmonicBasis,
    HarmonicElement,
    HeckeReport,
    ThetaSeries,
    WeylSum,
    ZonalFunction,
    directional_harmonic,
    harmonic_basis,
    harmonic_dimension,
    harmonic_project,
    harmonic_theta,
    hecke_eigen_check,
    laplacian_apply,
    spectral_pair_sum,
    weyl_sum,
    zonal,
    zonal_table,
)
from .variance import (
    CapMissReport,
    DiophantineWitness,
    EquidistReport,
    GeometricSide,
    Kernel,
    SpectralSide,
    SphericalTransform,
    VarianceReport,
    bump_profile,
    cap_miss_fraction,
    diophantine_witness,
    equidist_variance,
    flat_profile,
    geometric_variance,
    kernel_normalize,
    sample_sphere,
    spectral_variance,
    spherical_transform,
    variance_report,
)

__all__ = [name for name in dir() if not name.startswith("_")]
