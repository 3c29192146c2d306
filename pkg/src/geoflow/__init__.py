"""Principal flows, principal boundaries and margin classifiers on the unit sphere."""

from .boundary import (
    BoundaryResult,
    BoundaryState,
    ProjectionResult,
    boundary_length,
    init_boundary,
    margin,
    project_to_curve,
    step_boundary,
    trace_boundary,
)
from .classify import (
    BOUNDARY,
    ClassModel,
    Decision,
    class_distance,
    classify_point,
    error_rate,
    label_grid,
    relative_gap,
)
from .curve import Curve, hausdorff_distance, project_points, resample
from .errors import (
    AmbiguousProjectionError,
    CutLocusError,
    DegenerateSpectrumError,
    EmptyNeighborhoodError,
    EndOfFlowError,
    GeoflowError,
    HemisphereError,
    InseparableError,
    LengthMismatchError,
    NonConvergenceError,
    NormalizationError,
    ParseError,
    SeparationError,
    ZeroSpreadError,
)
from .field import SampleField, build_eigen_field, build_modified_field, field_at
from .flow import FlowResult, margin_curves, principal_flow, trace_flow
from .frechet import frechet_mean
from .io import Dataset, load_dataset, save_dataset
from .local import (
    LocalSpectrum,
    Neighborhood,
    find_neighborhood,
    local_covariance,
    local_spectrum,
    local_spread,
    tangent_pca,
)
from .manifold import (
    SPHERE,
    Manifold,
    Sphere,
    exp_map,
    geodesic_distance,
    geodesic_point,
    log_map,
    parallel_transport_exact,
    parallel_transport_schild,
    project_to_tangent,
)
from .plot import emit_polyline, read_polyline
from .simulate import (
    CurveDistribution,
    continuous_flow_estimate,
    convergence_experiment,
    sample_along_curve,
)
from .svm import (
    LocalSeparator,
    equivalence_metrics,
    hard_margin_svm,
    local_separator,
    piecewise_svm_boundary,
)
from .sweep import SweepCell, best_cell, sweep
from .synthetic import c_s_data, generate_band, latitude_bands

__version__ = "0.1.0"
