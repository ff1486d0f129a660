"""CMV matrices at desk scale.

Coefficient containers and matrix builders (core), spectral transforms
(opuc), beta-ensemble samplers (ensembles), the finite defocusing
Ablowitz-Ladik hierarchy (alflows), a finite-difference Poisson bracket
engine (brackets), identity suites (verify), JSON/CSV schemas
(serialize), and a command-line interface (cli).
"""

from .alflows import (
    AsymptoticReport,
    FlowHamiltonian,
    Trajectory,
    al_closed_form_field,
    al_vector_field,
    asymptotic_report,
    exact_propagate,
    flow_via_spectral,
    gauge_transform,
    integrate_flow,
    lax_partner,
    plus_projection,
    predicted_asymptotics,
    schur_vector_field,
    toda_vector_field,
    trace_hamiltonian,
)
from .brackets import (
    BracketReport,
    Observable,
    al_bracket,
    coordinate_gradient,
    coordinate_observables,
    cotangent_residual,
    hamiltonian_observables,
    interior_coordinates,
    jacobian_prediction,
    spectral_observables,
    spectral_to_verblunsky_jacobian,
    with_coordinates,
)
from .core import (
    CMVMatrix,
    JacobiMatrix,
    SpectralMeasureCircle,
    SpectralMeasureLine,
    VerblunskySet,
    build_cmv,
    build_jacobi,
    lm_factors,
    verblunsky_block,
)
from .ensembles import (
    EnsembleSpec,
    RngStream,
    eigenvalue_samples,
    gibbs_log_density,
    ks_statistic,
    random_verblunsky,
    sample_beta_interval,
    sample_circular_beta,
    sample_hermite_beta,
    sample_jacobi_beta,
    sample_theta,
)
from .opuc import (
    MonicPolynomial,
    geronimus,
    jacobi_eigensystem,
    monic_opuc,
    reversed_poly,
    szego_coefficients,
    szego_project,
    unitary_eigensystem,
    verblunsky_from_measure,
)

__all__ = [
    "AsymptoticReport",
    "BracketReport",
    "CMVMatrix",
    "EnsembleSpec",
    "FlowHamiltonian",
    "JacobiMatrix",
    "MonicPolynomial",
    "Observable",
    "RngStream",
    "SpectralMeasureCircle",
    "SpectralMeasureLine",
    "Trajectory",
    "VerblunskySet",
    "al_bracket",
    "al_closed_form_field",
    "al_vector_field",
    "asymptotic_report",
    "build_cmv",
    "build_jacobi",
    "coordinate_gradient",
    "coordinate_observables",
    "cotangent_residual",
    "eigenvalue_samples",
    "exact_propagate",
    "flow_via_spectral",
    "gauge_transform",
    "geronimus",
    "gibbs_log_density",
    "hamiltonian_observables",
    "integrate_flow",
    "interior_coordinates",
    "jacobi_eigensystem",
    "jacobian_prediction",
    "ks_statistic",
    "lax_partner",
    "lm_factors",
    "monic_opuc",
    "plus_projection",
    "predicted_asymptotics",
    "random_verblunsky",
    "reversed_poly",
    "sample_beta_interval",
    "sample_circular_beta",
    "sample_hermite_beta",
    "sample_jacobi_beta",
    "sample_theta",
    "schur_vector_field",
    "spectral_observables",
    "spectral_to_verblunsky_jacobian",
    "szego_coefficients",
    "szego_project",
    "toda_vector_field",
    "trace_hamiltonian",
    "unitary_eigensystem",
    "verblunsky_block",
    "verblunsky_from_measure",
    "with_coordinates",
]

__version__ = "0.1.0"
