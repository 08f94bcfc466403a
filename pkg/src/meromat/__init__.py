"""Meromorphic functional calculus for square matrices.

Eigenprojectors and their nilpotent companions are computed once per
matrix (`decompose`); functions of the matrix, Drazin inverses, powers,
Markov chain quantities and hidden Markov model spectra are then sums over
those companions.
"""

from . import errors
from .funcalc import (
    HolomorphicFunction,
    LocalFunctionData,
    apply_holomorphic,
    apply_meromorphic,
    drazin,
    exp_function,
    exp_integral,
    fundamental_matrix,
    fundamental_matrix_drazin,
    log_function,
    matrix_power,
    polynomial_function,
    power_function,
)
from .spectral import (
    EigenvalueRecord,
    JordanBasis,
    SpectralDecomposition,
    Spectrum,
    compute_spectrum,
    contour_projector_oracle,
    decompose,
    eigenprojectors,
    index_one_projector,
    jordan_basis,
    resolvent,
)
from .specdensity import (
    DeltaEmission,
    DiscreteEmission,
    HiddenMarkovModel,
    NormalEmission,
    PowerSpectrumResult,
    autocorrelation,
    continuous_time_power_spectrum,
    eigenvalue_scan,
    observation_matrix,
    periodogram,
    power_spectrum,
    sample_hmm,
    deterministic_reduction,
    ztransform_observations,
)
from .stoch import (
    green_kubo,
    green_kubo_eigen_expansion,
    inhomogeneous_poisson_transition,
    poisson_generator,
    poisson_transition,
    stationary_distribution,
)

__version__ = "0.1.0"
