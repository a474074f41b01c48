"""Hit-and-run random walks on finite groups: exact measures, kernels,
spectra, and the closed-form single-card chain."""

from .groups import (
    CyclicVector,
    FiniteGroup,
    GeneratingTuple,
    Permutation,
    order,
    random_insertion_generator,
    random_to_random_tuple,
    random_transposition_tuple,
    top_to_random_generator,
    top_to_random_tuple,
    transposition,
    cyclic_shift_tuple,
)
from .measures import (
    GroupMeasure,
    borel_measure,
    convolve,
    crude_overhand_measure,
    delta,
    hit_and_run_cyclic,
    hit_and_run_measure,
    hnr_top_to_random,
    packet_description_measure,
    random_to_random_measure,
    t_fold,
    uniform_tuple_measure,
)
from .markov import (
    DistanceCurve,
    Kernel,
    StateGuardExceeded,
    d2_distance,
    dinf_distance,
    dirichlet_form,
    distance_curve,
    kernel_curve,
    kernel_from_measure,
    tv_distance,
)
from .spectral import (
    AuxiliaryFactorization,
    SpectralReport,
    build_factorization,
    comparison_constant,
    dcomp_inequality_check,
    dirichlet_comparison_check,
    jacobi_eigh,
    positivity_certificate,
    sign_representation_eigenvalue,
    symmetric_eigenvalues,
    two_factor_word,
    verify_factorization,
)

__all__ = [name for name in dir() if not name.startswith("_")]
