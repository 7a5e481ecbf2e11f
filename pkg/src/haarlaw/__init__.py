"""Haar-measure characteristic polynomials: samplers, OPUC tools and law checks."""

__version__ = "0.1.0"

from .haar import (
    CycleDecomposition,
    PhasedPermutation,
    cycle_decompose,
    dense,
    det_id_minus_phased_permutation,
    reflection_to,
    sample_haar_recursive,
    sample_haar_unitary_ginibre,
    sample_phased_permutation,
    stabilizer_embed,
)
from .harness import (
    Comparison,
    SamplerRef,
    compare_laws,
    cycles_report,
    named_comparison,
    process_report,
    variance_scaling_report,
)
from .kernels import RngStream
from .linalg import hermitian_inner, householder_qr, lu_det, mat_mul, mat_vec, unitarity_defect
from .opuc import (
    MomentSequence,
    VerblunskySequence,
    cmv_from_verblunsky,
    moments_from_matrix,
    phi_at_one,
    principal_minor_charpoly,
    sample_verblunsky_kn,
    szego_eval,
    verblunsky_from_moments,
)
from .products import (
    LogProcessPath,
    log_z_full,
    sample_cycle_count_sum,
    sample_log_process,
    sample_permutation_product,
    sample_unitary_product,
)
from .stats import SampleBatch, TestReport, cycle_count_exact_law, ks_two_sample, mellin_modulus_moment
