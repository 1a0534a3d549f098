"""Distinguishability of quantum channels.

Trace norm, maximum output fidelity, and diamond norm of channel
differences, plus the construction of optimal discriminating pure inputs
whose ancilla dimension is twice the Choi rank of the difference.
"""

from .channels import (
    SuperOp,
    choi_from_kraus,
    complementary_pair,
    difference,
    kraus_from_choi,
    kraus_from_stinespring,
    stinespring_from_kraus,
)
from .discriminate import DiscriminationResult, hermitian_doubling, optimal_input, verify
from .families import (
    ExampleReport,
    maximally_entangled,
    pauli_pair,
    run_example_sweep,
    werner_holevo_pair,
    wh_upper_bound,
)
from .linalg import (
    as_density,
    as_unit_vector,
    eigh,
    fidelity,
    hermitian_part,
    partial_trace,
    purify,
    rank_eps,
    spectral_norm,
    sqrtm_psd,
    svd,
    swap_and_projectors,
    tensor_product,
    trace_norm,
)
from .metrics import (
    FMaxResult,
    HelstromResult,
    SolverOptions,
    ancilla_value,
    channel_success,
    dnorm,
    fmax,
    fmax_k,
    helstrom,
    tnorm_ext,
)
from .oracle import brute_dnorm, brute_fmax, unitary_pair_reference
from .rankred import (
    RealLinearMap,
    ReductionTrace,
    boundary_step,
    build_psi,
    kernel_intersection,
    reduce_preimage,
)

__version__ = "0.1.0"

__all__ = [
    "SuperOp",
    "choi_from_kraus",
    "complementary_pair",
    "difference",
    "kraus_from_choi",
    "kraus_from_stinespring",
    "stinespring_from_kraus",
    "DiscriminationResult",
    "hermitian_doubling",
    "optimal_input",
    "verify",
    "ExampleReport",
    "maximally_entangled",
    "pauli_pair",
    "run_example_sweep",
    "werner_holevo_pair",
    "wh_upper_bound",
    "as_density",
    "as_unit_vector",
    "eigh",
    "fidelity",
    "hermitian_part",
    "partial_trace",
    "purify",
    "rank_eps",
    "spectral_norm",
    "sqrtm_psd",
    "svd",
    "swap_and_projectors",
    "tensor_product",
    "trace_norm",
    "FMaxResult",
    "HelstromResult",
    "SolverOptions",
    "ancilla_value",
    "channel_success",
    "dnorm",
    "fmax",
    "fmax_k",
    "helstrom",
    "tnorm_ext",
    "brute_dnorm",
    "brute_fmax",
    "unitary_pair_reference",
    "RealLinearMap",
    "ReductionTrace",
    "boundary_step",
    "build_psi",
    "kernel_intersection",
    "reduce_preimage",
    "__version__",
]
