"""Exact rank certificates from wedge-power flattenings.

The pipeline: build a tensor (matrix multiplication or arbitrary order
three), contract its first factor against a random low-dimensional
subspace, flatten the result through a wedge power, and take exact ranks
over prime fields or the rationals.  Full rank certifies border rank and
rank lower bounds; every certificate replays bit for bit from its seed.
"""

from ._version import VERSION
from .certify import (
    Certificate,
    GrassmannSupport,
    SupportSearch,
    best_p,
    certify_matmul,
    certify_tensor,
    crossover_table,
    grassmann_support,
    greedy_support,
    reference_bounds,
    replay_certificate,
    simple_rank_lb,
    theorem_rank_lb,
    theorem_rank_lb_raw,
)
from .errors import (
    DenominatorVanishes,
    DimensionMismatch,
    IdenticallyZeroWitness,
    InvalidArguments,
    NotFullRank,
    NotSquare,
    OrderMismatch,
    SweepViolation,
    TrcError,
)
from .exterior import LEX, SPLIT_ZERO, OrderedBasis, SubsetIndex, wedge_insert
from .field import (
    DEFAULT_PRIME,
    DEFAULT_PRIMES,
    Domain,
    PrimeFieldElement,
    RATIONAL,
    Rational,
    Rng,
    gfp,
    is_prime,
    project_mod_q,
)
from .flattening import (
    BlockDecomposition,
    FlatteningMatrix,
    block_decompose,
    build_koszul,
    build_reduced_matmul,
    commutator_block,
    commutator_sign_pattern,
    det_flattening,
)
from .oracle import (
    KnownDecomposition,
    SweepReport,
    load_known,
    rank_one_flattening_rank,
    soundness_sweep,
    strassen_7,
)
from .rank_engine import (
    SparseMatrix,
    det_exact,
    det_mod_q,
    rank_exact,
    rank_mod_q,
    rank_multi_prime,
)
from .tensor import (
    Decomposition,
    MatMulDescriptor,
    RankOneTerm,
    Subspace,
    Tensor3,
    matmul_tensor,
    random_rank_r,
    restrict_a,
    slices_a,
    tensor_from_decomposition,
    tensor_from_slices,
    verify_decomposition,
)

__version__ = VERSION

__all__ = [
    "VERSION",
    "__version__",
    "Certificate",
    "GrassmannSupport",
    "SupportSearch",
    "best_p",
    "certify_matmul",
    "certify_tensor",
    "crossover_table",
    "grassmann_support",
    "greedy_support",
    "reference_bounds",
    "replay_certificate",
    "simple_rank_lb",
    "theorem_rank_lb",
    "theorem_rank_lb_raw",
    "DenominatorVanishes",
    "DimensionMismatch",
    "IdenticallyZeroWitness",
    "InvalidArguments",
    "NotFullRank",
    "NotSquare",
    "OrderMismatch",
    "SweepViolation",
    "TrcError",
    "LEX",
    "SPLIT_ZERO",
    "OrderedBasis",
    "SubsetIndex",
    "wedge_insert",
    "DEFAULT_PRIME",
    "DEFAULT_PRIMES",
    "Domain",
    "PrimeFieldElement",
    "RATIONAL",
    "Rational",
    "Rng",
    "gfp",
    "is_prime",
    "project_mod_q",
    "BlockDecomposition",
    "FlatteningMatrix",
    "block_decompose",
    "build_koszul",
    "build_reduced_matmul",
    "commutator_block",
    "commutator_sign_pattern",
    "det_flattening",
    "KnownDecomposition",
    "SweepReport",
    "load_known",
    "rank_one_flattening_rank",
    "soundness_sweep",
    "strassen_7",
    "SparseMatrix",
    "det_exact",
    "det_mod_q",
    "rank_exact",
    "rank_mod_q",
    "rank_multi_prime",
    "Decomposition",
    "MatMulDescriptor",
    "RankOneTerm",
    "Subspace",
    "Tensor3",
    "matmul_tensor",
    "random_rank_r",
    "restrict_a",
    "slices_a",
    "tensor_from_decomposition",
    "tensor_from_slices",
    "verify_decomposition",
]
