"""Lattice reduction toolkit and LWE-to-SVP attack benchmark harness."""

from .core import (
    Basis,
    GsoData,
    UnimodularTransform,
    apply_transform,
    gram_schmidt,
    is_in_lattice,
    lattice_determinant,
)
from .enumeration import svp_enumerate
from .errors import (
    DegenerateData,
    DimensionMismatch,
    DimensionTooLarge,
    EmptyVector,
    LatticeError,
    NotUnimodular,
    PrecisionLoss,
    RankDeficient,
    ZeroVector,
)
from .experiments import (
    SigmoidFit,
    SweepConfig,
    SweepSummary,
    TrialResult,
    attack_instance,
    derive_trial_seed,
    fit_sigmoid,
    run_sweep,
    run_trial,
    summarize_runtime,
)
from .lwe import (
    EmbeddedLattice,
    LweInstance,
    LweParams,
    bai_galbraith_embed,
    build_negacyclic_block,
    generate_instance,
    sample_cbd,
    secret_vector,
)
from .oracle import OracleResult, approximation_factor, brute_force_shortest
from .reduction import (
    HERMITE_CONSTANT_POW,
    BkzParams,
    LllParams,
    QualityReport,
    ReductionReport,
    bkz_reduce,
    lll_reduce,
    quality_report,
    size_reduce,
)
from .rng import Xoshiro256StarStar

__version__ = "0.1.0"

__all__ = [
    "Basis",
    "GsoData",
    "UnimodularTransform",
    "apply_transform",
    "gram_schmidt",
    "is_in_lattice",
    "lattice_determinant",
    "svp_enumerate",
    "LatticeError",
    "RankDeficient",
    "PrecisionLoss",
    "DimensionMismatch",
    "NotUnimodular",
    "DimensionTooLarge",
    "ZeroVector",
    "EmptyVector",
    "DegenerateData",
    "SweepConfig",
    "SweepSummary",
    "SigmoidFit",
    "TrialResult",
    "attack_instance",
    "derive_trial_seed",
    "fit_sigmoid",
    "run_sweep",
    "run_trial",
    "summarize_runtime",
    "LweParams",
    "LweInstance",
    "EmbeddedLattice",
    "generate_instance",
    "bai_galbraith_embed",
    "build_negacyclic_block",
    "sample_cbd",
    "secret_vector",
    "OracleResult",
    "brute_force_shortest",
    "approximation_factor",
    "LllParams",
    "BkzParams",
    "ReductionReport",
    "QualityReport",
    "HERMITE_CONSTANT_POW",
    "lll_reduce",
    "bkz_reduce",
    "quality_report",
    "size_reduce",
    "Xoshiro256StarStar",
]
