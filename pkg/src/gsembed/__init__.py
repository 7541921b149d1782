"""Embeddings between sequence-modelled smoothness spaces: compactness,
nuclearity, entropy asymptotics, and a numeric finite-section laboratory."""

from .seqdsl import (
    SequenceError,
    ParseError,
    PositivityError,
    DepthError,
    EvalOverflow,
    SequenceExpr,
    Geometric,
    LogPower,
    IterLog,
    ExpLogPow,
    PiecewiseGeometric,
    Table,
    Product,
    Power,
    Const,
    geometric,
    log_power,
    iter_log,
    exp_log_pow,
    pw2,
    table,
    const,
    power,
    product,
    parse,
    render,
    evaluate,
    log2_value,
    function_value,
    function_log2,
    strip_tables,
    decompose,
    canonicalize,
    SequenceProfile,
)
from .seqcore import (
    AdmissibilityCertificate,
    BoydIndices,
    EquivalenceResult,
    AsiResult,
    ModulusConversion,
    ModulusRejected,
    StandardizeError,
    certify_admissible,
    boyd_indices,
    boyd_indices_numeric,
    equivalent,
    standardize,
    sequence_from_modulus,
    is_almost_strongly_increasing,
)
from .embanalyzer import (
    INF,
    ext,
    recip,
    dual_star,
    tong,
    delta_gap,
    EmbeddingProblem,
    Target,
    Verdict,
    Band,
    RateFormula,
    EnAResult,
    criterion_sequence,
    ellr_membership,
    membership_partial_sums,
    compactness,
    nuclearity,
    f_space_nuclearity,
    compact_not_nuclear_band,
    entropy_rate,
    en_A,
)
from .seqspacelab import (
    FiniteSection,
    finite_section,
    embedding_norm_closed,
    embedding_norm_search,
    nuclear_norm_tong,
    nuclear_norm_oracle,
    EntropyBound,
    entropy_upper,
    entropy_lower,
    entropy_properties,
    RateFit,
    rate_fit,
)

__version__ = "0.1.0"
