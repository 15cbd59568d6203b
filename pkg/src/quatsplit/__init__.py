"""Split or division? Quaternion algebras H_K(alpha, m) over real and imaginary quadratic fields."""

from .engine import (
    Decision,
    Mode,
    QuarticCyclicParams,
    Verdict,
    check_hypotheses,
    decide,
    decide_biquadratic,
    decide_general,
    decide_pq,
    decide_quartic_cyclic,
    decide_rational_alpha,
    decide_unit_norm_neg,
    decide_unit_norm_pos,
    global_symbol_path,
)
from .errors import (
    ClassificationMismatch,
    HypothesisViolation,
    InapplicableRule,
    InternalInconsistency,
    InvalidArgument,
    QuatsplitError,
    ResourceLimitExceeded,
)
from .hilbert import discriminant_pq, hilbert_at, ramified_set, split_pq_over_Q
from .quadfield import (
    QuadraticField,
    QuadraticInteger,
    adjusted_unit,
    d1_decomposition,
    fundamental_unit,
    make_field,
    primes_above,
    residue_symbol,
)

__version__ = "0.1.0"

__all__ = [
    "ClassificationMismatch",
    "Decision",
    "HypothesisViolation",
    "InapplicableRule",
    "InternalInconsistency",
    "InvalidArgument",
    "Mode",
    "QuadraticField",
    "QuadraticInteger",
    "QuarticCyclicParams",
    "QuatsplitError",
    "ResourceLimitExceeded",
    "Verdict",
    "adjusted_unit",
    "check_hypotheses",
    "d1_decomposition",
    "decide",
    "decide_biquadratic",
    "decide_general",
    "decide_pq",
    "decide_quartic_cyclic",
    "decide_rational_alpha",
    "decide_unit_norm_neg",
    "decide_unit_norm_pos",
    "discriminant_pq",
    "fundamental_unit",
    "global_symbol_path",
    "hilbert_at",
    "make_field",
    "primes_above",
    "ramified_set",
    "residue_symbol",
    "split_pq_over_Q",
]
