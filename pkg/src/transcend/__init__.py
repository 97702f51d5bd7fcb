"""Exact and certified computations around Siegel-Shidlovskii and Mahler's method."""

__version__ = "0.1.0"

from .errors import (CannotCertify, DimensionMismatch, InconsistentInitialData,
                     InsufficientInitialData, KindMismatch, NoSolution, PInIdeal,
                     PrecisionExhausted, PreconditionViolation, SingularPoint,
                     SpecParseError, TailBoundUnavailable, TranscendError,
                     TruncationTooSmall, UsageError)
from .exactnum import QQ, ComplexBall, FieldElement, NumberField, embed, house, poly_height
from .measure import (MeasureReport, ValueVector, classify, estimate_wd, eval_at,
                      liouville_scan, reference_c2)
from .polyseries import MonomialBasis, MultiPoly, Poly, RatFunc, TruncSeries
from .relations import (DimensionLedger, buchberger, is_groebner, ledger,
                        relation_kernel, specialize)
from .siegel import (AuxiliaryForm, build_auxiliary, check_multiplicity, mahler_step,
                     theta_step)
from .specfile import load_spec, parse_spec
from .systems import (FunctionSpec, LinearSystemSpec, choose_ell, companion, direct_sum,
                      extend_series, is_regular, mahler_compose)

__all__ = [
    "AuxiliaryForm",
    "buchberger",
    "build_auxiliary",
    "CannotCertify",
    "check_multiplicity",
    "choose_ell",
    "classify",
    "companion",
    "ComplexBall",
    "DimensionLedger",
    "DimensionMismatch",
    "direct_sum",
    "embed",
    "estimate_wd",
    "eval_at",
    "extend_series",
    "FieldElement",
    "FunctionSpec",
    "house",
    "InconsistentInitialData",
    "InsufficientInitialData",
    "is_groebner",
    "is_regular",
    "KindMismatch",
    "ledger",
    "LinearSystemSpec",
    "liouville_scan",
    "load_spec",
    "mahler_compose",
    "mahler_step",
    "MeasureReport",
    "MonomialBasis",
    "MultiPoly",
    "NoSolution",
    "NumberField",
    "parse_spec",
    "PInIdeal",
    "Poly",
    "poly_height",
    "PrecisionExhausted",
    "PreconditionViolation",
    "QQ",
    "RatFunc",
    "reference_c2",
    "relation_kernel",
    "SingularPoint",
    "specialize",
    "SpecParseError",
    "TailBoundUnavailable",
    "theta_step",
    "TranscendError",
    "TruncationTooSmall",
    "TruncSeries",
    "UsageError",
    "ValueVector",
]
