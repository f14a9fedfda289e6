"""Extension calculus for positive symmetric operators on subspaces of R^n.

The library decides when an operator prescribed on a subspace extends to a
positive self-adjoint matrix, constructs the minimal (Krein-von Neumann)
extension, shorts PSD matrices to subspaces, builds the interval of
self-adjoint contractive extensions with its uniqueness criterion, and
solves S A = B over PSD matrices -- each construction paired with an
independent oracle.
"""

from .errors import (
    BadShape,
    DomainMismatch,
    InconsistentAction,
    KreinextError,
    MissingSection,
    NoExtension,
    NotContraction,
    NotExtension,
    NotPSD,
    NotPositiveForm,
    NotSolvable,
    NotSymmetric,
    OracleMismatch,
    ParseError,
    PreconditionViolated,
    RangeIdentityViolated,
    RouteMismatch,
    ShapeMismatch,
)
from .numerics import (
    DEFAULT_TOL,
    Subspace,
    ToleranceProfile,
    form_order_leq,
    is_psd,
    loewner_leq,
    pinv,
    psd_range,
    range_intersect,
    range_leq,
    rank_tol,
    spectral_norm,
    sqrt_psd,
    sym,
)
from .partial_op import (
    ExtendibilityReport,
    PartialOperator,
    dstar,
    extendibility_report,
    has_bounded_psd_extension,
    make_partial,
)
from .kvn import (
    characterize_extension,
    is_extension,
    kvn_extension,
    kvn_range_criterion,
    qform_tn,
    verify_sandwich,
)
from .shorted import (
    ShortedResult,
    kvn_monotone_check,
    schur_oracle,
    short_to,
    shorted_monotone_floor,
    shorted_qform,
    shorted_root_range,
)
from .contractive import (
    ContractivePartial,
    ExtensionInterval,
    extremal_extensions,
    interval_member,
    make_contractive,
    sup_qform,
    uniqueness,
)
from .psd_equation import Solvability, check_solvable, solve_min
from .instance import InstanceFile, parse_instance, render_instance
from .generate import gen_instance
from .harness import Report, run_command

__version__ = "0.1.0"

__all__ = [
    "BadShape",
    "ContractivePartial",
    "DEFAULT_TOL",
    "DomainMismatch",
    "ExtendibilityReport",
    "ExtensionInterval",
    "InconsistentAction",
    "InstanceFile",
    "KreinextError",
    "MissingSection",
    "NoExtension",
    "NotContraction",
    "NotExtension",
    "NotPSD",
    "NotPositiveForm",
    "NotSolvable",
    "NotSymmetric",
    "OracleMismatch",
    "ParseError",
    "PartialOperator",
    "PreconditionViolated",
    "RangeIdentityViolated",
    "Report",
    "RouteMismatch",
    "ShapeMismatch",
    "ShortedResult",
    "Solvability",
    "Subspace",
    "ToleranceProfile",
    "characterize_extension",
    "check_solvable",
    "dstar",
    "extendibility_report",
    "extremal_extensions",
    "form_order_leq",
    "gen_instance",
    "has_bounded_psd_extension",
    "interval_member",
    "is_extension",
    "is_psd",
    "kvn_extension",
    "kvn_monotone_check",
    "kvn_range_criterion",
    "loewner_leq",
    "make_contractive",
    "make_partial",
    "parse_instance",
    "pinv",
    "psd_range",
    "qform_tn",
    "range_intersect",
    "range_leq",
    "rank_tol",
    "render_instance",
    "run_command",
    "schur_oracle",
    "short_to",
    "shorted_monotone_floor",
    "shorted_qform",
    "shorted_root_range",
    "solve_min",
    "spectral_norm",
    "sqrt_psd",
    "sup_qform",
    "sym",
    "uniqueness",
    "verify_sandwich",
]
