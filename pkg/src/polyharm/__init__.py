"""Exact symbolic calculus on rank-one graded solvable Lie groups:
structure polynomials, the Laplace-Beltrami operator, tension trees, and
explicit proper p-harmonic functions with exact certification."""

from .algebra import (
    AlgebraSpec,
    BracketEntry,
    VarIndex,
    catalog,
    catalog_short_name,
    from_json_dict,
    load_file,
    validate,
)
from .errors import (
    BadParams,
    DependentNodes,
    DepthExceeded,
    DuplicateBracket,
    GradingViolation,
    IndexOutOfRange,
    InternalClosureError,
    JacobiViolation,
    KindMismatch,
    MissingAssignment,
    NonIncreasingEigenvalues,
    NonPositiveEigenvalue,
    ParseError,
    PolyharmError,
    Resonance,
    UnknownCatalogName,
    UnsupportedSpan,
    WrongLayer,
    ZeroCombination,
)
from .expr import MixedExpr, parse, parse_polynomial
from .laplacian import (
    StructPolyTable,
    VectorField,
    ad_power,
    bernoulli,
    kappa,
    left_invariant_fields,
    struct_polys,
    tau,
    tau_fast_x1,
    tau_fast_x1x2,
    tau_frame,
    tau_power,
    tau_t,
)
from .pharmonic import (
    HarmonicCertificate,
    NodeSymbolExpr,
    build_phi,
    build_psi,
    certify_family,
    combine,
    compositions,
    f_coeff,
    formal_tau,
    g_coeff,
    prefix_sums,
    recurrence_check,
    verify,
    verify_formal,
)
from .poly import Monomial, Polynomial
from .scalar import Scalar, format_rational, parse_rational
from .tension import (
    AffinePart,
    RadialFunction,
    RadialSeed,
    TensionTree,
    render_tree_latex,
    render_tree_text,
    sum_trees,
    tension_tree,
    tension_tree_radial,
    tree_from_json,
    tree_to_json,
)

__version__ = "0.1.0"
