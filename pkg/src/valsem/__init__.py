"""valsem: exact arithmetic for rank-2 valuation semigroups.

Builds rank-2 valuations from recursive generating sequences, computes
canonical expansions and values with no floating point, enumerates
finitely generated value sub-semigroups (tilde function, pseudo-boxes),
counts a staircase semigroup against polynomial growth bounds, and
emits machine-checked certificates of wild tilde behavior.
"""

from .errors import CapExceeded, ParseError, UsageError, ValsemError, VerificationError
from .exact import (
    DYADIC2,
    QUAD2,
    SQRT2,
    Dyadic,
    GroupSpec,
    LexVec,
    QuadReal,
    format_lexvec,
    format_scalar,
    in_interval,
    lex_cmp,
    parse_lexvec,
    parse_scalar,
    project,
    quad_cmp,
)
from .genseq import (
    ExpTerm,
    SeqFamily,
    ValuationDef,
    build_seq,
    check_key_identity,
    choose_sigma,
    choose_tau,
    delta,
    eta,
    eta_closed,
    expand,
    gamma,
    normalize_product,
    reconstruct,
    term_value,
    valuate,
)
from .gensemi import (
    Box,
    BoxBoundReport,
    GenSemigroup,
    TildeEntry,
    box_bound_check,
    box_semigroup,
)
from .poly import LaurentZ, MPoly, div_in_var, format_poly, parse_poly
from .semigroups import (
    contradiction_table,
    hs_length,
    stair_count,
    stair_count_upto,
    stair_member,
    stair_members,
    t_box_count,
    theorem1_bound,
)
from .wild import Certificate, WildParams, make_wild_valuation, parse_bound, wild_certificate

__version__ = "0.1.0"

__all__ = [
    "Box",
    "BoxBoundReport",
    "CapExceeded",
    "Certificate",
    "DYADIC2",
    "Dyadic",
    "ExpTerm",
    "GenSemigroup",
    "GroupSpec",
    "LaurentZ",
    "LexVec",
    "MPoly",
    "ParseError",
    "QUAD2",
    "QuadReal",
    "SQRT2",
    "SeqFamily",
    "TildeEntry",
    "UsageError",
    "ValsemError",
    "ValuationDef",
    "VerificationError",
    "WildParams",
    "box_bound_check",
    "box_semigroup",
    "build_seq",
    "check_key_identity",
    "choose_sigma",
    "choose_tau",
    "contradiction_table",
    "delta",
    "div_in_var",
    "eta",
    "eta_closed",
    "expand",
    "format_lexvec",
    "format_poly",
    "format_scalar",
    "gamma",
    "hs_length",
    "in_interval",
    "lex_cmp",
    "make_wild_valuation",
    "normalize_product",
    "parse_bound",
    "parse_lexvec",
    "parse_poly",
    "parse_scalar",
    "project",
    "quad_cmp",
    "reconstruct",
    "stair_count",
    "stair_count_upto",
    "stair_member",
    "stair_members",
    "t_box_count",
    "term_value",
    "theorem1_bound",
    "valuate",
    "wild_certificate",
]
