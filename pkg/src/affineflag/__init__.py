"""Exact construction and verification of flag graphs of finite affine spaces."""

from .errors import *  # noqa: F401,F403
from .field import FieldSpec, arith, dlog, field_make, field_of_order, frobenius
from .flaggraphs import (
    FlagGraph,
    Orbital,
    census_group,
    gamma_Gc,
    gamma_Gc_group,
    graph_from_orbital,
    is_self_paired,
    orbital_of,
    relation_graph,
    selfpaired_orbital_census,
    sporadic_graphs,
)
from .geometry import (
    AffineSpace,
    Flag,
    Line,
    LineRelation,
    affine_space,
    all_flags,
    all_lines,
    classify,
    is_compatible,
    line_points,
    line_through,
)
from .group import (
    GroupSpec,
    SemiAffineMap,
    StandardParameters,
    apply,
    membership_SL_H,
    named_group,
    orbit,
    is_transitive,
    stabilizer,
    standard_form,
)
from .kernels import BACKEND
from .verification import (
    are_isomorphic,
    check_complete_multipartite,
    design_recover,
    feasibility_check,
    invariants,
    is_arc_transitive,
    predict_valency,
    quotient_analysis,
)

__version__ = "0.1.0"
