"""Exact virtual-polytope toolkit for sparse maxout networks."""

from .expressivity import (
    DimBoundReport,
    HyperplaneCertificate,
    check_dim_bound,
    certify_width_cannot_compensate,
    dim_bound,
    hierarchy_report,
    hyperplane_test,
    max_rank_upper,
)
from .lp import LinearProgram, lp_optimize
from .network import (
    ArchitectureSpec,
    MaxExpression,
    MaxoutNeuron,
    SparseMaxoutNetwork,
    attainment_construct,
    counterexample_network,
    expr_to_network,
    expr_to_virtual,
    net_eval,
    newton_extract,
    validate,
)
from .polytope import Polytope, canonical_form, convex_union, edges, minkowski_sum, poly_dim, support_value
from .rational import Q, rank
from .virtual import VirtualPolytope, cell_gradients, v_add, v_conv, v_dim, v_equals, v_scale, v_support

__version__ = "0.1.0"
