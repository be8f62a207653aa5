"""Exact ROABP widths via Nisan matrices, graph layout solvers and reduction gadgets."""

from .errors import (
    CapExceededError,
    DimensionError,
    FieldError,
    GraphError,
    ParseError,
    RoabpError,
    ZeroPolynomialError,
)
from .exactfield import GF, QQ, Field, lucas_binom, scalar_arith
from .gadgets import (
    GadgetKind,
    build_gadget,
    gadget_bdgt,
    gadget_inapprox,
    gadget_orbit_char0,
    gadget_orbit_charp,
    gadget_quadratic,
    neighbor_index,
)
from .graphlayout import (
    Graph,
    arrangement_cost,
    cut_rank,
    cut_size,
    cutwidth_exact,
    linear_rank_width_exact,
    load_graph,
    parse_graph,
)
from .nisan import (
    NisanMatrix,
    Roabp,
    WidthReport,
    evaluate_roabp,
    min_width,
    nisan_matrix,
    nisan_rank,
    synthesize_roabp,
    width_profile,
)
from .sparsepoly import (
    AffineMap,
    SparsePoly,
    affine_substitute,
    poly_degree_info,
    poly_from_terms,
    poly_mul,
    tensor_power,
)

__version__ = "0.1.0"
