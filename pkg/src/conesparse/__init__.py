"""Sparsification of conic sums with verifiable certificates."""

from conesparse.barriers import (
    Cone,
    ConeHandle,
    Orthant,
    Product,
    Psd,
    SecondOrder,
    SpectralEpigraph,
    barrier_value,
    cone_from_spec,
    grad_dir,
    hess_bilin,
    hessian_norm,
    third_trilin,
)
from conesparse.bss import bss_bound, bss_sparsify
from conesparse.cone_core import (
    ConeElement,
    OrderNorm,
    SandwichCertificate,
    SparsificationInstance,
    SparsifierResult,
    caratheodory_reduce,
    in_order_interval,
    make_instance,
    order_norm,
    weighted_sum,
)
from conesparse.errors import ConeSparseError, EngineError, InputError
from conesparse.fw import fw_bound, fw_sparsify
from conesparse.graph import WeightedGraph, graph_to_instance, read_edge_list, sparsify_graph
from conesparse.programs import (
    make_pack_cover,
    pack_cost_sandwich,
    solve_cover,
    solve_pack,
    sparse_cover_solution,
)
from conesparse.verify import barrier_law_suite, certify, derivative_suite, pairwise_sc_suite

__version__ = "0.1.0"
