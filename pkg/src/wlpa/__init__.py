"""Weighted Leavitt path algebras: graphs, Condition (LPA), unweighting, arithmetic."""

from .algebra import (
    NOT_HOMOGENEOUS,
    ZERO_ELEMENT,
    Algebra,
    AlgebraElement,
    AlgebraError,
    BudgetExceededError,
    Generator,
    MixedContextError,
    SpecialEdgeChoice,
    UnknownGeneratorError,
    Word,
    apply_generator_map,
    default_special_edges,
    evaluate_relation,
    identity_map,
    relation_instances,
    validate_choice,
)
from .exprs import ExpressionError, parse_element
from .fields import RATIONALS, FieldError, PrimeField, Rationals, field_from_name
from .graphs import (
    BadWeightError,
    DanglingEndpointError,
    DuplicateIdError,
    EdgeRecord,
    Graph,
    GraphError,
    GraphPath,
    GraphSyntaxError,
    UnknownEdgeError,
    UnknownVertexError,
    WeightedGraph,
    cycles_through,
    graph_to_records,
    in_line,
    parse_graph,
    parse_weighted_graph,
    reaches,
    serialize_graph,
    serialize_weighted_graph,
    tree,
    validate_path,
    vertex_weight,
    weighted_edges,
    weighted_graph_from_records,
)
from .lpa import (
    LpaReport,
    LpaSatisfiedError,
    LpaViolation,
    WitnessSearchError,
    check_lpa,
    search_shape_word,
    violation_holds,
    witness_nodpath,
)
from .unweighting import (
    FamilyMap,
    FamilyVerification,
    LpaViolatedError,
    PreconditionViolatedError,
    ReservedIdError,
    TraceMismatchError,
    TransformTrace,
    family_maps,
    make_ranges_sinks,
    strand_name,
    to_unweighted,
    unweight_sunk,
    verify_families,
)

__all__ = [name for name in dir() if not name.startswith("_")]
