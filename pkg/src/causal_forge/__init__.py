"""Planning instances with structured causal graphs: gadget compilers,
graph analysis, solvability-preserving transforms, and brute-force oracles."""

from .cnf import CnfFormula, SatResult, brute_force_sat, emit_dimacs, parse_dimacs
from .embedder import (
    CapacityReport,
    CompileResult,
    capacity_report,
    compile_to_graph,
    embed_in_tournament,
    family_instance,
    tournament_ham_path,
)
from .errors import (
    BadParameterError,
    BudgetExceededError,
    CapacityError,
    CausalForgeError,
    DuplicateNameError,
    FormatError,
    InvalidPlanError,
    MalformedOperatorError,
    MissingEdgeError,
    NotASubgraphError,
    ShapeMismatchError,
    UnusedVariableError,
    ValidationError,
)
from .gadgets import chain_instance, gadget_fence, gadget_in_star, gadget_out_star
from .graphs import (
    Digraph,
    StructuralProfile,
    UGraph,
    cc_size,
    classify,
    contract,
    is_acyclic,
    is_isomorphic,
    find_isomorphism,
    make_dpath,
    make_fence,
    make_gk_family,
    make_in_star,
    make_out_star,
    make_shape,
    make_tight_polypath,
    moore_bound,
    polypath_bound,
    structural_profile,
    subdivide,
    weak_components,
)
from .planning import (
    ArityStats,
    Operator,
    PartialState,
    Plan,
    PlanningInstance,
    SolutionCheck,
    Variable,
    apply_plan,
    apply_step,
    arity_stats,
    causal_graph,
    dtg,
    is_solution,
    rename_variables,
    substitute,
)
from .serialize import (
    graph_from_edge_list,
    graph_to_dot,
    graph_to_edge_list,
    instance_from_json,
    instance_to_json,
    plan_from_text,
    plan_to_text,
)
from .solver import (
    ComponentResult,
    SearchBudget,
    SearchResult,
    brute_force_plan,
    component_plan,
    decompose,
    reachable_states,
)
from .spgraphs import (
    ClosureReport,
    SpDecision,
    SpEntry,
    SpWitness,
    enumerate_sp_graphs,
    is_sp_closed,
    is_sp_graph,
    replay_witness,
    verify_witness,
)
from .transforms import (
    clone_union,
    extend_to_supergraph,
    reorder_plan_segment,
    stretch_schedule,
    stretch_to_polypath,
    subdivide_instance,
)

__version__ = "0.1.0"
