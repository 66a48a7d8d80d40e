"""Conditioned entanglement measures: entropies, convex roofs and extension searches."""

from .conditioning import (
    C_I,
    C_I_MULTI,
    C_S_MULTI,
    E_SQ_Q,
    ConditionedMeasure,
    Extension,
    ExtensionAnsatz,
    build_extension,
    c_I,
    conditional_entanglement,
    conditioned_objective,
    e_sq_q_bound,
    flag_extension,
    minimize_conditioned,
    multipartite_conditioned,
)
from .entropy import (
    conditional_entropy,
    conditional_mutual_information,
    holevo_quantity,
    multipartite_I_n,
    multipartite_S_n,
    mutual_information,
    von_neumann_entropy,
)
from .exact_measures import c_squashed, convex_roof, entanglement_of_formation, log_negativity, ppt_check
from .optimize import OptimizationResult, OptimizerOptions
from .states import (
    Ensemble,
    Partition,
    PureState,
    QuantumState,
    make_named_state,
    partial_trace,
    purify,
    tensor,
)

__version__ = "0.1.0"
