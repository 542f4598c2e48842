"""Exact model counting and weighted CSP solving on beta-acyclic instances."""

from .cli import count_models, max_sat
from .elim import (ElimState, InvariantViolation, NotANestPoint, OrderViolation, PrecOrder,
                   compute_I_k, eliminate_nest_point, prec_compare, solve)
from .formula import (Clause, CnfFormula, DimacsError, Literal, formula_hypergraph,
                      isolated_variables, parse_dimacs, serialize_dimacs)
from .hypergraph import (Hypergraph, IncidenceGraph, NotBetaAcyclic, beta_elimination_order,
                         incidence_graph, is_nest_point, remove_vertex)
from .wcsp import (EvalMode, WcspInstance, WcspdError, WeightedConstraint, cnf_to_count_instance,
                   cnf_to_max_instance, eval_total, merge_equal_scopes, parse_wcspd, serialize_wcspd)

__version__ = "0.1.0"
