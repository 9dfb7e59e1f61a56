"""Inference for locally defined credal (Quasi-Bayesian) networks."""

from .errors import QbnError
from .graph import Dag, d_separated, nondescendants, topological_order
from .model import (IrrelevancePolicy, NetworkModel, Query, load_network, local_vertices,
                    parse_network, serialize_network, validate)
from .geometry import LinearConstraintSet, VertexSet, dedup, enumerate_vertices, intervals_to_constraints
from .solve import (FractionalProgram, LinearProgram, Status, charnes_cooper, solve_fractional,
                    solve_lp)
from .infer import (AtomIndexer, IntervalBounds, bn_posterior, build_fractional, expectation_bounds,
                    generate_constraints, joint_eval, natural_bounds, reduce_theorem2, type1_bounds)
from .data import example_path, load_example

__version__ = "0.1.0"
