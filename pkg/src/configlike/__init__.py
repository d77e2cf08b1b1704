"""Configuration-like spaces, k-equal arrangement homology and orbit coincidence search."""

from .groups import (GroupSubset, GroupTable, IGVector, OrbitTuple, act_on_subset, act_on_tuple,
                     make_cyclic, make_p_torus, orbit_tuple, project_to_IG)
from .config_spaces import (AmbiguousPattern, CoincidencePattern, KTooSmall, NotInStratum, NotInW,
                            coincidence_pattern, hat_map, in_kwise_diagonal, in_max_diagonal,
                            majority_block, pattern_action_fixed_points, top_block_classify)
from .arrangements import (ArrangementLattice, SubspaceArrangement, intersection_lattice,
                           k_equal_arrangement, v1_arrangement)
from .homology import BettiReport, complement_betti, order_complex_homology
from .linalg import fp_rank
from .solver import (BudgetExhausted, Scenario, SolverResult, knaster_scan_1d, load_scenario,
                     residual_A, residual_Aprime, residual_knaster, solve)

__version__ = "0.1.0"
