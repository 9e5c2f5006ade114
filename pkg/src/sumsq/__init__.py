"""Sum-of-Squares online bin packing with proof-structure checkers."""
from .core import (NEW_BIN, Instance, PackingState, PackTrace, PlacementDecision,
                   PlacementRecord, InfeasiblePlacement, apply_placement,
                   choose_placement, delta_ss, pack, ss_value)
from .baselines import PolicyId, pack_with
from .oracle import OptResult, opt_exact, size_lower_bound
from .params import PAPER_PARAMS, ParamPair, derived_facts, feasible, maximize_delta
from .analysis import (check_lemma_sequence, check_theorem_bound, locate_x_xprime,
                       check_mate_pairing, check_class_averages, verify_full_trace)

__version__ = "0.1.0"
