"""Correlated suggestions for the mean field game: structure checks,
conditional chains, consistency, the conditional DPP and optimality."""
from .chain import (ConditionalChain, DeviationMap, JointLaw, check_consistency, conditional_chain,
                    evaluate_branch_J, evaluate_J, state_chain)
from .dpp import ValueTable, bruteforce_branch_value, check_optimality, dpp_solve
from .montecarlo import mc_policy_cost
from .suggestion import Atom, RestrictedStrategy, SuggestionAtoms, check_r2, validate_r1

__all__ = ["Atom", "RestrictedStrategy", "SuggestionAtoms", "validate_r1", "check_r2",
           "ConditionalChain", "conditional_chain", "DeviationMap", "JointLaw", "state_chain",
           "check_consistency", "evaluate_J", "evaluate_branch_J", "ValueTable", "dpp_solve",
           "check_optimality", "bruteforce_branch_value", "mc_policy_cost"]
