"""Barter double auction: agents trade offers for demands, no money involved."""

from .engine import EngineConfig, Outcome, final_satisfaction, init_state, run_round, run_to_completion
from .game import Action, BilateralView, build_matrix, cooperation_viable, pure_equilibria
from .model import (
    Agent,
    DimensionError,
    FrustrationState,
    ValidationError,
    acceptable,
    distance,
    reservation,
    reservation_radius,
    satisfaction,
)
from .oracle import blocking_pairs, enumerate_matchings, is_individually_rational, max_welfare_matching
from .strategies import GreedyTopK, RandomAmongBest

__all__ = [
    "Action", "Agent", "BilateralView", "DimensionError", "EngineConfig", "FrustrationState",
    "GreedyTopK", "Outcome", "RandomAmongBest", "ValidationError", "acceptable", "blocking_pairs",
    "build_matrix", "cooperation_viable", "distance", "enumerate_matchings", "final_satisfaction",
    "init_state", "is_individually_rational", "max_welfare_matching", "pure_equilibria",
    "reservation", "reservation_radius", "run_round", "run_to_completion", "satisfaction",
]
