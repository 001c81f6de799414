"""Regret-minimizing exploration planning for co-safe temporal-logic tasks
in partially-known environments."""

from .arena import Arena, build_arena, play_cost, size_bound
from .bench import BenchConfig, GenParams, generate, run_benchmark, sample_env
from .errors import RegretPlanError
from .execute import RunRecord, regret_of, run
from .formula import Dfa, parse, progress, to_dfa
from .grid import grid_compile
from .model import (
    KnowledgeSet,
    Pkwts,
    Product,
    Wts,
    compatible_envs,
    dijkstra,
    initial_knowledge,
    is_compatible,
    model_from_json,
    model_to_json,
    product,
    refine,
    skeleton,
    update,
)
from .oracle import brute_force_optimal_regret, check_regret_bound
from .solver import (
    OnlinePolicy,
    PositionalStrategy,
    best_case_policy,
    best_response,
    solve_regret,
    solve_worst_case,
)

__version__ = "0.1.0"

__all__ = [
    "Arena",
    "BenchConfig",
    "Dfa",
    "GenParams",
    "KnowledgeSet",
    "OnlinePolicy",
    "Pkwts",
    "PositionalStrategy",
    "Product",
    "RegretPlanError",
    "RunRecord",
    "Wts",
    "best_case_policy",
    "best_response",
    "brute_force_optimal_regret",
    "build_arena",
    "check_regret_bound",
    "compatible_envs",
    "dijkstra",
    "generate",
    "grid_compile",
    "initial_knowledge",
    "is_compatible",
    "model_from_json",
    "model_to_json",
    "parse",
    "play_cost",
    "product",
    "progress",
    "refine",
    "regret_of",
    "run",
    "run_benchmark",
    "sample_env",
    "size_bound",
    "skeleton",
    "solve_regret",
    "solve_worst_case",
    "to_dfa",
    "update",
]
