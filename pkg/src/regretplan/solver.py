"""Strategy synthesis on the knowledge-based arena.

Three objectives share one value-iteration core:

* regret: reweight edges so that finite-cost plays are exactly the
  shortest plays, with each accepting edge charged the gap between that
  play's cost and the best response for the knowledge collected; then
  solve the min-max game.
* worst case: min-max over the original movement weights.
* best case: optimistic replanning on the refined skeleton, packaged as
  an online policy.
"""

from __future__ import annotations

import heapq
import logging
import warnings
from dataclasses import dataclass
from typing import NamedTuple

from .arena import AGENT, Arena, build_arena
from .errors import (
    SolverInvariantError,
    StrategyIncomplete,
    StuckNoPath,
    UnrealizableTask,
)
from .formula import Dfa
from .model import (
    INF,
    KnowledgeSet,
    Pkwts,
    compatible_envs,
    initial_knowledge,
    product,
    refine,
    shortest_path_to,
    shortest_satisfying_cost,
    skeleton,
)

log = logging.getLogger("regretplan.solver")

EXACT_BR_CAP = 4096


@dataclass
class PositionalStrategy:
    """Decision map over (state, automaton state, exploration suffix)."""

    objective: str
    value: object
    decisions: dict  # key -> successor state id, or None for stop

    def decide(self, x: int, q: int, suffix):
        key = (x, q, suffix)
        if key not in self.decisions:
            raise StrategyIncomplete(f"no decision at {key}")
        return self.decisions[key]

    def to_json(self) -> dict:
        entries = []
        for (x, q, sfx), go in sorted(
            self.decisions.items(), key=lambda kv: (kv[0][0], kv[0][1], kv[0][2])
        ):
            entries.append({
                "x": x,
                "q": q,
                "ksuffix": [[s, list(o)] for s, o in sfx],
                "go": "stop" if go is None else go,
            })
        value = self.value
        if value == INF:
            value = None
        return {"objective": self.objective, "value": value, "decisions": entries}

    @classmethod
    def from_json(cls, data: dict) -> "PositionalStrategy":
        decisions = {}
        for entry in data["decisions"]:
            sfx = tuple((s, tuple(o)) for s, o in entry["ksuffix"])
            go = entry["go"]
            decisions[(entry["x"], entry["q"], sfx)] = None if go == "stop" else go
        return cls(objective=data["objective"], value=data["value"],
                   decisions=decisions)


class BestResponse:
    """Cheapest satisfying cost over environments consistent with a
    knowledge record, memoized by exploration suffix.

    Exact mode scans every completion of the refined model; if there are
    more than ``exact_cap`` it warns and falls back to the skeleton bound
    for that query.  Skeleton mode is a lower bound: one search on the
    union system, which may mix patterns from different completions.
    """

    def __init__(self, m: Pkwts, a: Dfa, mode: str = "exact",
                 exact_cap: int = EXACT_BR_CAP):
        if mode not in ("exact", "skeleton"):
            raise ValueError(f"unknown best-response mode {mode!r}")
        self.m = m
        self.a = a
        self.mode = mode
        self.exact_cap = exact_cap
        self.base = initial_knowledge(m).base
        self.memo = {}

    def __call__(self, suffix) -> object:
        if suffix in self.memo:
            return self.memo[suffix]
        k = KnowledgeSet(self.base, suffix)
        refined = refine(self.m, k)
        value = None
        if self.mode == "exact":
            completions = 1
            for x in refined.unknown_states:
                completions *= len(refined.patterns[x])
            if completions > self.exact_cap:
                warnings.warn(
                    f"best response: {completions} completions exceed cap "
                    f"{self.exact_cap}; using skeleton lower bound",
                    RuntimeWarning,
                )
            else:
                value = min(
                    shortest_satisfying_cost(t, self.a)
                    for t in compatible_envs(refined)
                )
        if value is None:
            value = shortest_satisfying_cost(skeleton(refined), self.a)
        self.memo[suffix] = value
        return value


def best_response(m: Pkwts, a: Dfa, k: KnowledgeSet, mode: str = "exact"):
    """One-off best-response query; see BestResponse for the modes."""
    return BestResponse(m, a, mode=mode)(k.suffix)


# ---------------------------------------------------------------------------
# shortest-play edge set and the regret weight function

class EspResult(NamedTuple):
    edges: set        # edges on some cheapest play from the start to a final
    dist: dict        # forward distances from the initial vertex
    potential: dict   # min over finals of (backward distance - final distance)


def compute_e_sp(arena: Arena) -> EspResult:
    fadj = {u: arena.fwd[u] for u in range(arena.n)}
    dist, _ = _dijkstra_multi(fadj, {arena.v0: 0})
    seeds = {v: -dist[v] for v in arena.accepting if v in dist}
    if not seeds:
        raise UnrealizableTask("no accepting vertex is reachable")
    radj = {u: arena.rev[u] for u in range(arena.n)}
    potential = _dijkstra_multi(radj, seeds)[0]
    edges = set()
    for u, v, w in arena.edges():
        if u not in dist or v not in potential:
            continue
        slack = dist[u] + w + potential[v]
        if slack < 0:
            raise SolverInvariantError(f"negative slack {slack} on edge ({u},{v})")
        if slack == 0:
            edges.add((u, v))
    return EspResult(edges=edges, dist=dist, potential=potential)


def _dijkstra_multi(adj, seeds):
    """Dijkstra from several seeds with (possibly negative) start offsets.

    Edge weights must be nonnegative, which keeps pop order final even
    when seed offsets differ in sign.
    """
    dist = dict(seeds)
    pred = {v: None for v in seeds}
    heap = [(d, v) for v, d in sorted(seeds.items())]
    heapq.heapify(heap)
    done = set()
    while heap:
        d, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        for v, w in adj.get(u, ()):
            nd = d + w
            if v not in dist or nd < dist[v]:
                dist[v] = nd
                pred[v] = u
                heapq.heappush(heap, (nd, v))
    return dist, pred


def build_mu(arena: Arena, esp: EspResult, br_fn) -> dict:
    """Regret weights: zero on commitments and on shortest-play movement,
    infinite off the shortest plays, and cheapest-play cost minus best
    response on edges entering an accepting vertex."""
    accepting = set(arena.accepting)
    mu = {}
    for u, v, w in arena.edges():
        if arena.is_agent(u):
            mu[(u, v)] = 0
        elif (u, v) not in esp.edges:
            mu[(u, v)] = INF
        elif v in accepting:
            sfx = arena.vertices[v][3]
            value = esp.dist[v] - br_fn(sfx)
            if value < 0:
                raise SolverInvariantError(
                    f"best response exceeds shortest-play cost at vertex {v}; "
                    "check the best-response mode")
            mu[(u, v)] = value
        else:
            mu[(u, v)] = 0
    return mu


# ---------------------------------------------------------------------------
# min-max value iteration (Algorithm: env maximizes, agent minimizes,
# accepting vertices pinned to zero)

class MinMaxResult(NamedTuple):
    values: list
    choices: dict   # agent vertex id -> successor id, or None for stop
    sweeps: int


def solve_minmax(arena: Arena, weights: dict) -> MinMaxResult:
    n = arena.n
    accepting = set(arena.accepting)
    values = [INF] * n
    for v in accepting:
        values[v] = 0

    # aligned successor arrays; dict lookups are too slow inside the sweeps
    succ_ids = []
    succ_w = []
    kind_min = []
    for v in range(n):
        out = arena.fwd[v]
        succ_ids.append([t for t, _ in out])
        succ_w.append([weights[(v, t)] for t, _ in out])
        kind_min.append(arena.is_agent(v))
    active = [v for v in range(n) if v not in accepting]
    # updating deep vertices first (reverse discovery order) propagates a
    # whole play per sweep; values only ever decrease, so updating in
    # place reaches the same fixpoint as simultaneous sweeps
    active.reverse()

    sweeps = 0
    while True:
        changed = False
        for v in active:
            ids = succ_ids[v]
            ws = succ_w[v]
            best = values[ids[0]] + ws[0]
            if kind_min[v]:
                for i in range(1, len(ids)):
                    cand = values[ids[i]] + ws[i]
                    if cand < best:
                        best = cand
            else:
                for i in range(1, len(ids)):
                    cand = values[ids[i]] + ws[i]
                    if cand > best:
                        best = cand
            if best != values[v]:
                values[v] = best
                changed = True
        sweeps += 1
        if not changed:
            break
    log.debug("min-max fixpoint after %d sweeps over %d vertices", sweeps, n)

    choices = {}
    for v in range(n):
        if not arena.is_agent(v):
            continue
        if v in accepting:
            choices[v] = None
        elif values[v] < INF:
            best = None
            for t, _ in arena.fwd[v]:
                if _is_round_trip(arena, t, v):
                    continue
                if values[t] + weights[(v, t)] == values[v]:
                    best = t
                    break  # successors are sorted by id: first hit wins ties
            if best is None:
                raise SolverInvariantError(f"no witness successor at vertex {v}")
            choices[v] = best
    return MinMaxResult(values=values, choices=choices, sweeps=sweeps)


def _is_round_trip(arena: Arena, env_v: int, agent_v: int) -> bool:
    # an env vertex whose only move returns to the same agent vertex can
    # never make progress (designated goal self-loops produce these)
    out = arena.fwd[env_v]
    return len(out) == 1 and out[0][0] == agent_v


def _reachable_decisions(arena: Arena, choices: dict) -> dict:
    """Restrict a vertex-indexed decision map to play-reachable vertices,
    keyed by (state, automaton state, knowledge suffix)."""
    decisions = {}
    seen = {arena.v0}
    stack = [arena.v0]
    while stack:
        v = stack.pop()
        vt = arena.vertices[v]
        if vt[0] == AGENT:
            go = choices[v]
            decisions[(vt[1], vt[2], vt[3])] = (
                None if go is None else arena.vertices[go][4]
            )
            nxt = [] if go is None else [go]
        else:
            nxt = [t for t, _ in arena.fwd[v]]
        for t in nxt:
            if t not in seen:
                seen.add(t)
                stack.append(t)
    return decisions


# ---------------------------------------------------------------------------
# the three synthesis entry points

def solve_regret(m: Pkwts, a: Dfa, br_mode: str = "exact",
                 arena_cap: int = None):
    """Regret-minimizing strategy and its regret value."""
    kwargs = {} if arena_cap is None else {"cap": arena_cap}
    arena = build_arena(m, a, **kwargs)
    esp = compute_e_sp(arena)
    br_fn = BestResponse(m, a, mode=br_mode)
    mu = build_mu(arena, esp, br_fn)
    result = solve_minmax(arena, mu)
    value = result.values[arena.v0]
    if value == INF:
        raise UnrealizableTask("no strategy wins in every compatible environment")
    strategy = PositionalStrategy(
        objective="regret",
        value=value,
        decisions=_reachable_decisions(arena, result.choices),
    )
    return strategy, value


def solve_worst_case(m: Pkwts, a: Dfa, arena_cap: int = None):
    """Strategy minimizing the worst-case total cost, and that cost."""
    kwargs = {} if arena_cap is None else {"cap": arena_cap}
    arena = build_arena(m, a, **kwargs)
    weights = {(u, v): w for u, v, w in arena.edges()}
    result = solve_minmax(arena, weights)
    value = result.values[arena.v0]
    if value == INF:
        raise UnrealizableTask("no strategy wins in every compatible environment")
    strategy = PositionalStrategy(
        objective="worst",
        value=value,
        decisions=_reachable_decisions(arena, result.choices),
    )
    return strategy, value


class OnlinePolicy:
    """Optimistic replanner: always treats the refined skeleton as the
    real world and follows its cheapest satisfying path, replanning as
    observations arrive."""

    objective = "best"
    value = None

    def __init__(self, m: Pkwts, a: Dfa):
        self.m = m
        self.a = a
        self.base = initial_knowledge(m).base

    def reset(self):
        pass  # planning state is recomputed from the knowledge suffix

    def decide(self, x: int, q: int, suffix):
        if q in self.a.accepting:
            return None
        refined = refine(self.m, KnowledgeSet(self.base, suffix))
        prod = product(skeleton(refined), self.a)
        source = (x, q)
        cost, path = shortest_path_to(prod.adj, source, prod.accepting)
        if path is None:
            raise StuckNoPath(
                f"no satisfying path from state {x} under current knowledge")
        return path[1][0]


def best_case_policy(m: Pkwts, a: Dfa) -> OnlinePolicy:
    return OnlinePolicy(m, a)
