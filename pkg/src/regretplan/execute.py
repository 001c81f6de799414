"""Run strategies against concrete hidden environments."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import IncompatibleEnvironment, NonTermination, StrategyIncomplete
from .formula import Dfa
from .model import (
    INF,
    KnowledgeSet,
    Pkwts,
    Wts,
    compatible_envs,
    initial_knowledge,
    is_compatible,
    shortest_satisfying_cost,
    update,
)


@dataclass(frozen=True, eq=False)
class RunRecord:
    path: tuple
    history: tuple           # (state, observed successor tuple) per visit
    cost: int
    satisfied: bool
    knowledge_final: KnowledgeSet

    def to_json(self) -> dict:
        return {
            "path": list(self.path),
            "history": [[x, list(o)] for x, o in self.history],
            "cost": self.cost,
            "satisfied": self.satisfied,
            "knowledge_final": [
                [x, list(o)] for x, o in self.knowledge_final.suffix
            ],
        }


def _step_cap(m: Pkwts, a: Dfa) -> int:
    # between two explorations a terminating positional run cannot revisit
    # a (state, automaton state) pair, and there are at most |unknown|
    # exploration events
    return 4 * m.n * a.n * (len(m.unknown_states) + 1)


def run(strategy, m: Pkwts, a: Dfa, actual: Wts) -> RunRecord:
    """Walk the environment under a strategy, observing successor patterns
    on arrival, until the strategy stops."""
    if not is_compatible(actual, m):
        raise IncompatibleEnvironment("environment does not match the possible world")
    reset = getattr(strategy, "reset", None)
    if reset is not None:
        reset()

    x = m.initial
    q = a.step(a.initial, m.labels[x])
    k = initial_knowledge(m)
    path = [x]
    history = [(x, actual.successors[x])]
    cost = 0
    cap = _step_cap(m, a)

    while True:
        go = strategy.decide(x, q, k.suffix)
        if go is None:
            break
        if go not in k.obs(x):
            raise StrategyIncomplete(
                f"decision {x}->{go} is not an observed successor")
        cost += m.weights[(x, go)]
        x = go
        obs = actual.successors[x]
        k = update(k, (x, obs))
        history.append((x, obs))
        q = a.step(q, m.labels[x])
        path.append(x)
        if len(path) > cap:
            raise NonTermination(f"run exceeded {cap} steps without stopping")

    trace = [m.labels[s] for s in path]
    return RunRecord(
        path=tuple(path),
        history=tuple(history),
        cost=cost,
        satisfied=a.accepts(trace),
        knowledge_final=k,
    )


def regret_of(strategy, m: Pkwts, a: Dfa, cap: int = None):
    """Worst case, over compatible environments, of realized cost minus
    that environment's cheapest satisfying cost."""
    kwargs = {} if cap is None else {"cap": cap}
    worst = -INF
    for t in compatible_envs(m, **kwargs):
        rec = run(strategy, m, a, t)
        if not rec.satisfied:
            return INF
        worst = max(worst, rec.cost - shortest_satisfying_cost(t, a))
    return worst
