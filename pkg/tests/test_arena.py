"""Game-arena construction and play bookkeeping."""

import pytest

from regretplan import arena as ar
from regretplan import fixtures
from regretplan import model as md
from regretplan.errors import ArenaTooLarge, NotAPlay
from regretplan.formula import parse, to_dfa


@pytest.fixture
def t3():
    return fixtures.t3()


@pytest.fixture
def dfa():
    return to_dfa(parse("F target"), {"target"})


@pytest.fixture
def t3_arena(t3, dfa):
    return ar.build_arena(t3, dfa)


def vertex(arena, kind, x, q, sfx, xhat=None):
    vt = (kind, x, q, sfx) if xhat is None else (kind, x, q, sfx, xhat)
    return arena.index[vt]


def test_initial_vertex(t3_arena):
    assert t3_arena.v0 == 0
    kind, x, q, sfx = t3_arena.vertices[0]
    assert (kind, x, sfx) == (ar.AGENT, 0, ())


def test_bipartite(t3_arena):
    for u, v, _ in t3_arena.edges():
        assert t3_arena.is_agent(u) != t3_arena.is_agent(v)


def test_weights_on_movement_edges_only(t3, t3_arena):
    for u, v, w in t3_arena.edges():
        if t3_arena.is_agent(u):
            assert w == 0
        else:
            x_e = t3_arena.vertices[u][1]
            x_a = t3_arena.vertices[v][1]
            assert w == t3.weights[(x_e, x_a)]


def test_env_branching_on_unexplored(t3_arena):
    ve = vertex(t3_arena, ar.ENV, 0, 0, (), xhat=1)
    assert len(t3_arena.fwd[ve]) == 2


def test_env_determinism_on_explored(t3_arena):
    for vid, vt in enumerate(t3_arena.vertices):
        if vt[0] != ar.ENV:
            continue
        xhat, sfx = vt[4], vt[3]
        explored = xhat in {0, 2, 3} or any(s == xhat for s, _ in sfx)
        if explored:
            assert len(t3_arena.fwd[vid]) == 1, vt


def test_knowledge_monotone_along_edges(t3_arena):
    for u, v, _ in t3_arena.edges():
        su, sv = t3_arena.vertices[u][3], t3_arena.vertices[v][3]
        assert sv[: len(su)] == su


def test_accepting_are_agent_vertices_with_final_q(t3_arena, dfa):
    assert t3_arena.accepting
    for vid in t3_arena.accepting:
        vt = t3_arena.vertices[vid]
        assert vt[0] == ar.AGENT and vt[2] in dfa.accepting


def test_size_bound(t3, dfa, t3_arena):
    assert t3_arena.n <= ar.size_bound(t3, dfa)


def test_vertex_cap(t3, dfa):
    with pytest.raises(ArenaTooLarge):
        ar.build_arena(t3, dfa, cap=4)


def test_fully_known_arena_mirrors_product(dfa):
    m = md.Pkwts(
        n=3,
        initial=0,
        patterns=(((1,),), ((2,),), ((2,),)),
        weights={(0, 1): 2, (1, 2): 3, (2, 2): 4},
        labels=(frozenset(), frozenset(), frozenset({"target"})),
    )
    arena = ar.build_arena(m, dfa)
    prod = md.product(md.skeleton(m), dfa)
    agent_states = {
        (vt[1], vt[2]) for vt in arena.vertices if vt[0] == ar.AGENT
    }
    assert agent_states == set(prod.adj)
    for vid, vt in enumerate(arena.vertices):
        if vt[0] == ar.ENV:
            assert len(arena.fwd[vid]) == 1


# ---------------------------------------------------------------------------
# plays

SFX_YES = ((1, (3,)),)
SFX_NO = ((1, (0,)),)


def shortcut_play(arena):
    return [
        vertex(arena, ar.AGENT, 0, 0, ()),
        vertex(arena, ar.ENV, 0, 0, (), xhat=1),
        vertex(arena, ar.AGENT, 1, 0, SFX_YES),
        vertex(arena, ar.ENV, 1, 0, SFX_YES, xhat=3),
        vertex(arena, ar.AGENT, 3, 1, SFX_YES),
    ]


def detour_play(arena):
    return [
        vertex(arena, ar.AGENT, 0, 0, ()),
        vertex(arena, ar.ENV, 0, 0, (), xhat=1),
        vertex(arena, ar.AGENT, 1, 0, SFX_NO),
        vertex(arena, ar.ENV, 1, 0, SFX_NO, xhat=0),
        vertex(arena, ar.AGENT, 0, 0, SFX_NO),
        vertex(arena, ar.ENV, 0, 0, SFX_NO, xhat=2),
        vertex(arena, ar.AGENT, 2, 0, SFX_NO),
        vertex(arena, ar.ENV, 2, 0, SFX_NO, xhat=3),
        vertex(arena, ar.AGENT, 3, 1, SFX_NO),
    ]


def test_play_cost_single_vertex(t3_arena):
    assert ar.play_cost(t3_arena, [t3_arena.v0]) == 0


def test_play_cost_shortcut(t3_arena):
    assert ar.play_cost(t3_arena, shortcut_play(t3_arena)) == 2


def test_play_cost_detour(t3_arena):
    assert ar.play_cost(t3_arena, detour_play(t3_arena)) == 12


def test_play_cost_rejects_non_edges(t3_arena):
    with pytest.raises(NotAPlay):
        ar.play_cost(t3_arena, [t3_arena.v0, t3_arena.v0])


def all_plays(arena, max_len):
    plays = [[arena.v0]]
    out = [[arena.v0]]
    for _ in range(max_len - 1):
        plays = [p + [v] for p in plays for v, _ in arena.fwd[p[-1]]]
        out.extend(plays)
        if not plays:
            break
    return out


def test_same_endpoint_same_branching_sequence(t3_arena):
    # plays that meet again must have revealed the same unknowns in the
    # same order
    by_end = {}
    for play in all_plays(t3_arena, 12):
        end = play[-1]
        if not t3_arena.is_agent(end):
            continue
        branchers = tuple(
            v for v in play
            if not t3_arena.is_agent(v) and len(t3_arena.fwd[v]) >= 2
        )
        by_end.setdefault(end, set()).add(branchers)
    for end, variants in by_end.items():
        assert len(variants) == 1, (end, variants)


def test_knowledge_chain_along_plays(t3_arena):
    for play in all_plays(t3_arena, 10):
        sfxs = [t3_arena.vertices[v][3] for v in play]
        for a, b in zip(sfxs, sfxs[1:]):
            assert b[: len(a)] == a


def test_arena_json_shape(t3_arena):
    data = ar.arena_to_json(t3_arena)
    assert data["initial"] == 0
    assert len(data["vertices"]) == t3_arena.n
    assert all({"from", "to", "w"} <= set(e) for e in data["edges"])
