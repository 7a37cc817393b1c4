"""Unit tests for the time-lines graph model."""

import pytest
from hypothesis import given, settings, strategies as st

from newcomb import (
    GAME_UNFOLD,
    EventKind,
    EventNode,
    GraphStructureError,
    Player,
    Timeline,
    TLGraph,
    UnfoldSpec,
    UnsupportedGraphError,
    ValidationError,
    base_chain,
    detect_twist,
    entanglement_closure,
    game_graph,
    is_chain,
    player_timeline,
    to_dot,
    unfold,
    validate_linearity,
)

GAME_EDGES = {(1, 2), (2, 3), (3, 4), (3, 5), (5, 2), (2, 6), (6, 7)}


def brute_force_closure(graph):
    """Independent oracle: iterate the transmission rule over all pairs."""
    classes = [set(c) for c in graph.entanglement]

    def find(x):
        for idx, cls in enumerate(classes):
            if x in cls:
                return idx
        raise AssertionError(f"{x} not in partition")

    ids = [n.id for n in graph.nodes]
    changed = True
    while changed:
        changed = False
        for a in ids:
            for b in ids:
                if a == b or find(a) != find(b):
                    continue
                for c in graph.successors(a):
                    for d in graph.successors(b):
                        if c == d or graph.node(c).kind is not graph.node(d).kind:
                            continue
                        ci, di = find(c), find(d)
                        if ci != di:
                            classes[ci] |= classes[di]
                            del classes[di]
                            changed = True
    return {frozenset(c) for c in classes}


# ── base_chain ─────────────────────────────────────────────────────


def test_base_chain_game_preset():
    chain = base_chain(4)
    assert [n.id for n in chain.nodes] == [1, 2, 3, 4]
    assert set(chain.edges) == {(1, 2), (2, 3), (3, 4)}
    assert [n.kind for n in chain.nodes] == [
        EventKind.ORACLE_START,
        EventKind.S_CHOICE,
        EventKind.C_CHOICE,
        EventKind.OUTCOME,
    ]
    assert chain.nontrivial_classes == ()


def test_base_chain_single_node():
    chain = base_chain(1)
    assert len(chain.nodes) == 1
    assert chain.edges == frozenset()


def test_base_chain_three_nodes_is_generic():
    chain = base_chain(3)
    assert set(chain.edges) == {(1, 2), (2, 3)}
    assert all(n.kind is EventKind.GENERIC for n in chain.nodes)


@pytest.mark.parametrize("bad", [0, -1, 2.5, "3"])
def test_base_chain_rejects_bad_length(bad):
    with pytest.raises(ValidationError):
        base_chain(bad)


# ── unfold ─────────────────────────────────────────────────────────


def test_unfold_game_preset_structure():
    g = unfold(base_chain(4), GAME_UNFOLD)
    assert {n.id for n in g.nodes} == {1, 2, 3, 4, 5, 6, 7}
    assert set(g.edges) == GAME_EDGES
    assert {frozenset(c) for c in g.nontrivial_classes} == {
        frozenset({3, 6}),
        frozenset({4, 7}),
    }
    assert g.node(5).kind is EventKind.ELABORATION
    assert g.node(6).copy_of == 3 and g.node(6).kind is EventKind.C_CHOICE
    assert g.node(7).copy_of == 4 and g.node(7).kind is EventKind.OUTCOME


def test_unfold_smallest_legal_case():
    g = unfold(base_chain(2), UnfoldSpec(n=2, k=1, m=2))
    assert {n.id for n in g.nodes} == {1, 2, 3, 4}
    assert set(g.edges) == {(1, 2), (2, 3), (3, 1), (1, 4)}
    assert {frozenset(c) for c in g.nontrivial_classes} == {frozenset({2, 4})}
    assert g.node(3).kind is EventKind.ELABORATION
    assert g.node(4).copy_of == 2


def test_unfold_copies_every_event_after_the_delivery_point():
    g = unfold(base_chain(4), UnfoldSpec(n=4, k=1, m=4))
    assert len(g.nodes) == 8
    assert {frozenset(c) for c in g.nontrivial_classes} == {
        frozenset({2, 6}),
        frozenset({3, 7}),
        frozenset({4, 8}),
    }
    assert set(g.edges) == {
        (1, 2), (2, 3), (3, 4),  # original chain
        (4, 5), (5, 1),          # oracle detour
        (1, 6), (6, 7), (7, 8),  # copied branch
    }


@settings(max_examples=200, deadline=None)
@given(data=st.data())
def test_unfold_node_and_edge_counts(data):
    n = data.draw(st.integers(2, 25))
    k = data.draw(st.integers(1, n - 1))
    m = data.draw(st.integers(k + 1, n))
    g = unfold(base_chain(n), UnfoldSpec(n=n, k=k, m=m))
    assert len(g.nodes) == 2 * n - k + 1
    assert len(g.edges) == 2 * n - k + 1
    # copies pair off with their originals and nothing else
    assert {frozenset(c) for c in g.nontrivial_classes} == {
        frozenset({j, n + 1 + (j - k)}) for j in range(k + 1, n + 1)
    }


@pytest.mark.parametrize("n, k, m", [(4, 2, 2), (4, 3, 2), (4, 0, 3), (4, 2, 5)])
def test_unfold_spec_rejects_bad_indices(n, k, m):
    with pytest.raises(ValidationError):
        UnfoldSpec(n=n, k=k, m=m)


def test_unfold_rejects_non_chain_input():
    with pytest.raises(GraphStructureError):
        unfold(game_graph(), GAME_UNFOLD)


def test_unfold_rejects_length_mismatch():
    with pytest.raises(GraphStructureError):
        unfold(base_chain(3), GAME_UNFOLD)


def test_unfold_rejects_pre_entangled_chain():
    tangled = TLGraph.build(
        [EventNode(1, EventKind.GENERIC), EventNode(2, EventKind.GENERIC)],
        [(1, 2)],
        [(1, 2)],
    )
    with pytest.raises(GraphStructureError):
        unfold(tangled, UnfoldSpec(n=2, k=1, m=2))


# ── graph validation ───────────────────────────────────────────────


def test_graph_rejects_duplicate_ids():
    with pytest.raises(ValidationError):
        TLGraph.build(
            [EventNode(1, EventKind.GENERIC), EventNode(1, EventKind.GENERIC)], []
        )


def test_graph_rejects_unknown_edge_endpoint():
    with pytest.raises(ValidationError):
        TLGraph.build([EventNode(1, EventKind.GENERIC)], [(1, 9)])


def test_graph_rejects_self_loop():
    with pytest.raises(ValidationError):
        TLGraph.build([EventNode(1, EventKind.GENERIC)], [(1, 1)])


def test_graph_rejects_mixed_kind_entanglement():
    nodes = [EventNode(1, EventKind.GENERIC), EventNode(2, EventKind.ELABORATION)]
    with pytest.raises(ValidationError):
        TLGraph.build(nodes, [], [(1, 2)])


def test_graph_rejects_copy_of_unknown_node():
    with pytest.raises(ValidationError):
        TLGraph.build([EventNode(1, EventKind.GENERIC, copy_of=5)], [])


def test_graph_rejects_copy_with_different_kind():
    nodes = [
        EventNode(1, EventKind.GENERIC),
        EventNode(2, EventKind.ELABORATION, copy_of=1),
    ]
    with pytest.raises(ValidationError):
        TLGraph.build(nodes, [])


# ── player_timeline ────────────────────────────────────────────────


def test_player_timelines_match_the_game_story():
    g = game_graph()
    assert player_timeline(g, Player.C).sequence == (1, 2, 3, 4)
    assert player_timeline(g, Player.S).sequence == (1, 2, 6, 7)
    assert player_timeline(g, Player.OMEGA).sequence == (1, 3, 5, 2, 6, 7)


def test_player_timeline_rejects_other_graphs():
    with pytest.raises(UnsupportedGraphError):
        player_timeline(base_chain(4), Player.C)
    with pytest.raises(UnsupportedGraphError):
        player_timeline(unfold(base_chain(5), UnfoldSpec(5, 2, 3)), Player.OMEGA)


def test_player_timeline_rejects_unknown_player():
    with pytest.raises(ValidationError):
        player_timeline(game_graph(), "C")


# ── validate_linearity ─────────────────────────────────────────────


def test_all_player_timelines_are_linear():
    g = game_graph()
    for player in Player:
        assert validate_linearity(player_timeline(g, player), g)


def test_repeated_node_is_not_linear():
    assert not validate_linearity([1, 2, 3, 4, 1], game_graph())


def test_backward_hop_is_not_linear():
    # the only route from 3 to 2 runs through 5
    assert not validate_linearity([1, 3, 2], game_graph())


def test_full_graph_walk_is_not_linear():
    g = game_graph()
    assert not validate_linearity([1, 2, 3, 4, 5, 6, 7], g)
    assert not is_chain(g)


def test_chains_are_linear_and_chain_shaped():
    chain = base_chain(4)
    assert validate_linearity([1, 2, 3, 4], chain)
    assert is_chain(chain)
    assert is_chain(base_chain(1))


def test_empty_walk_is_not_linear():
    assert not validate_linearity([], game_graph())


def test_unknown_node_in_walk_raises():
    with pytest.raises(ValidationError):
        validate_linearity([1, 2, 99], game_graph())


# ── entanglement_closure ───────────────────────────────────────────


def test_closure_transmits_choice_entanglement_to_outcomes():
    seeded = game_graph().with_entanglement([(3, 6)])
    assert {frozenset(c) for c in seeded.nontrivial_classes} == {frozenset({3, 6})}
    closed = entanglement_closure(seeded)
    assert {frozenset(c) for c in closed.nontrivial_classes} == {
        frozenset({3, 6}),
        frozenset({4, 7}),
    }


def test_closure_without_seeds_is_identity():
    chain = base_chain(5)
    assert entanglement_closure(chain) == chain
    bare_game = game_graph().with_entanglement([])
    closed = entanglement_closure(bare_game)
    assert closed.nontrivial_classes == ()


def test_closure_is_idempotent():
    for g in (
        game_graph().with_entanglement([(3, 6)]),
        unfold(base_chain(6), UnfoldSpec(6, 2, 4)),
        unfold(base_chain(4), UnfoldSpec(4, 1, 4)),
    ):
        once = entanglement_closure(g)
        assert entanglement_closure(once) == once


def test_closure_already_fixed_point_on_full_seeds():
    g = unfold(base_chain(4), UnfoldSpec(4, 1, 4))
    assert entanglement_closure(g) == g


def test_closure_matches_brute_force_oracle():
    cases = [
        game_graph().with_entanglement([(3, 6)]),
        game_graph().with_entanglement([(4, 7)]),
        unfold(base_chain(4), UnfoldSpec(4, 1, 4)),
        unfold(base_chain(7), UnfoldSpec(7, 3, 5)).with_entanglement([(4, 9)]),
        unfold(base_chain(2), UnfoldSpec(2, 1, 2)),
    ]
    for g in cases:
        closed = entanglement_closure(g)
        assert set(closed.entanglement) == brute_force_closure(g)


def test_closure_partition_laws():
    g = entanglement_closure(game_graph().with_entanglement([(3, 6)]))
    ids = {n.id for n in g.nodes}
    seen = set()
    for cls in g.entanglement:
        assert not (seen & cls)
        seen |= cls
        assert len({g.node(i).kind for i in cls}) == 1
    assert seen == ids


def test_closure_only_merges_never_splits():
    seeded = game_graph().with_entanglement([(3, 6)])
    closed = entanglement_closure(seeded)
    for cls in seeded.entanglement:
        assert any(cls <= bigger for bigger in closed.entanglement)


# ── detect_twist ───────────────────────────────────────────────────


def test_twist_only_in_the_oracle_frame():
    g = game_graph()
    assert detect_twist(player_timeline(g, Player.C), g) == []
    assert detect_twist(player_timeline(g, Player.S), g) == []
    twists = detect_twist(player_timeline(g, Player.OMEGA), g)
    assert twists == [(3, 2)]


def test_twist_with_explicit_base_order():
    g = game_graph()
    omega = player_timeline(g, Player.OMEGA)
    assert detect_twist(omega, g, base_order=[1, 2, 3, 4]) == [(3, 2)]


def test_twist_unmappable_node_raises():
    g = game_graph()
    with pytest.raises(ValidationError):
        detect_twist([1, 2, 3, 4], g, base_order=[1, 2, 3])


def test_twist_excludes_elaboration_pairs():
    g = game_graph()
    twists = detect_twist(player_timeline(g, Player.OMEGA), g)
    assert all(5 not in pair for pair in twists)


# ── to_dot ─────────────────────────────────────────────────────────


def _dot_statement_counts(text):
    nodes = edges = tangles = 0
    for line in text.splitlines():
        line = line.strip()
        if "->" in line:
            if "dir=none" in line:
                tangles += 1
            else:
                edges += 1
        elif "[label=" in line:
            nodes += 1
    return nodes, edges, tangles


def test_dot_game_graph_statement_counts():
    text = to_dot(game_graph())
    assert _dot_statement_counts(text) == (7, 7, 2)
    assert text.startswith("digraph tlg {")
    assert text.count("style=solid") == 3
    assert text.count("style=dashed") == 4


def test_dot_single_node():
    text = to_dot(base_chain(1))
    assert _dot_statement_counts(text) == (1, 0, 0)


def test_dot_plain_chain_is_all_solid():
    text = to_dot(base_chain(4))
    nodes, edges, tangles = _dot_statement_counts(text)
    assert (nodes, edges, tangles) == (4, 3, 0)
    assert text.count("style=solid") == 3
    assert "style=dashed" not in text


def test_dot_output_is_byte_stable():
    assert to_dot(game_graph()) == to_dot(game_graph())
    assert to_dot(base_chain(6)) == to_dot(base_chain(6))


# ── misc structure ─────────────────────────────────────────────────


def test_game_graph_node_two_is_the_bottleneck():
    g = game_graph()
    out_deg = sum(1 for u, _ in g.edges if u == 2)
    in_deg = sum(1 for _, v in g.edges if v == 2)
    assert out_deg == 2 and in_deg == 2


def test_timeline_sequence_is_frozen_tuple():
    t = Timeline(Player.C, [1, 2, 3])
    assert t.sequence == (1, 2, 3)
