import pytest

from arena.games import I, boolean_game, lolli, parse_move, stream_game, tensor
from arena.poly import (
    ArityMismatch, EmptyFamily, InstanceFamily, InstanceNotInFamily, NotUniform, VariableType,
    beck_chevalley_check, build_pi, check_uniform, classify, family_by_size, family_chain,
    full_family, full_completeness_experiment, generated_family, hf_total_strategies,
    hunt_strategy, instantiate, interpret_type, occurrence_links, poly_project, refined_pi,
    second_order_curry, sub_game, table_closure, universe,
)
from arena.category import compose, copycat
from arena.games import GameError
from arena.strategies import Strategy, is_history_free
from arena.winning import All, Atom, RefinedGame, is_total, is_winning

B = boolean_game()


def ps(*texts):
    return tuple(parse_move(t) for t in texts)


def U3():
    return universe(("0", "1"), 3)


def test_family_sizes_by_hand():
    # 8 maximal plays in the depth-3 binary universe
    assert len(generated_family(max_generators=1)) == 1 + 8
    assert len(generated_family(max_generators=2)) == 1 + 8 + 28
    # sub-trees of the full binary tree of depth 3: (1 + (1 + (1 + 1)²)²)² = 676
    assert len(full_family()) == 676
    chain = family_chain()
    assert [len(f) for f in chain] == [9, 37, 676]
    assert family_by_size(2) == chain[1]
    with pytest.raises(ValueError):
        family_by_size(4)


def test_family_validation():
    with pytest.raises(EmptyFamily):
        InstanceFamily((), U3())
    with pytest.raises(GameError):
        InstanceFamily((B,), U3())


def test_variable_type_parsing():
    F = VariableType.of("forall X. X -o X")
    assert F.vars == ("X",) and F.arity == 1
    G = VariableType.of("X -o Y")
    assert G.vars == ("X", "Y")
    with pytest.raises(ArityMismatch):
        interpret_type(G, (B,))


def test_interpret_type_substitutes():
    assert interpret_type("forall X. X -o X", (B,)) == lolli(B, B)
    assert interpret_type("forall X. X * I", (B,)) == tensor(B, I)


def test_pi_over_singleton_is_the_instance():
    U = U3()
    A = sub_game(U, [ps("inr.0", "inl.1", "inr.1")])
    fam = InstanceFamily((A,), U)
    Pi = build_pi("forall X. X -o X", fam)
    assert Pi.plays == lolli(A, A).plays


def test_pi_hides_a_choice_the_family_does_not_force():
    U = U3()
    a1 = sub_game(U, [ps("inr.0", "inl.0")])
    a2 = sub_game(U, [ps("inr.0", "inl.1")])
    Pi = build_pi("forall X. X", InstanceFamily((a1, a2), U))
    # after inr.0 either answer would rule out a live instance
    assert Pi.plays == {(), ps("inr.0")}


def test_pi_follows_what_opponent_revealed():
    U = U3()
    a1 = sub_game(U, [ps("inr.0", "inl.0")])
    a2 = sub_game(U, [ps("inr.1", "inl.0")])
    Pi = build_pi("forall X. X", InstanceFamily((a1, a2), U))
    assert Pi.plays == {(), ps("inr.0"), ps("inr.0", "inl.0"), ps("inr.1"), ps("inr.1", "inl.0")}


def test_instance_not_in_family():
    Pi = build_pi("forall X. X -o X", family_by_size(1))
    with pytest.raises(InstanceNotInFamily):
        Pi.instance(B)


def test_poly_project_restricts_identity():
    fam = family_by_size(1)
    Pi = build_pi("forall X. X -o X", fam)
    A = fam.games[-1]
    cc = table_closure(Pi, hf_total_strategies(Pi)[0])
    from arena.category import as_point
    proj = compose(as_point(cc), poly_project(Pi, A))
    inst, verdict = instantiate(cc, Pi.instance(A))
    assert verdict
    assert proj.strategy.relabelled(Pi.instance(A), {("R",): ()}) == inst


def test_occurrence_links():
    F = VariableType.of("forall X. X -o (X -o X)")
    assert sorted(occurrence_links(F)) == sorted([((("L",), ("R", "R")),), ((("R", "L"), ("R", "R")),)])
    G = VariableType.of("forall X. X * X -o X * X")
    assert len(occurrence_links(G)) == 2


def test_census_small_family():
    c = full_completeness_experiment("forall X. X -o (X -o X)", family_by_size(1))
    assert c.count == 2
    assert all(links is not None for _, links in c.survivors)
    assert all(is_history_free(s) for s, _ in c.survivors)


def test_identity_census():
    c = full_completeness_experiment("forall X. X -o X", family_by_size(1))
    assert c.count == 1
    assert c.survivors[0][1] == ((("L",), ("R",)),)


def test_unit_census_is_empty_strategy():
    # no X occurrence: Π(I) has one strategy
    c = full_completeness_experiment("forall X. I -o I", family_by_size(1))
    assert c.count == 1


def test_hunt_strategy_properties():
    fam = family_by_size(1)
    Pi = build_pi("forall X. X -o (X -o X)", fam)
    h = hunt_strategy(Pi)
    assert is_total(h).status == "total"
    assert is_winning(h, RefinedGame(Pi, All()))
    assert not is_history_free(h)
    assert classify(h, Pi.F) is None
    assert check_uniform(h, [Pi.instance(A) for A in fam.games])
    with pytest.raises(GameError):
        hunt_strategy(build_pi("forall X. X -o X", fam))


def test_non_hf_count_exceeds_hf():
    c = full_completeness_experiment("forall X. X -o (X -o X)", family_by_size(1), history_free=False)
    assert c.total_count >= 3 and c.hunt is not None


def test_second_order_curry_checks_uniformity():
    fam = family_by_size(1)
    U = fam.universe
    Pi = build_pi("forall X. X -o X", fam)
    from arena.category import Morphism
    good = Morphism(I, lolli(U, U), copycat(lolli(I, lolli(U, U)), [(("R", "L"), ("R", "R"))]))
    lam = second_order_curry(good, Pi)
    assert lam.cod == Pi
    # answer every opening with a fixed left move: not uniform once the
    # family contains an instance lacking that move
    bad_plays = [ps("R.R:inr.0", "R.L:inr.1")]
    bad = Morphism(I, lolli(U, U), Strategy.closure(lolli(I, lolli(U, U)), bad_plays))
    with pytest.raises(NotUniform):
        second_order_curry(bad, Pi)


def test_beck_chevalley_smoke():
    assert beck_chevalley_check("X -o Y", "X", "Y", "I", family_by_size(1))


def test_refined_pi_spec():
    S = stream_game(2)
    R = refined_pi("forall X. X", [(S, Atom("loop-contains", "0"))], universe_game_=S)
    assert R.game.plays == S.plays
