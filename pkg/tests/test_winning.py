import pytest

from arena.category import Morphism, identity
from arena.games import I, boolean_game, lolli, parse_move, stream_game, tensor
from arena.strategies import Strategy, bottom, table_strategy
from arena.winning import (
    All, Atom, InvalidLasso, Lasso, LolliW, MeetW, Nothing, PreconditionFailed, RefinedGame,
    TensorW, WithW, game_lassos, is_total, is_winning, lasso_valid, lasso_wins, project,
    spec_from_json, spec_leq, strategy_lassos, winning_compose,
)

B = boolean_game()


def mv(t):
    return parse_move(t)


def ps(*texts):
    return tuple(mv(t) for t in texts)


def stream_copycat(d):
    S = stream_game(d)
    t = {mv("R:*"): mv("L:*"), mv("L:0"): mv("R:0"), mv("L:1"): mv("R:1")}
    return Morphism(S, S, table_strategy(lolli(S, S), t))


def test_lasso_normalisation():
    l = Lasso(ps("*", "0"), ps("*", "0", "*", "0"))
    assert l.loop == ps("*", "0")
    assert l.canonical() == Lasso((), ps("*", "0"))
    assert l.unroll(5) == ps("*", "0", "*", "0", "*")
    with pytest.raises(InvalidLasso):
        Lasso((), ())


def test_lasso_validity():
    S = stream_game(2)
    assert lasso_valid(S, Lasso((), ps("*", "0")))
    assert not lasso_valid(S, Lasso((), ps("0", "*")))
    with pytest.raises(InvalidLasso):
        lasso_wins(All(), Lasso((), ps("0", "*")), S)


def test_projection_finite_or_lasso():
    l = Lasso(ps("R:*", "L:*"), ps("L:0", "L:*"))
    assert project(l, ("R",)) == ps("*")
    assert project(l, ("L",)) == Lasso(ps("*"), ps("0", "*"))


def test_atoms_and_connectives():
    l = Lasso((), ps("*", "0"))
    assert Atom("loop-contains", "0").wins(l)
    assert not Atom("loop-avoids", "0").wins(l)
    assert Atom("stem-at-most", "0").wins(l)
    assert not Nothing().wins(l)
    assert MeetW((All(), Atom("loop-contains", "1"))).wins(l) is False
    # the right component is finite: the left one must lose for ⊸ to win
    m = Lasso(ps("R:*", "L:*"), ps("L:0", "L:*"))
    assert not LolliW(All(), All()).wins(m)
    assert LolliW(Nothing(), All()).wins(m)
    assert TensorW(All(), Nothing()).wins(Lasso((), ps("L:*", "L:0")))
    w = Lasso((), ps("R:*", "R:0"))
    assert WithW(Nothing(), All()).wins(w) and not WithW(All(), Nothing()).wins(w)


def test_spec_json_roundtrip():
    spec = MeetW((LolliW(Atom("loop-contains", "0"), All()), TensorW(Nothing(), All())))
    assert spec_from_json(spec.to_json()) == spec
    with pytest.raises(ValueError):
        spec_from_json({"kind": "atom", "name": "no-such-atom"})
    with pytest.raises(ValueError):
        spec_from_json({"kind": "sometimes"})


def test_totality():
    assert is_total(Strategy.closure(B, [ps("*", "tt")]))
    v = is_total(bottom(B))
    assert v.status == "not-total" and v.witness == ps("*")
    # copy-cat on a truncated stream: answered through its table past the bound
    assert is_total(stream_copycat(4).strategy).status == "total"


def test_totality_inconclusive_at_a_bare_frontier():
    S = stream_game(3)  # *0* : the last O-move has no answer inside the bound
    sigma = table_strategy(S, {mv("*"): mv("0")})
    assert is_total(sigma).status in ("total", "inconclusive")


def test_strategy_lassos_of_copycat():
    lassos, _ = strategy_lassos(stream_copycat(4).strategy, 8)
    assert Lasso((), ps("R:*", "L:*", "L:0", "R:0")) in lassos


def test_copycat_wins_against_matching_spec():
    cc = stream_copycat(4)
    for w in (All(), Atom("loop-contains", "0"), Atom("loop-avoids", "1")):
        assert is_winning(cc.strategy, RefinedGame(cc.strategy.game, LolliW(w, w)))


def test_copycat_loses_against_stronger_target():
    cc = stream_copycat(4)
    R = RefinedGame(cc.strategy.game, LolliW(All(), Atom("loop-contains", "0")))
    v = is_winning(cc.strategy, R)
    assert v.status == "not-winning" and v.reason == "losing infinite play"


def test_spec_leq():
    S = stream_game(4)
    assert spec_leq(Atom("loop-avoids", "1"), Atom("loop-contains", "0"), S)
    assert not spec_leq(All(), Atom("loop-contains", "0"), S)
    assert spec_leq(Nothing(), All(), S)


def test_game_lassos_count_on_stream():
    # loops of (*0), (*1), (*0*1) and their stem variants within the budget
    ls = game_lassos(stream_game(2), 4)
    assert Lasso((), ps("*", "0")) in ls and Lasso((), ps("*", "0", "*", "1")) in ls
    assert all(len(l.loop) % 2 == 0 for l in ls)


def chatter():
    S = stream_game(4)
    sigma = Morphism(I, S, table_strategy(lolli(I, S), {mv("R:*"): mv("R:0")}))
    tau = Morphism(S, B, table_strategy(lolli(S, B), {
        mv("R:*"): mv("L:*"), mv("L:0"): mv("L:*"), mv("L:1"): mv("L:*")}))
    return sigma, tau


def test_chattering_detected():
    sigma, tau = chatter()
    v = winning_compose(sigma, tau, All(), All(), All())
    assert v.status == "chattering"
    assert v.lasso == Lasso(ps("*"), ps("0", "*"))
    assert [p.status for p in v.preconditions] == ["winning", "not-winning"]


def test_strict_rejects_losing_inputs():
    sigma, tau = chatter()
    with pytest.raises(PreconditionFailed):
        winning_compose(sigma, tau, All(), All(), All(), strict=True)


def test_winning_composition_of_copycats():
    cc = stream_copycat(4)
    v = winning_compose(cc, cc, All(), All(), All(), strict=True)
    assert v.status == "winning"
    assert v.composite == cc


def test_finite_games_winning_means_total():
    f = identity(tensor(B, B))
    R = RefinedGame(f.strategy.game, LolliW(TensorW(All(), All()), TensorW(All(), All())))
    assert is_winning(f.strategy, R)
