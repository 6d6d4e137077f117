#!/usr/bin/env python3
"""Compose two total strategies whose interaction never leaves the hidden stream."""
from arena.category import Morphism
from arena.games import I, boolean_game, lolli, parse_move, stream_game
from arena.strategies import table_strategy
from arena.winning import All, LolliW, RefinedGame, is_total, is_winning, winning_compose


def main():
    mv = parse_move
    S, B = stream_game(4), boolean_game()
    sigma = Morphism(I, S, table_strategy(lolli(I, S), {mv("R:*"): mv("R:0")}))
    tau = Morphism(S, B, table_strategy(lolli(S, B), {
        mv("R:*"): mv("L:*"), mv("L:0"): mv("L:*"), mv("L:1"): mv("L:*")}))
    for name, m in (("σ", sigma), ("τ", tau)):
        win = is_winning(m.strategy, RefinedGame(m.strategy.game, LolliW(All(), All())))
        print(f"{name}: {is_total(m.strategy).status}, {win.status}")
    v = winning_compose(sigma, tau, All(), All(), All())
    print(f"composite: {v.status}")
    if v.lasso is not None:
        print(f"hidden dialogue: {v.lasso}")


if __name__ == "__main__":
    main()
