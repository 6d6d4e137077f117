"""Hypothesis generators shared by the unit tests."""

from hypothesis import strategies as st

from arena.games import O, P, make_flat_game

O_MOVES = ("a", "b")
P_MOVES = ("x", "y")


@st.composite
def small_games(draw, max_depth=4, max_plays=6):
    """A random finite game over two O- and two P-moves (moves may repeat)."""
    n = draw(st.integers(0, max_plays))
    plays = []
    for _ in range(n):
        k = draw(st.integers(1, max_depth))
        plays.append(tuple(draw(st.sampled_from(O_MOVES if i % 2 == 0 else P_MOVES))
                           for i in range(k)))
    used = {m for s in plays for m in s}
    pol = {m: (O if m in O_MOVES else P) for m in used}
    return make_flat_game(plays, pol)


@st.composite
def strategies_on(draw, game):
    """A random strategy on ``game``: walk down, keep a random response or none."""
    from arena.strategies import Strategy
    plays = {()}
    frontier = [()]
    while frontier:
        s = frontier.pop()
        for a in game.extensions(s):
            opts = game.extensions(s + (a,))
            if not opts:
                continue
            pick = draw(st.integers(-1, len(opts) - 1))
            if pick >= 0:
                t = s + (a, opts[pick])
                plays.add(t)
                frontier.append(t)
    return Strategy.from_plays(game, plays)
