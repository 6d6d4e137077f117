"""Deterministic strategies: even-length, prefix-closed, single-valued play sets."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .games import Game, Move, relabel, show_play


class StrategyError(Exception):
    pass


class InvalidStrategy(StrategyError):
    def __init__(self, verdict):
        super().__init__(str(verdict))
        self.verdict = verdict


class ContextNotInStrategy(StrategyError):
    pass


class BudgetExceeded(StrategyError):
    def __init__(self, limit):
        super().__init__(f"more than {limit} strategies")
        self.limit = limit


@dataclass(frozen=True)
class Verdict:
    ok: bool
    condition: Optional[str] = None
    witness: tuple = ()

    def __bool__(self):
        return self.ok

    def __str__(self):
        if self.ok:
            return "OK"
        return f"violates {self.condition}: " + ", ".join(
            show_play(w) if isinstance(w, tuple) else str(w) for w in self.witness)


OK = Verdict(True)


def check_strategy(candidate: Iterable, G: Game) -> Verdict:
    """Check (s1) ε ∈ σ, (s2) even-prefix closure, (s3) determinacy, σ ⊆ P_G^even."""
    sigma = frozenset(tuple(s) for s in candidate)
    for s in sorted(sigma, key=len):
        if len(s) % 2:
            return Verdict(False, "even-length", (s,))
        if not G.contains(s):
            return Verdict(False, "membership", (s,))
    if () not in sigma:
        return Verdict(False, "s1", ((),))
    for s in sigma:
        if s and s[:-2] not in sigma:
            return Verdict(False, "s2", (s, s[:-2]))
    seen = {}
    for s in sorted(sigma, key=lambda s: (len(s), [m.sort_key() for m in s])):
        if not s:
            continue
        ctx, b = s[:-1], s[-1]
        other = seen.setdefault(ctx, b)
        if other != b:
            return Verdict(False, "s3", (ctx, other, b))
    return OK


@dataclass(frozen=True, eq=False)
class Strategy:
    game: Game
    plays: frozenset
    divergences: tuple = field(default=(), compare=False)

    def __post_init__(self):
        # index odd context -> response
        resp = {}
        for s in self.plays:
            if s:
                resp[s[:-1]] = s[-1]
        object.__setattr__(self, "_resp", resp)

    @classmethod
    def from_plays(cls, game, plays, check=True, divergences=()):
        plays = frozenset(tuple(s) for s in plays)
        if check:
            v = check_strategy(plays, game)
            if not v:
                raise InvalidStrategy(v)
        return cls(game, plays, tuple(divergences))

    @classmethod
    def closure(cls, game, maximal, check=True):
        """Strategy generated by the even prefixes of the given plays."""
        plays = {()}
        for s in maximal:
            s = tuple(s)
            plays.update(s[:i] for i in range(0, len(s) + 1, 2))
        return cls.from_plays(game, plays, check=check)

    def __eq__(self, other):
        return (isinstance(other, Strategy) and self.game == other.game
                and self.plays == other.plays)

    def __hash__(self):
        return hash((self.game, self.plays))

    def __contains__(self, s):
        return tuple(s) in self.plays

    def __len__(self):
        return len(self.plays)

    def __repr__(self):
        return f"Strategy({self.game!r}, {{{'; '.join(show_play(s) for s in self.maximal())}}})"

    def response(self, sa) -> Optional[Move]:
        return self._resp.get(tuple(sa))

    def domain(self) -> set:
        """dom(σ): the odd positions at which σ answers."""
        return set(self._resp)

    def odd_positions(self):
        """Every sa ∈ P_G with s ∈ σ, answered or not."""
        for s in self.plays:
            for a in self.game.extensions(s):
                yield s + (a,)

    def maximal(self) -> list:
        out = [s for s in self.plays if not any(s + (a,) in self._resp for a in self.game.extensions(s))]
        return sorted(out, key=lambda s: [m.sort_key() for m in s])

    def relabelled(self, game, mapping) -> "Strategy":
        return Strategy.from_plays(game, (relabel(s, mapping) for s in self.plays))

    def with_divergences(self, divs) -> "Strategy":
        return Strategy(self.game, self.plays, tuple(divs))


def respond(sigma: Strategy, sa) -> Optional[Move]:
    """The unique b with sab ∈ σ, or ``None`` when σ has no response."""
    sa = tuple(sa)
    if not sa or sa[:-1] not in sigma.plays:
        raise ContextNotInStrategy(show_play(sa[:-1]))
    return sigma.response(sa)


def bottom(game: Game) -> Strategy:
    return Strategy(game, frozenset({()}))


@dataclass(frozen=True)
class HistoryFreeTable:
    game: Game
    response: dict

    def strategy(self) -> Strategy:
        return table_strategy(self.game, self.response)


def table_strategy(game: Game, table: dict, check=True) -> Strategy:
    """Close a move→move table under legal play."""
    plays = [()]
    frontier = [()]
    while frontier:
        nxt = []
        for s in frontier:
            for a in game.extensions(s):
                b = table.get(a)
                if b is not None and game.contains(s + (a, b)):
                    nxt.append(s + (a, b))
        plays.extend(nxt)
        frontier = nxt
    return Strategy.from_plays(game, plays, check=check)


def history_free_violation(sigma: Strategy):
    """First witness against history-freeness, or ``None``.

    Clause 2 is read relative to the game: tab is only demanded when it is a
    play, which is how truncated games keep copy-cat history-free at their
    frontier.
    """
    table = {}
    for s in sorted(sigma.plays, key=len):
        if not s:
            continue
        a, b = s[-2], s[-1]
        c = table.setdefault(a, b)
        if c != b:
            return ("clause1", a, b, c)
    g = sigma.game
    for t in sigma.plays:
        for a in g.extensions(t):
            b = table.get(a)
            if b is None:
                continue
            if g.contains(t + (a, b)) and t + (a, b) not in sigma.plays:
                return ("clause2", t, a, b)
            if not g.contains(t + (a, b)) and not g.is_frontier(t + (a,)):
                return ("clause2", t, a, b)
    return None


def is_history_free(sigma: Strategy) -> bool:
    return history_free_violation(sigma) is None


class NotHistoryFree(StrategyError):
    pass


def to_table(sigma: Strategy) -> HistoryFreeTable:
    w = history_free_violation(sigma)
    if w is not None:
        raise NotHistoryFree(w)
    table = {}
    for s in sigma.plays:
        if s:
            table[s[-2]] = s[-1]
    return HistoryFreeTable(sigma.game, dict(sorted(table.items(), key=lambda kv: kv[0].sort_key())))


def _subtree_options(game: Game, s, memo, limit):
    """All strategy fragments rooted at even position ``s`` (each a frozenset
    of plays strictly below ``s``)."""
    if s in memo:
        return memo[s]
    per_move = []
    for a in game.extensions(s):
        sa = s + (a,)
        opts = [frozenset()]
        for b in game.extensions(sa):
            sab = sa + (b,)
            for sub in _subtree_options(game, sab, memo, limit):
                opts.append(sub | {sab})
        per_move.append(opts)
    total = 1
    for opts in per_move:
        total *= len(opts)
        if total > limit:
            raise BudgetExceeded(limit)
    result = [frozenset().union(*combo) for combo in itertools.product(*per_move)]
    memo[s] = result
    return result


def enumerate_strategies(G: Game, history_free_only=False, limit=10**6) -> list:
    """Every strategy on the finite game ``G``, canonically ordered."""
    frags = _subtree_options(G, (), {}, limit)
    out = [Strategy(G, frag | {()}) for frag in frags]
    if history_free_only:
        out = [s for s in out if is_history_free(s)]
    return out


def count_strategies(G: Game, total_only=False) -> int:
    """Number of strategies on ``G`` without materialising them."""
    memo = {}

    def at_even(s):
        if s in memo:
            return memo[s]
        n = 1
        for a in G.extensions(s):
            sa = s + (a,)
            if total_only:
                # a bare frontier position is not held against totality
                k = 1 if (not G.extensions(sa) and G.is_frontier(sa)) else 0
            else:
                k = 1
            for b in G.extensions(sa):
                k += at_even(sa + (b,))
            n *= k
        memo[s] = n
        return n

    return at_even(())


def strategy_order_leq(sigma: Strategy, tau: Strategy) -> bool:
    """Inclusion order on strategies over a common game."""
    return sigma.game == tau.game and sigma.plays <= tau.plays
