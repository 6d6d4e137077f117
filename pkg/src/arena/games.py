"""Games as labelled, prefix-closed trees of alternating plays.

A game is a move alphabet with O/P polarities plus a membership test for
plays.  Atomic games either list their plays explicitly (``FlatGame``) or
are depth-truncations of an infinite rule (``stream_game``,
``universe_game``).  Compound games (``tensor``, ``lolli``, ``with_``)
decide membership by restriction to their components, so their play sets
are only materialised when something asks for ``game.plays``.

Disjoint unions are realised by prefixing move paths with ``"L"``/``"R"``.
"""

from __future__ import annotations

import enum
import functools
from typing import Callable, Iterable, Iterator, NamedTuple, Sequence


class Polarity(enum.Enum):
    O = "O"
    P = "P"

    def flip(self) -> "Polarity":
        return Polarity.P if self is Polarity.O else Polarity.O

    def __str__(self):
        return self.value


O, P = Polarity.O, Polarity.P


class Move(NamedTuple):
    name: str
    path: tuple = ()

    def tagged(self, *prefix: str) -> "Move":
        return Move(self.name, tuple(prefix) + self.path)

    def sort_key(self):
        return (self.path, self.name)

    def __str__(self):
        if not self.path:
            return self.name
        return ".".join(self.path) + ":" + self.name


Play = tuple  # tuple[Move, ...]


def parse_move(text: str) -> Move:
    """Inverse of ``str(Move)``: ``"L.R:tt"`` -> Move("tt", ("L", "R"))."""
    if ":" in text:
        path, name = text.rsplit(":", 1)
        return Move(name, tuple(p for p in path.split(".") if p))
    return Move(text, ())


def show_play(s: Sequence[Move]) -> str:
    return " ".join(str(m) for m in s) if s else "ε"


class GameError(Exception):
    pass


class NonAlternating(GameError):
    def __init__(self, play, index):
        super().__init__(f"play {show_play(play)} breaks alternation at move {index}")
        self.play, self.index = play, index


class UnknownMove(GameError):
    def __init__(self, move):
        super().__init__(f"unknown move {move}")
        self.move = move


class EmptyAlphabet(GameError):
    pass


class PlayNotInGame(GameError):
    def __init__(self, play, game=None):
        super().__init__(f"{show_play(play)} is not a play of {game}")
        self.play = play


def expected_polarity(index: int) -> Polarity:
    """Polarity required of the move at 0-based ``index`` (O opens)."""
    return O if index % 2 == 0 else P


def restrict(s: Sequence[Move], prefix: Sequence[str]) -> Play:
    """Moves of ``s`` whose path starts with ``prefix``, with the prefix stripped."""
    prefix = tuple(prefix)
    k = len(prefix)
    return tuple(Move(m.name, m.path[k:]) for m in s if m.path[:k] == prefix)


def relabel(s: Sequence[Move], mapping: dict) -> Play:
    """Apply a prefix-rewriting map to every move of ``s``.

    Moves whose path matches no key are dropped, so ``relabel`` doubles as a
    restriction to several components at once.  Longest key wins.
    """
    keys = sorted(mapping, key=len, reverse=True)
    out = []
    for m in s:
        for k in keys:
            if m.path[: len(k)] == k:
                out.append(Move(m.name, tuple(mapping[k]) + m.path[len(k):]))
                break
    return tuple(out)


def prefixes(s: Sequence) -> Iterator[tuple]:
    for i in range(len(s) + 1):
        yield tuple(s[:i])


class Game:
    """Base class.  Subclasses provide ``moves``, ``depth_bound``, ``key`` and
    ``_contains``; ``_contains_full`` defaults to ``_contains`` for games that
    are not truncations of something larger."""

    truncated = False
    name = None

    def __init__(self, moves: dict, depth_bound: int, key):
        self.moves = dict(sorted(moves.items(), key=lambda kv: kv[0].sort_key()))
        self.depth_bound = depth_bound
        self.key = key
        self._hash = hash(key)
        self._memo = {}
        self._memo_full = {}
        self._ext = {}
        self._plays = None
        by_pol = {O: [], P: []}
        for m, p in self.moves.items():
            by_pol[p].append(m)
        self._by_polarity = by_pol

    def __eq__(self, other):
        return isinstance(other, Game) and self.key == other.key

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return self.name or f"<{type(self).__name__}>"

    def polarity(self, m: Move) -> Polarity:
        try:
            return self.moves[m]
        except KeyError:
            raise UnknownMove(m) from None

    def moves_of(self, pol: Polarity) -> list:
        return self._by_polarity[pol]

    def contains(self, s: Sequence[Move]) -> bool:
        s = tuple(s)
        r = self._memo.get(s)
        if r is None:
            r = len(s) <= self.depth_bound and self._contains(s)
            self._memo[s] = r
        return r

    def contains_full(self, s: Sequence[Move]) -> bool:
        """Membership in the untruncated game this one approximates."""
        if not self.truncated:
            return self.contains(s)
        s = tuple(s)
        r = self._memo_full.get(s)
        if r is None:
            r = self._contains_full(s)
            self._memo_full[s] = r
        return r

    def _contains(self, s: Play) -> bool:
        raise NotImplementedError

    def _contains_full(self, s: Play) -> bool:
        return self._contains(s)

    def alternates(self, s: Sequence[Move]) -> bool:
        moves = self.moves
        for i, m in enumerate(s):
            if moves.get(m) is not expected_polarity(i):
                return False
        return True

    def extensions(self, s: Sequence[Move]) -> list:
        """Moves m with s·m a play, in canonical order."""
        s = tuple(s)
        r = self._ext.get(s)
        if r is None:
            want = expected_polarity(len(s))
            r = [m for m in self._by_polarity[want] if self.contains(s + (m,))]
            self._ext[s] = r
        return r

    def is_frontier(self, s: Sequence[Move]) -> bool:
        """True when the truncation cut off a legal continuation of ``s``."""
        if not self.truncated:
            return False
        s = tuple(s)
        want = expected_polarity(len(s))
        return any(
            self.contains_full(s + (m,)) and not self.contains(s + (m,))
            for m in self._by_polarity[want]
        )

    @property
    def plays(self) -> frozenset:
        if self._plays is None:
            out = []
            stack = [()]
            while stack:
                s = stack.pop()
                out.append(s)
                stack.extend(s + (m,) for m in self.extensions(s))
            self._plays = frozenset(out)
        return self._plays

    def iter_plays(self, max_len=None) -> Iterator[Play]:
        """Depth-first, canonical order; optionally cut at ``max_len``."""
        stack = [()]
        while stack:
            s = stack.pop()
            yield s
            if max_len is not None and len(s) >= max_len:
                continue
            stack.extend(reversed([s + (m,) for m in self.extensions(s)]))

    def check_play(self, s: Sequence[Move]) -> None:
        for m in s:
            if m not in self.moves:
                raise UnknownMove(m)
        for i, m in enumerate(s):
            if self.moves[m] is not expected_polarity(i):
                raise NonAlternating(tuple(s), i)
        if not self.contains(s):
            raise PlayNotInGame(tuple(s), self)


class FlatGame(Game):
    def __init__(self, moves: dict, plays: Iterable[Play], name=None):
        plays = frozenset(tuple(p) for p in plays)
        depth = max((len(p) for p in plays), default=0)
        super().__init__(moves, depth, ("flat", frozenset(moves.items()), plays))
        self._plays = plays
        self.name = name

    def _contains(self, s):
        return s in self._plays


def make_flat_game(plays: Iterable[Sequence], polarity_of: dict, name=None) -> FlatGame:
    """Prefix closure of ``plays`` as an explicit game.

    Plays may be given as sequences of ``Move`` or of plain strings.
    """
    pol = {}
    for m, p in polarity_of.items():
        m = m if isinstance(m, Move) else Move(m)
        pol[m] = p if isinstance(p, Polarity) else Polarity(p)
    closed = set()
    for s in plays:
        s = tuple(m if isinstance(m, Move) else Move(m) for m in s)
        for i, m in enumerate(s):
            if m not in pol:
                raise UnknownMove(m)
            if pol[m] is not expected_polarity(i):
                raise NonAlternating(s, i)
        closed.update(prefixes(s))
    closed.add(())
    return FlatGame(pol, closed, name=name)


def empty_game() -> FlatGame:
    return I


I = FlatGame({}, [()], name="I")


def boolean_game() -> FlatGame:
    return make_flat_game([("*", "tt"), ("*", "ff")], {"*": O, "tt": P, "ff": P}, name="B")


class RuleGame(Game):
    """Depth-``depth`` truncation of an infinite game given by a rule."""

    truncated = True

    def __init__(self, moves, depth, rule: Callable[[Play], bool], key, name):
        if depth < 0:
            raise GameError("depth must be non-negative")
        super().__init__(moves, depth, key)
        self._rule = rule
        self.name = name

    def _contains(self, s):
        return self._rule(s)

    def _contains_full(self, s):
        return self._rule(s)


STAR, BIT0, BIT1 = Move("*"), Move("0"), Move("1")


def _stream_rule(s):
    for i, m in enumerate(s):
        if i % 2 == 0:
            if m != STAR:
                return False
        elif m not in (BIT0, BIT1):
            return False
    return True


@functools.lru_cache(maxsize=None)
def stream_game(depth: int) -> RuleGame:
    moves = {STAR: O, BIT0: P, BIT1: P}
    return RuleGame(moves, depth, _stream_rule, ("stream", depth), f"Str{depth}")


def universe_moves(tokens: Iterable[str]) -> dict:
    """M_U = V + V with the left copy labelled P and the right copy O."""
    moves = {}
    for v in tokens:
        moves[Move(f"inl.{v}")] = P
        moves[Move(f"inr.{v}")] = O
    return moves


@functools.lru_cache(maxsize=None)
def universe_game(tokens: tuple, depth: int) -> RuleGame:
    tokens = tuple(sorted(tokens))
    if not tokens:
        raise EmptyAlphabet("the universe needs at least one token")
    moves = universe_moves(tokens)

    def rule(s):
        for i, m in enumerate(s):
            if moves.get(m) is not expected_polarity(i):
                return False
        return True

    return RuleGame(moves, depth, rule, ("universe", tokens, depth), f"U{{{','.join(tokens)}}}{depth}")


class BinaryGame(Game):
    """Shared machinery for games whose moves are L/R-tagged component moves."""

    kind = None
    symbol = "?"

    def __init__(self, left: Game, right: Game, cap=None):
        self.left, self.right = left, right
        self.cap = cap
        moves = {}
        for m, p in left.moves.items():
            moves[m.tagged("L")] = self._left_polarity(p)
        for m, p in right.moves.items():
            moves[m.tagged("R")] = p
        bound = self._bound(left.depth_bound, right.depth_bound)
        if cap is not None:
            bound = min(bound, cap)
        super().__init__(moves, bound, (self.kind, left.key, right.key, cap))
        self.truncated = left.truncated or right.truncated or cap is not None

    def _left_polarity(self, p):
        return p

    def _bound(self, a, b):
        return a + b

    def __repr__(self):
        cap = f"[≤{self.cap}]" if self.cap is not None else ""
        return f"({self.left!r} {self.symbol} {self.right!r}){cap}"

    def split(self, s):
        return restrict(s, ("L",)), restrict(s, ("R",))

    def _contains(self, s):
        if not self.alternates(s):
            return False
        a, b = self.split(s)
        return self.left.contains(a) and self.right.contains(b)

    def _contains_full(self, s):
        if not self.alternates(s):
            return False
        a, b = self.split(s)
        return self.left.contains_full(a) and self.right.contains_full(b)


class TensorGame(BinaryGame):
    kind = "tensor"
    symbol = "⊗"


class LolliGame(BinaryGame):
    kind = "lolli"
    symbol = "⊸"

    def _left_polarity(self, p):
        return p.flip()


class WithGame(BinaryGame):
    kind = "with"
    symbol = "&"

    def _bound(self, a, b):
        return max(a, b)

    def _one_side(self, s):
        tags = {m.path[0] for m in s}
        return len(tags) <= 1

    def _contains(self, s):
        if not self._one_side(s) or not self.alternates(s):
            return False
        a, b = self.split(s)
        return self.left.contains(a) and self.right.contains(b)

    def _contains_full(self, s):
        if not self._one_side(s) or not self.alternates(s):
            return False
        a, b = self.split(s)
        return self.left.contains_full(a) and self.right.contains_full(b)


@functools.lru_cache(maxsize=4096)
def tensor(A: Game, B: Game, cap=None) -> TensorGame:
    return TensorGame(A, B, cap)


@functools.lru_cache(maxsize=4096)
def lolli(A: Game, B: Game, cap=None) -> LolliGame:
    return LolliGame(A, B, cap)


@functools.lru_cache(maxsize=4096)
def with_(A: Game, B: Game, cap=None) -> WithGame:
    return WithGame(A, B, cap)


def leq(A: Game, B: Game) -> bool:
    """The order A ⊴ B, decided over A's (finite) play set."""
    for m, p in A.moves.items():
        if B.moves.get(m) is not p:
            return False
    return all(B.contains(s) for s in A.plays)


def switching_states(G: BinaryGame, s: Sequence[Move]):
    """State trace ⌜t⌝ = (parity(t↾A), parity(t↾B)) over prefixes t of ``s``.

    Returns ``(trace, violation)`` where ``violation`` is the index of the
    second move of the first illegal component switch, or ``None``.
    Only alternation and move membership are required of ``s``; a play that
    switches illegally cannot satisfy both component restrictions anyway.
    """
    if not isinstance(G, (TensorGame, LolliGame)):
        raise GameError("switching states are defined for ⊗ and ⊸")
    s = tuple(s)
    for m in s:
        if m not in G.moves:
            raise PlayNotInGame(s, G)
    if not G.alternates(s):
        raise PlayNotInGame(s, G)
    flip_left = isinstance(G, LolliGame)

    def label(n, flip):
        p = O if n % 2 == 0 else P
        return p.flip() if flip else p

    trace = []
    na = nb = 0
    trace.append((label(na, flip_left), label(nb, False)))
    violation = None
    for i, m in enumerate(s):
        if m.path[0] == "L":
            na += 1
        else:
            nb += 1
        trace.append((label(na, flip_left), label(nb, False)))
        if i and violation is None and s[i - 1].path[0] != m.path[0]:
            first, second = G.moves[s[i - 1]], G.moves[m]
            ok = (first, second) == ((P, O) if not flip_left else (O, P))
            if not ok:
                violation = i
    return trace, violation
