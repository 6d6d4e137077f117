"""Totality, lasso-represented infinite plays, and winning conditions.

An infinite play is only ever handled as a lasso ``stem · loop^ω``.  The
projection of a lasso onto a component is either a finite play (the loop
never visits the component) or again a lasso, which is what makes the
⊗ and ⊸ winning conditions decidable here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

from .category import Morphism, compose_hiding, interaction_tree
from .games import Game, Move, lolli, restrict, show_play
from .strategies import Strategy, StrategyError, history_free_violation, to_table


class InvalidLasso(StrategyError):
    pass


class PreconditionFailed(StrategyError):
    pass


# -- totality -------------------------------------------------------------

@dataclass(frozen=True)
class TotalityVerdict:
    status: str  # "total" | "not-total" | "inconclusive"
    witness: tuple = ()

    def __bool__(self):
        return self.status == "total"


def is_total(sigma: Strategy) -> TotalityVerdict:
    """(tot): every reachable odd position has a response.

    Unanswered positions that sit on a truncation frontier are reported as
    inconclusive rather than held against σ, unless σ is history-free and
    its table answers there with a move the truncation cut off.
    """
    g = sigma.game
    inconclusive = None
    table = False
    for s in sorted(sigma.plays, key=lambda s: (len(s), [m.sort_key() for m in s])):
        for a in g.extensions(s):
            sa = s + (a,)
            if sigma.response(sa) is None:
                if g.truncated and g.is_frontier(sa):
                    if table is False:
                        table = _hf_table(sigma)
                    b = table.get(a) if table else None
                    if b is not None and g.contains_full(sa + (b,)):
                        continue
                if g.extensions(sa) or not g.is_frontier(sa):
                    return TotalityVerdict("not-total", sa)
                inconclusive = inconclusive or sa
    if inconclusive is not None:
        return TotalityVerdict("inconclusive", inconclusive)
    return TotalityVerdict("total")


# -- lassos ---------------------------------------------------------------

def _primitive_root(loop):
    n = len(loop)
    for k in range(1, n + 1):
        if n % k == 0 and loop[:k] * (n // k) == loop:
            return loop[:k]
    return loop


@dataclass(frozen=True)
class Lasso:
    stem: tuple
    loop: tuple

    def __post_init__(self):
        if not self.loop:
            raise InvalidLasso("empty loop")
        object.__setattr__(self, "stem", tuple(self.stem))
        object.__setattr__(self, "loop", _primitive_root(tuple(self.loop)))

    def unroll(self, n: int) -> tuple:
        """The first ``n`` moves."""
        out = list(self.stem)
        while len(out) < n:
            out.extend(self.loop)
        return tuple(out[:n])

    def rotated(self) -> "Lasso":
        """Same infinite word, stem extended by one loop move."""
        return Lasso(self.stem + self.loop[:1], self.loop[1:] + self.loop[:1])

    def unrolled(self) -> "Lasso":
        return Lasso(self.stem + self.loop, self.loop + self.loop)

    def canonical(self) -> "Lasso":
        """Shortest stem representing the same infinite word."""
        stem, loop = self.stem, self.loop
        while stem and stem[-1] == loop[-1]:
            stem, loop = stem[:-1], loop[-1:] + loop[:-1]
        return Lasso(stem, loop)

    def __str__(self):
        return f"{show_play(self.stem)} ({show_play(self.loop)})^ω"


def project(l: Lasso, prefix) -> "Lasso | tuple":
    """Projection onto a component: a lasso, or a finite play."""
    loop = restrict(l.loop, prefix)
    stem = restrict(l.stem, prefix)
    if not loop:
        return stem
    return Lasso(stem, loop)


def lasso_valid(game: Game, l: Lasso) -> bool:
    """Every finite prefix is a play of the untruncated game.

    Checked on stem·loop·loop; the games built here have rules that are
    stable under another pass of the loop.
    """
    if len(l.loop) % 2:
        n = len(l.stem) + 4 * len(l.loop)
    else:
        n = len(l.stem) + 2 * len(l.loop)
    w = l.unroll(n)
    return all(game.contains_full(w[:i]) for i in range(n + 1))


# -- winning conditions ---------------------------------------------------

ATOMS: dict = {}


def register_atom(name: str):
    def deco(fn: Callable):
        ATOMS[name] = fn
        return fn
    return deco


@register_atom("all-infinite")
def _atom_all(l, arg=None):
    return True


@register_atom("loop-contains")
def _atom_loop_contains(l, arg):
    return any(str(m) == arg for m in l.loop)


@register_atom("loop-avoids")
def _atom_loop_avoids(l, arg):
    return all(str(m) != arg for m in l.loop)


@register_atom("stem-at-most")
def _atom_short_stem(l, arg):
    return len(l.canonical().stem) <= int(arg)


class WinningSpec:
    def wins(self, l: Lasso) -> bool:
        raise NotImplementedError

    def to_json(self):
        raise NotImplementedError


@dataclass(frozen=True)
class All(WinningSpec):
    def wins(self, l):
        return True

    def to_json(self):
        return {"kind": "all"}


@dataclass(frozen=True)
class Nothing(WinningSpec):
    def wins(self, l):
        return False

    def to_json(self):
        return {"kind": "none"}


@dataclass(frozen=True)
class Atom(WinningSpec):
    name: str
    arg: Optional[str] = None

    def wins(self, l):
        return bool(ATOMS[self.name](l, self.arg))

    def to_json(self):
        return {"kind": "atom", "name": self.name, "arg": self.arg}


def _component_ok(spec, proj):
    # s↾X ∈ P_X ∪ W_X: a finite projection of a valid lasso is a play of X
    return True if isinstance(proj, tuple) else spec.wins(proj)


@dataclass(frozen=True)
class TensorW(WinningSpec):
    left: WinningSpec
    right: WinningSpec

    def wins(self, l):
        return (_component_ok(self.left, project(l, ("L",)))
                and _component_ok(self.right, project(l, ("R",))))

    def to_json(self):
        return {"kind": "tensor", "left": self.left.to_json(), "right": self.right.to_json()}


@dataclass(frozen=True)
class LolliW(WinningSpec):
    left: WinningSpec
    right: WinningSpec

    def wins(self, l):
        if not _component_ok(self.left, project(l, ("L",))):
            return True
        b = project(l, ("R",))
        return not isinstance(b, tuple) and self.right.wins(b)

    def to_json(self):
        return {"kind": "lolli", "left": self.left.to_json(), "right": self.right.to_json()}


@dataclass(frozen=True)
class WithW(WinningSpec):
    left: WinningSpec
    right: WinningSpec

    def wins(self, l):
        # an infinite play of A&B stays in the component it opened in
        side = l.unroll(1)[0].path[0]
        spec = self.left if side == "L" else self.right
        return spec.wins(project(l, (side,)))

    def to_json(self):
        return {"kind": "with", "left": self.left.to_json(), "right": self.right.to_json()}


@dataclass(frozen=True)
class MeetW(WinningSpec):
    parts: tuple

    def wins(self, l):
        return all(p.wins(l) for p in self.parts)

    def to_json(self):
        return {"kind": "meet", "parts": [p.to_json() for p in self.parts]}


def spec_from_json(d) -> WinningSpec:
    kind = d["kind"]
    if kind == "all":
        return All()
    if kind == "none":
        return Nothing()
    if kind == "atom":
        if d["name"] not in ATOMS:
            raise ValueError(f"unknown atom {d['name']!r}")
        return Atom(d["name"], d.get("arg"))
    if kind == "tensor":
        return TensorW(spec_from_json(d["left"]), spec_from_json(d["right"]))
    if kind == "lolli":
        return LolliW(spec_from_json(d["left"]), spec_from_json(d["right"]))
    if kind == "with":
        return WithW(spec_from_json(d["left"]), spec_from_json(d["right"]))
    if kind == "meet":
        return MeetW(tuple(spec_from_json(p) for p in d["parts"]))
    raise ValueError(f"unknown winning kind {kind!r}")


@dataclass(frozen=True)
class RefinedGame:
    game: Game
    W: WinningSpec = field(default_factory=All)


def refined_tensor(A: RefinedGame, B: RefinedGame) -> RefinedGame:
    from .games import tensor
    return RefinedGame(tensor(A.game, B.game), TensorW(A.W, B.W))


def refined_lolli(A: RefinedGame, B: RefinedGame) -> RefinedGame:
    return RefinedGame(lolli(A.game, B.game), LolliW(A.W, B.W))


def lasso_wins(W: WinningSpec, l: Lasso, game: Game = None) -> bool:
    if game is not None and not lasso_valid(game, l):
        raise InvalidLasso(str(l))
    return W.wins(l)


# -- strategy-consistent lassos ------------------------------------------

def _hf_table(sigma: Strategy):
    if history_free_violation(sigma) is None:
        return to_table(sigma).response
    return None


def _follows(sigma: Strategy, table, w) -> Optional[bool]:
    """Does the finite word w follow σ?  None when σ's explicit plays run out
    and no history-free table is available to continue them."""
    g = sigma.game
    for i in range(1, len(w) + 1, 2):
        if i >= len(w):
            break
        s = w[: i + 1]
        if len(s) <= g.depth_bound:
            if s not in sigma.plays:
                return False
        elif table is None:
            return None
        elif table.get(s[-2]) != s[-1]:
            return False
    return True


def strategy_lassos(sigma: Strategy, budget: int):
    """Lassos with |stem|+|loop| ≤ budget whose prefixes all follow σ.

    Returns ``(lassos, conclusive)``; ``conclusive`` is False when some
    candidate could only be checked up to the strategy's truncation.
    """
    g = sigma.game
    table = _hf_table(sigma)
    found = set()
    conclusive = True

    # candidate words: plays following σ (σ's plays plus pending O moves),
    # continued past the truncation with the table when available
    words = []
    stack = [()]
    while stack:
        w = stack.pop()
        words.append(w)
        if len(w) >= budget:
            continue
        if len(w) % 2 == 0:
            nxt = [m for m in g.moves_of(_pol(0)) if g.contains_full(w + (m,))]
        else:
            if len(w) + 1 <= g.depth_bound:
                b = sigma.response(w)
                nxt = [b] if b is not None else []
            elif table is not None:
                b = table.get(w[-1])
                nxt = [b] if b is not None and g.contains_full(w + (b,)) else []
            else:
                nxt = []
                conclusive = False
        stack.extend(w + (m,) for m in nxt)
    for w in words:
        for cut in range(0, len(w)):
            stem, loop = w[:cut], w[cut:]
            if not loop or len(loop) % 2:
                continue
            l = Lasso(stem, loop)
            if l in found or not lasso_valid(g, l):
                continue
            probe = l.unroll(len(l.stem) + 2 * len(l.loop))
            ok = _follows(sigma, table, probe)
            if ok is None:
                conclusive = False
            elif ok:
                found.add(l.canonical())
    return sorted(found, key=lambda l: (len(l.stem) + len(l.loop), str(l))), conclusive


def _pol(i):
    from .games import expected_polarity
    return expected_polarity(i)


@dataclass(frozen=True)
class WinningVerdict:
    status: str  # "winning" | "not-winning" | "inconclusive"
    reason: str = ""
    witness: object = None

    def __bool__(self):
        return self.status == "winning"


def is_winning(sigma: Strategy, R: RefinedGame, lasso_budget: int = 8) -> WinningVerdict:
    """σ ⊨ W: total, and every σ-consistent lasso within budget wins."""
    tot = is_total(sigma)
    if tot.status == "not-total":
        return WinningVerdict("not-winning", "not total", tot.witness)
    lassos, conclusive = strategy_lassos(sigma, lasso_budget)
    for l in lassos:
        if not R.W.wins(l):
            return WinningVerdict("not-winning", "losing infinite play", l)
    if tot.status == "inconclusive" or not conclusive:
        # a history-free σ whose table keeps answering past the bound is
        # total on the infinite game as far as lassos can tell
        if tot.status == "inconclusive" and _hf_table(sigma) is not None:
            return WinningVerdict("winning", "history-free, checked on lassos")
        return WinningVerdict("inconclusive", "truncation", tot.witness)
    return WinningVerdict("winning")


# -- winning composition --------------------------------------------------

@dataclass(frozen=True)
class CompositionVerdict:
    status: str  # "winning" | "chattering" | "inconclusive"
    composite: Morphism
    lasso: Optional[Lasso] = None  # the hidden B-dialogue, when chattering
    interaction: Optional[Lasso] = None
    preconditions: tuple = ()

    def __bool__(self):
        return self.status == "winning"


def _chatter_from(u, pab, pbc, sigma, tau, ts, tt, limit=10_000):
    """Run the hidden dialogue forward with the history-free tables; return
    the interaction lasso if it revisits a state inside B."""
    gs, gt = sigma.game, tau.game
    seen = {}
    word = list(u)
    while len(word) < len(u) + limit:
        if len(pab) % 2:  # σ to move
            b = ts.get(pab[-1])
            if b is None or b.path[0] != "R" or not gs.contains_full(pab + (b,)):
                return None
            state = ("σ", pab[-1])
            inner = b.path[1:]
            pab, pbc = pab + (b,), pbc + (Move(b.name, ("L",) + inner),)
        elif len(pbc) % 2:  # τ to move
            b = tt.get(pbc[-1])
            if b is None or b.path[0] != "L" or not gt.contains_full(pbc + (b,)):
                return None
            state = ("τ", pbc[-1])
            inner = b.path[1:]
            pbc, pab = pbc + (b,), pab + (Move(b.name, ("R",) + inner),)
        else:
            return None
        if state in seen:
            start = seen[state]
            return Lasso(tuple(word[:start]), tuple(word[start:]))
        seen[state] = len(word)
        word.append(Move(b.name, ("B",) + inner))
    return None


def winning_compose(sigma: Morphism, tau: Morphism, WA: WinningSpec, WB: WinningSpec,
                    WC: WinningSpec, lasso_budget=8, strict=False) -> CompositionVerdict:
    """σ;τ with a certificate that no infinite chattering happens in B.

    With ``strict`` the inputs must be winning on their refined games;
    otherwise their verdicts are recorded and the search runs regardless,
    which is how a total-but-not-winning pair is caught chattering.
    """
    pre = (is_winning(sigma.strategy, RefinedGame(sigma.strategy.game, LolliW(WA, WB)), lasso_budget),
           is_winning(tau.strategy, RefinedGame(tau.strategy.game, LolliW(WB, WC)), lasso_budget))
    if strict and not all(pre):
        raise PreconditionFailed(f"inputs not winning: {pre[0].status}, {pre[1].status}")
    comp = compose_hiding(sigma, tau)
    ts, tt = _hf_table(sigma.strategy), _hf_table(tau.strategy)
    if ts is not None and tt is not None:
        tree, _ = interaction_tree(sigma.strategy, tau.strategy)
        for u, pab, pbc in tree:
            if not u or u[-1].path[0] != "B":
                continue
            loopy = _chatter_from(u, pab, pbc, sigma.strategy, tau.strategy, ts, tt)
            if loopy is not None:
                b = project(loopy, ("B",))
                return CompositionVerdict("chattering", comp, b, loopy, pre)
        tot = is_total(comp.strategy)
        if tot.status == "not-total":
            return CompositionVerdict("inconclusive", comp, preconditions=pre)
        return CompositionVerdict("winning", comp, preconditions=pre)
    if comp.divergences:
        return CompositionVerdict("inconclusive", comp, preconditions=pre)
    tot = is_total(comp.strategy)
    status = "winning" if tot.status == "total" else "inconclusive"
    return CompositionVerdict(status, comp, preconditions=pre)


def spec_leq(V: WinningSpec, W: WinningSpec, game: Game, lasso_budget=8) -> bool:
    """V ≤ W as V{id}W: copy-cat is winning on (A,V) ⊸ (A,W)."""
    from .category import identity
    idA = identity(game).strategy
    return bool(is_winning(idA, RefinedGame(idA.game, LolliW(V, W)), lasso_budget))


def spec_extension(W: WinningSpec, lassos) -> frozenset:
    return frozenset(l for l in lassos if W.wins(l))


def game_lassos(game: Game, budget: int) -> list:
    """All valid lassos of ``game`` with |stem|+|loop| ≤ budget (canonical)."""
    out = set()
    words = [w for w in _all_words(game, budget)]
    for w in words:
        for cut in range(len(w)):
            stem, loop = w[:cut], w[cut:]
            if len(loop) % 2:
                continue
            l = Lasso(stem, loop)
            if lasso_valid(game, l):
                out.add(l.canonical())
    return sorted(out, key=lambda l: (len(l.stem) + len(l.loop), str(l)))


def _all_words(game, n):
    stack = [()]
    while stack:
        w = stack.pop()
        yield w
        if len(w) < n:
            pol = _pol(len(w))
            stack.extend(w + (m,) for m in game.moves_of(pol) if game.contains_full(w + (m,)))
