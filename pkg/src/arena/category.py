"""The category of games: copy-cat identities, composition, ⊗, closure, &.

Morphisms A → B are strategies on A ⊸ B.  Composition is provided twice:
``compose_hiding`` builds σ‖τ and hides B, ``compose_pointwise`` runs the
four-way mutual recursion on pairs of plays.  The two are independent and
are checked against each other in the test-suite.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Sequence

from .games import (
    Game, Move, LolliGame, TensorGame, I, lolli, relabel, restrict, show_play,
    tensor, with_,
)
from .strategies import Strategy, StrategyError


class DomainMismatch(StrategyError):
    pass


class NotInComposite(StrategyError):
    pass


L, R = ("L",), ("R",)


@dataclass(frozen=True)
class Morphism:
    dom: Game
    cod: Game
    strategy: Strategy

    def __post_init__(self):
        if self.strategy.game != lolli(self.dom, self.cod):
            raise DomainMismatch(f"strategy lives on {self.strategy.game!r}, not {self.dom!r} ⊸ {self.cod!r}")

    @property
    def plays(self):
        return self.strategy.plays

    @property
    def divergences(self):
        return self.strategy.divergences

    def then(self, other: "Morphism", algo="hiding") -> "Morphism":
        return compose(self, other, algo)

    def __rshift__(self, other):
        return self.then(other)

    def __repr__(self):
        return f"Morphism({self.dom!r} → {self.cod!r}, {len(self.plays)} plays)"


def predicate_strategy(game: Game, keep, check=True) -> Strategy:
    """{s ∈ P_G^even | keep(t) for every even prefix t of s}, grown top-down."""
    plays = [()]
    frontier = [()]
    while frontier:
        nxt = []
        for s in frontier:
            for a in game.extensions(s):
                sa = s + (a,)
                for b in game.extensions(sa):
                    if keep(sa + (b,)):
                        nxt.append(sa + (b,))
        plays.extend(nxt)
        frontier = nxt
    return Strategy.from_plays(game, plays, check=check)


def copycat(game: Game, links: Sequence) -> Strategy:
    """Conjunction of copy-cats: every even prefix projects equally on each
    linked pair of components (paths)."""
    links = [(tuple(p), tuple(q)) for p, q in links]

    def keep(t):
        return all(restrict(t, p) == restrict(t, q) for p, q in links)

    return predicate_strategy(game, keep)


@functools.lru_cache(maxsize=4096)
def identity(A: Game) -> Morphism:
    return Morphism(A, A, copycat(lolli(A, A), [(L, R)]))


# -- composition ---------------------------------------------------------

_AB = {("A",): L, ("B",): R}
_BC = {("B",): L, ("C",): R}
_AC = {("A",): L, ("C",): R}


def _in_pref(sigma: Strategy, s) -> bool:
    """σ together with the O-extensions sa (s ∈ σ) the game allows."""
    if s in sigma.plays:
        return True
    return len(s) % 2 == 1 and s[:-1] in sigma.plays and sigma.game.contains(s)


def _split(m: Move):
    return m.path[0], Move(m.name, m.path[1:])


def interaction_tree(sigma: Strategy, tau: Strategy):
    """All interaction prefixes u over A+B+C whose projections stay inside
    σ and τ (allowing a pending, possibly unanswered, O-move), together with
    the positions where a strategy is stuck at a truncation frontier."""
    gs, gt = sigma.game, tau.game
    out = []
    stuck = []
    stack = [((), (), ())]
    while stack:
        u, pab, pbc = stack.pop()
        out.append((u, pab, pbc))
        grew = False
        cand = []
        for m in gs.extensions(pab):
            if m.path[0] == "L":
                cand.append(Move(m.name, ("A",) + m.path[1:]))
            else:
                cand.append(Move(m.name, ("B",) + m.path[1:]))
        for m in gt.extensions(pbc):
            if m.path[0] == "R":
                cand.append(Move(m.name, ("C",) + m.path[1:]))
        for m in cand:
            tag, inner = _split(m)
            nab, nbc = pab, pbc
            if tag in ("A", "B"):
                nab = pab + (inner.tagged("L" if tag == "A" else "R"),)
                if not _in_pref(sigma, nab):
                    continue
            if tag in ("B", "C"):
                nbc = pbc + (inner.tagged("L" if tag == "B" else "R"),)
                if not _in_pref(tau, nbc):
                    continue
            grew = True
            stack.append((u + (m,), nab, nbc))
        if not grew:
            if len(pab) % 2 and sigma.response(pab) is None and gs.is_frontier(pab):
                stuck.append(u)
            elif len(pbc) % 2 and tau.response(pbc) is None and gt.is_frontier(pbc):
                stuck.append(u)
    return out, stuck


@dataclass(frozen=True)
class PossibleDivergence:
    """A hidden dialogue that ran into a truncation bound."""
    interaction: tuple

    def __str__(self):
        return f"possible divergence after {show_play(self.interaction)}"


def _check_composable(sigma: Morphism, tau: Morphism):
    if sigma.cod != tau.dom:
        raise DomainMismatch(f"{sigma.cod!r} ≠ {tau.dom!r}")


def interactions(sigma: Morphism, tau: Morphism) -> list:
    """σ‖τ: sequences u with u↾A,B ∈ σ and u↾B,C ∈ τ."""
    _check_composable(sigma, tau)
    tree, _ = interaction_tree(sigma.strategy, tau.strategy)
    return [u for u, pab, pbc in tree
            if pab in sigma.plays and pbc in tau.plays]


def compose_hiding(sigma: Morphism, tau: Morphism) -> Morphism:
    """σ;τ = (σ‖τ)/B."""
    _check_composable(sigma, tau)
    tree, stuck = interaction_tree(sigma.strategy, tau.strategy)
    plays = {relabel(u, _AC) for u, pab, pbc in tree
             if pab in sigma.plays and pbc in tau.plays}
    game = lolli(sigma.dom, tau.cod)
    strat = Strategy.from_plays(game, plays, divergences=[PossibleDivergence(u) for u in stuck])
    return Morphism(sigma.dom, tau.cod, strat)


def cut_plays(s: Sequence[Move], t: Sequence[Move]) -> tuple:
    """s;t for s ∈ σ on A⊸B and t ∈ τ on B⊸C with s↾B = t↾B.

    Four mutually recursive modes: O to move on the left (A), O to move on
    the right (C), σ to move, τ to move.  Visible moves are emitted,
    matching B-moves are consumed on both sides and hidden.
    """
    out = []
    i = j = 0
    mode = "right"
    while True:
        if mode == "right":
            if j == len(t) or t[j].path[0] != "R":
                break
            out.append(t[j]); j += 1; mode = "tau"
        elif mode == "tau":
            if j == len(t):
                break
            if t[j].path[0] == "R":
                out.append(t[j]); j += 1; mode = "right"
            else:
                if i == len(s) or s[i].path[0] != "R" or s[i].name != t[j].name \
                        or s[i].path[1:] != t[j].path[1:]:
                    break
                i += 1; j += 1; mode = "sigma"
        elif mode == "sigma":
            if i == len(s):
                break
            if s[i].path[0] == "L":
                out.append(s[i]); i += 1; mode = "left"
            else:
                if j == len(t) or t[j].path[0] != "L" or s[i].name != t[j].name \
                        or s[i].path[1:] != t[j].path[1:]:
                    break
                i += 1; j += 1; mode = "tau"
        else:  # left
            if i == len(s) or s[i].path[0] != "L":
                break
            out.append(s[i]); i += 1; mode = "sigma"
    return tuple(out)


def compose_pointwise(sigma: Morphism, tau: Morphism) -> Morphism:
    """σ;τ = {s;t | s∈σ, t∈τ, s↾B = t↾B}, keeping the even-length results."""
    _check_composable(sigma, tau)
    by_b = {}
    for t in tau.plays:
        by_b.setdefault(restrict(t, L), []).append(t)
    plays = set()
    for s in sigma.plays:
        for t in by_b.get(restrict(s, R), ()):
            v = cut_plays(s, t)
            if len(v) % 2 == 0:
                plays.add(v)
    game = lolli(sigma.dom, tau.cod)
    return Morphism(sigma.dom, tau.cod, Strategy.from_plays(game, plays))


def compose(sigma: Morphism, tau: Morphism, algo="hiding") -> Morphism:
    if algo == "hiding":
        return compose_hiding(sigma, tau)
    if algo == "pointwise":
        return compose_pointwise(sigma, tau)
    raise ValueError(f"unknown composition algorithm {algo!r}")


@dataclass(frozen=True)
class CoveringWitness:
    play: tuple
    interaction: tuple
    segments: tuple  # the hidden B-blocks u_1 .. u_{k-1}


def covering_witness(sigma: Morphism, tau: Morphism, t, inter=None) -> CoveringWitness:
    """The unique u ∈ σ‖τ with u↾A,C = t, and its m₁u₁m₂…u_{k-1}m_k shape."""
    t = tuple(t)
    inter = interactions(sigma, tau) if inter is None else inter
    hits = [u for u in inter if relabel(u, _AC) == t]
    if not hits:
        raise NotInComposite(show_play(t))
    if len(hits) > 1:
        raise AssertionError(f"covering map not injective at {show_play(t)}: {len(hits)} witnesses")
    u = hits[0]
    segments = []
    cur = []
    seen_visible = 0
    for m in u:
        if m.path[0] == "B":
            cur.append(m)
        else:
            if seen_visible:
                segments.append(tuple(cur))
            elif cur:
                raise AssertionError("hidden moves before the first visible move")
            cur = []
            seen_visible += 1
    if cur:
        raise AssertionError("hidden moves after the last visible move")
    return CoveringWitness(t, u, tuple(segments))


# -- monoidal structure --------------------------------------------------

def tensor_mor(sigma: Morphism, tau: Morphism) -> Morphism:
    """σ⊗τ: plays whose (A,B) and (A',B') parts follow σ and τ."""
    dom, cod = tensor(sigma.dom, tau.dom), tensor(sigma.cod, tau.cod)
    game = lolli(dom, cod)
    left = {("L", "L"): L, ("R", "L"): R}
    right = {("L", "R"): L, ("R", "R"): R}
    sp, tp = sigma.plays, tau.plays

    def keep(s):
        return relabel(s, left) in sp and relabel(s, right) in tp

    return Morphism(dom, cod, predicate_strategy(game, keep))


def monoidal_iso(kind: str, A: Game, B: Game = None, C: Game = None, inverse=False) -> Morphism:
    """assoc, symm, unitl, unitr as conjunctions of copy-cats."""
    if kind == "assoc":
        src, dst = tensor(tensor(A, B), C), tensor(A, tensor(B, C))
        links = [(("L", "L", "L"), ("R", "L")), (("L", "L", "R"), ("R", "R", "L")),
                 (("L", "R"), ("R", "R", "R"))]
    elif kind == "symm":
        src, dst = tensor(A, B), tensor(B, A)
        links = [(("L", "L"), ("R", "R")), (("L", "R"), ("R", "L"))]
    elif kind == "unitl":
        src, dst = tensor(I, A), A
        links = [(("L", "R"), R)]
    elif kind == "unitr":
        src, dst = tensor(A, I), A
        links = [(("L", "L"), R)]
    else:
        raise ValueError(f"unknown iso {kind!r}")
    if inverse:
        src, dst = dst, src
        links = [(_swap_side(q), _swap_side(p)) for p, q in links]
    return Morphism(src, dst, copycat(lolli(src, dst), links))


def _swap_side(p):
    return ("R" if p[0] == "L" else "L",) + tuple(p[1:])


def apply_mor(A: Game, B: Game) -> Morphism:
    """Ap_{A,B}: (A⊸B)⊗A → B."""
    dom = tensor(lolli(A, B), A)
    links = [(("L", "L", "L"), ("L", "R")), (("L", "L", "R"), R)]
    return Morphism(dom, B, copycat(lolli(dom, B), links))


def curry(sigma: Morphism) -> Morphism:
    """Λ(σ) = {α*(s) | s ∈ σ} for σ: A⊗B → C."""
    if not isinstance(sigma.dom, TensorGame):
        raise DomainMismatch("curry needs a morphism out of a tensor")
    A, B, C = sigma.dom.left, sigma.dom.right, sigma.cod
    alpha = {("L", "L"): L, ("L", "R"): ("R", "L"), R: ("R", "R")}
    cod = lolli(B, C)
    return Morphism(A, cod, sigma.strategy.relabelled(lolli(A, cod), alpha))


def uncurry(sigma: Morphism) -> Morphism:
    if not isinstance(sigma.cod, LolliGame):
        raise DomainMismatch("uncurry needs a morphism into a linear function space")
    A, B, C = sigma.dom, sigma.cod.left, sigma.cod.right
    alpha_inv = {L: ("L", "L"), ("R", "L"): ("L", "R"), ("R", "R"): R}
    dom = tensor(A, B)
    return Morphism(dom, C, sigma.strategy.relabelled(lolli(dom, C), alpha_inv))


def terminal(A: Game) -> Morphism:
    return Morphism(A, I, Strategy(lolli(A, I), frozenset({()})))


def proj_tensor(A: Game, B: Game) -> Morphism:
    """A⊗B → A⊗I ≅ A."""
    return compose(tensor_mor(identity(A), terminal(B)), monoidal_iso("unitr", A))


def fst(A: Game, B: Game) -> Morphism:
    src = with_(A, B)
    return Morphism(src, A, copycat(lolli(src, A), [(("L", "L"), R)]))


def snd(A: Game, B: Game) -> Morphism:
    src = with_(A, B)
    return Morphism(src, B, copycat(lolli(src, B), [(("L", "R"), R)]))


def pair(sigma: Morphism, tau: Morphism) -> Morphism:
    """⟨σ,τ⟩: C → A&B, tagging each play by the component O opens in."""
    if sigma.dom != tau.dom:
        raise DomainMismatch(f"{sigma.dom!r} ≠ {tau.dom!r}")
    cod = with_(sigma.cod, tau.cod)
    game = lolli(sigma.dom, cod)
    plays = {relabel(s, {L: L, R: ("R", "L")}) for s in sigma.plays}
    plays |= {relabel(s, {L: L, R: ("R", "R")}) for s in tau.plays}
    return Morphism(sigma.dom, cod, Strategy.from_plays(game, plays))


def as_point(sigma: Strategy) -> Morphism:
    """A strategy on G seen as a morphism I → G."""
    g = sigma.game
    return Morphism(I, g, sigma.relabelled(lolli(I, g), {(): R}))


def from_point(f: Morphism) -> Strategy:
    if f.dom != I:
        raise DomainMismatch("not a point")
    return f.strategy.relabelled(f.cod, {R: ()})


def morphisms(A: Game, B: Game, **kw) -> list:
    from .strategies import enumerate_strategies
    return [Morphism(A, B, s) for s in enumerate_strategies(lolli(A, B), **kw)]
