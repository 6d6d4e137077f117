"""The polymorphic layer.

Instances are finite sub-games of a truncated universe.  The quantifier game
Pi(F) is built relative to an :class:`InstanceFamily`: Opponent may move when
the position is legal in *some* member, Player only when his move is legal in
*every* member where the position so far is legal.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .category import Morphism, copycat
from .games import (FlatGame, Game, GameError, I, Move, O, boolean_game, leq, lolli,
                    restrict, tensor, universe_game, with_)
from .strategies import Strategy, StrategyError, BudgetExceeded, OK, Verdict, count_strategies, \
    is_history_free
from .syntax import show_type, TBin, TBool, TForall, TUnit, TVar, Type, occurrence_polarity, occurrences, \
    parse_type, subst_type
from .winning import All, LolliW, RefinedGame, TensorW, WinningSpec, WithW, is_winning, \
    lasso_valid

L, R = ("L",), ("R",)


class ArityMismatch(GameError):
    pass


class EmptyFamily(GameError):
    pass


class InstanceNotInFamily(GameError):
    pass


class NotUniform(StrategyError):
    def __init__(self, verdict):
        super().__init__(str(verdict))
        self.verdict = verdict


# -- variable types ------------------------------------------------------------

@dataclass(frozen=True)
class VariableType:
    body: Type
    vars: tuple

    @property
    def arity(self):
        return len(self.vars)

    @classmethod
    def of(cls, t) -> "VariableType":
        """From a type (or its source text); ``forall X.`` binders are peeled."""
        if isinstance(t, str):
            t = parse_type(t)
        bound = []
        while isinstance(t, TForall):
            bound.append(t.var)
            t = t.body
        free = sorted(t.free_vars() - set(bound))
        return cls(t, tuple(bound) + tuple(free))

    def __str__(self):
        return f"λ{','.join(self.vars)}. {self.body}"


# -- instance families ---------------------------------------------------------

@dataclass(frozen=True, eq=False)
class InstanceFamily:
    games: tuple
    universe: Game
    name: str = "family"

    def __post_init__(self):
        if not self.games:
            raise EmptyFamily("an instance family needs at least one member")
        for A in self.games:
            if not leq(A, self.universe):
                raise GameError(f"{A!r} is not a sub-game of {self.universe!r}")
        object.__setattr__(self, "key", ("family", self.universe.key,
                                         frozenset(A.key for A in self.games)))
        object.__setattr__(self, "_index", {A: i for i, A in enumerate(self.games)})

    def __len__(self):
        return len(self.games)

    def __iter__(self):
        return iter(self.games)

    def __contains__(self, A):
        return A in self._index

    def __eq__(self, other):
        return isinstance(other, InstanceFamily) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"{self.name}[{len(self.games)}]"

    def members_containing(self, play) -> int:
        """Bitmask of the members having ``play`` as a position."""
        masks = self.__dict__.get("_masks")
        if masks is None:
            masks = {}
            for i, A in enumerate(self.games):
                for s in A.plays:
                    masks[s] = masks.get(s, 0) | (1 << i)
            object.__setattr__(self, "_masks", masks)
        return masks.get(tuple(play), 0)

    @property
    def full_mask(self):
        return (1 << len(self.games)) - 1


def sub_game(universe: Game, plays, name=None) -> FlatGame:
    """The sub-game of ``universe`` generated by the prefixes of ``plays``."""
    closed = {()}
    for s in plays:
        s = tuple(s)
        closed.update(s[:i] for i in range(len(s) + 1))
    return FlatGame(universe.moves, closed, name=name)


def all_subgames(universe: Game) -> list:
    """Every prefix-closed sub-game of a finite game."""
    def below(s):
        per_child = []
        for m in universe.extensions(s):
            sm = s + (m,)
            per_child.append([frozenset()] + [sub | {sm} for sub in below(sm)])
        return [frozenset().union(*c) for c in itertools.product(*per_child)]

    out = [FlatGame(universe.moves, frag | {()}) for frag in below(())]
    return sorted(out, key=lambda g: (len(g.plays), sorted(tuple(m.sort_key() for m in s) for s in g.plays)))


def universe(tokens=("0", "1"), depth=3) -> Game:
    return universe_game(tuple(tokens), depth)


def full_family(tokens=("0", "1"), depth=3) -> InstanceFamily:
    U = universe(tokens, depth)
    return InstanceFamily(tuple(all_subgames(U)), U, f"Sub(U{{{','.join(tokens)}}}{depth})")


def generated_family(tokens=("0", "1"), depth=3, max_generators=1) -> InstanceFamily:
    """Sub-games generated by at most ``max_generators`` maximal plays."""
    U = universe(tokens, depth)
    maximal = [s for s in U.plays if len(s) == depth]
    maximal.sort(key=lambda s: [m.sort_key() for m in s])
    members = {}
    for k in range(0, max_generators + 1):
        for gens in itertools.combinations(maximal, k):
            g = sub_game(U, gens)
            members.setdefault(g.key, g)
    games = sorted(members.values(), key=lambda g: len(g.plays))
    return InstanceFamily(tuple(games), U, f"Gen{max_generators}(U{{{','.join(tokens)}}}{depth})")


def family_chain(tokens=("0", "1"), depth=3) -> list:
    """Three nested families over one universe, used for stabilisation sweeps."""
    return [generated_family(tokens, depth, 1), generated_family(tokens, depth, 2),
            full_family(tokens, depth)]


def family_by_size(n: int) -> InstanceFamily:
    chain = family_chain()
    if not 1 <= n <= len(chain):
        raise ValueError(f"family size must be in 1..{len(chain)}")
    return chain[n - 1]


# -- interpretation ------------------------------------------------------------

def interpret_type(F, args=(), family: InstanceFamily = None, depth=None, env=None) -> Game:
    """F(args), with nested quantifiers read as Pi-games over ``family``."""
    if not isinstance(F, VariableType):
        F = VariableType.of(F) if isinstance(F, str) else VariableType(F, tuple(sorted(F.free_vars())))
    if isinstance(args, Game):
        args = (args,)
    if len(args) != F.arity:
        raise ArityMismatch(f"expected {F.arity} argument(s), got {len(args)}")
    env = dict(env or {})
    env.update(zip(F.vars, args))
    return _interp(F.body, env, family, depth)


def _interp(t: Type, env, family, depth) -> Game:
    if isinstance(t, TVar):
        if t.name not in env:
            raise ArityMismatch(f"unbound type variable {t.name}")
        return env[t.name]
    if isinstance(t, TUnit):
        return I
    if isinstance(t, TBool):
        return boolean_game()
    if isinstance(t, TBin):
        a, b = _interp(t.left, env, family, depth), _interp(t.right, env, family, depth)
        return {"*": tensor, "-o": lolli, "&": with_}[t.op](a, b)
    if isinstance(t, TForall):
        if family is None:
            raise EmptyFamily("a quantified type needs an instance family")
        inner = {k: v for k, v in env.items() if k != t.var}
        return build_pi(VariableType(t.body, (t.var,)), family, depth, env=inner)
    raise TypeError(f"not a type: {t!r}")


# -- the quantifier game ---------------------------------------------------------

class PiGame(Game):
    """Pi(F) over a finite family; ``depth`` optionally truncates it."""

    def __init__(self, F: VariableType, family: InstanceFamily, depth=None, env=None):
        if F.arity != 1:
            raise ArityMismatch("Pi needs a unary variable type")
        if not len(family):
            raise EmptyFamily("empty family")
        self.F, self.family, self.env = F, family, dict(env or {})
        x = F.vars[0]
        env_key = tuple(sorted((k, v.key) for k, v in self.env.items()))
        self.universal = _interp(F.body, {**self.env, x: family.universe}, family, None)
        # fast path: no quantifier under F, so membership factors through the
        # projections onto the occurrences of X
        self._occ = None
        if not _has_forall(F.body):
            self._occ = occurrences(F.body, x)
        self._instances = None
        natural = max(self._instance_games()[i].depth_bound for i in range(len(family)))
        bound = natural if depth is None else min(depth, natural)
        super().__init__(self.universal.moves, bound,
                         ("pi", str(F), family.key, env_key, bound))
        self.truncated = bound < natural
        self.cap = bound
        self._full = {(): True}
        self.name = f"Π({show_type(F.body)})"

    def _instance_games(self):
        if self._instances is None:
            x = self.F.vars[0]
            self._instances = [_interp(self.F.body, {**self.env, x: A}, self.family, None)
                               for A in self.family.games]
        return self._instances

    def instance(self, A: Game) -> Game:
        if A not in self.family:
            raise InstanceNotInFamily(repr(A))
        return self._instance_games()[self.family._index[A]]

    def _witnesses(self, s) -> int:
        """Bitmask of the members A with s ∈ P_F(A)."""
        if self._occ is not None:
            if not self.universal.contains(s):
                return 0
            mask = self.family.full_mask
            for p in self._occ:
                mask &= self.family.members_containing(restrict(s, p))
                if not mask:
                    break
            return mask
        mask = 0
        for i, G in enumerate(self._instance_games()):
            if G.contains(s):
                mask |= 1 << i
        return mask

    def _member(self, s) -> bool:
        r = self._full.get(s)
        if r is not None:
            return r
        r = False
        if self._member(s[:-1]):
            if len(s) % 2:
                r = self._witnesses(s) != 0
            else:
                before = self._witnesses(s[:-1])
                after = self._witnesses(s)
                r = before != 0 and (before & ~after) == 0
        self._full[s] = r
        return r

    def _contains(self, s):
        if not self.alternates(s):
            return False
        return self._member(s)

    def _contains_full(self, s):
        if not self.alternates(s):
            return False
        return self._member(s)


def _has_forall(t):
    if isinstance(t, TForall):
        return True
    if isinstance(t, TBin):
        return _has_forall(t.left) or _has_forall(t.right)
    return False


@functools.lru_cache(maxsize=256)
def _build_pi(F, family, depth, env_items):
    return PiGame(F, family, depth, dict(env_items))


def build_pi(F, family: InstanceFamily, depth=None, env=None) -> PiGame:
    if not isinstance(F, VariableType):
        F = VariableType.of(F)
    if family is None or not len(family):
        raise EmptyFamily("empty family")
    env_items = tuple(sorted((env or {}).items(), key=lambda kv: kv[0]))
    return _build_pi(F, family, depth, env_items)


# -- uniform strategies ----------------------------------------------------------

def instantiate(sigma: Strategy, FA: Game):
    """σ_A = {ε} ∪ {sab | s ∈ σ_A, sa ∈ P_F(A), sab ∈ σ}, with a uniformity verdict."""
    plays = [()]
    frontier = [()]
    verdict = OK
    while frontier:
        nxt = []
        for s in frontier:
            for m in FA.moves_of(O):
                sa = s + (m,)
                if not FA.contains(sa):
                    continue
                b = sigma.response(sa)
                if b is None:
                    continue
                if FA.contains(sa + (b,)):
                    nxt.append(sa + (b,))
                elif verdict.ok and not FA.is_frontier(sa):
                    verdict = Verdict(False, "uniformity", (sa + (b,),))
        plays.extend(nxt)
        frontier = nxt
    return Strategy.from_plays(FA, plays), verdict


def instantiate_at(sigma: Strategy, F, A: Game, family=None, context: Game = None):
    """Instantiate at F(A), or at C ⊸ F(A) for σ on C ⊸ F(-)."""
    FA = interpret_type(F, (A,), family)
    return instantiate(sigma, FA if context is None else lolli(context, FA))


def check_uniform(sigma: Strategy, inst_games: Sequence[Game]) -> Verdict:
    for G in inst_games:
        _, v = instantiate(sigma, G)
        if not v:
            return v
    return OK


def poly_project(Pi: PiGame, A: Game) -> Morphism:
    """π_A: copy-cat between Π(F) and F(A)."""
    FA = Pi.instance(A)
    return Morphism(Pi, FA, copycat(lolli(Pi, FA), [(L, R)]))


def second_order_curry(sigma: Morphism, Pi: PiGame, check=True) -> Morphism:
    """Λ²(σ) for σ: C → F(U): the same plays, read at C ⊸ Π(F)."""
    C = sigma.dom
    target = lolli(C, Pi)
    if check:
        insts = [lolli(C, G) for G in Pi._instance_games()]
        v = check_uniform(sigma.strategy, insts)
        if not v:
            raise NotUniform(v)
    plays = [s for s in sigma.strategy.plays if target.contains(s)]
    return Morphism(C, Pi, Strategy.from_plays(target, plays))


# -- history-free census ---------------------------------------------------------

def hf_total_strategies(G: Game, limit=10**6, total=True) -> list:
    """Every total history-free strategy on ``G``, by backtracking over tables.

    With ``total=False`` partial strategies are included too: a table entry
    ``None`` records that Player never answers that move.
    """
    out = []

    def extend(table, stack):
        # stack: even positions still to expand
        while stack:
            s = stack.pop()
            base = len(stack)
            for a in G.extensions(s):
                sa = s + (a,)
                if a in table and table[a] is None:
                    continue
                b = table.get(a)
                if b is not None:
                    if G.contains(sa + (b,)):
                        stack.append(sa + (b,))
                        continue
                    if G.is_frontier(sa) and not G.extensions(sa):
                        continue
                    return
                choices = list(G.extensions(sa))
                if not total:
                    choices.append(None)
                if not choices:
                    if G.is_frontier(sa):
                        continue
                    return
                # branch on the new entry and revisit s with it
                rest = stack[:base]
                for b in choices:
                    extend({**table, a: b}, rest + [s])
                    if len(out) > limit:
                        raise BudgetExceeded(limit)
                return
        out.append(table)

    extend({}, [()])
    # canonical, deduplicated
    seen = {}
    for t in out:
        t = {a: b for a, b in t.items() if b is not None}
        key = tuple(sorted((a.sort_key(), b.sort_key()) for a, b in t.items()))
        seen.setdefault(key, t)
    return [seen[k] for k in sorted(seen)]


def table_closure(G: Game, table: dict) -> Strategy:
    plays = [()]
    frontier = [()]
    while frontier:
        nxt = []
        for s in frontier:
            for a in G.extensions(s):
                b = table.get(a)
                if b is not None and G.contains(s + (a, b)):
                    nxt.append(s + (a, b))
        plays.extend(nxt)
        frontier = nxt
    return Strategy.from_plays(G, plays)


def reachable_table(sigma: Strategy) -> dict:
    table = {}
    for s in sigma.plays:
        if s:
            table[s[-2]] = s[-1]
    return table


# -- copy-cat classification -------------------------------------------------------

def occurrence_links(F: VariableType) -> list:
    """All copy-cat link sets matching each positive occurrence of X with a
    distinct negative one."""
    x = F.vars[0]
    occ = occurrences(F.body, x)
    pos = [p for p in occ if occurrence_polarity(F.body, p) > 0]
    neg = [p for p in occ if occurrence_polarity(F.body, p) < 0]
    out = []
    for chosen in itertools.permutations(neg, len(pos)):
        out.append(tuple(zip(chosen, pos)))
    return out


def show_links(links) -> str:
    return ", ".join(f"{'.'.join(p) or 'ε'}↔{'.'.join(q) or 'ε'}" for p, q in links)


def classify(sigma: Strategy, F: VariableType) -> Optional[tuple]:
    for links in occurrence_links(F):
        if copycat(sigma.game, links) == sigma:
            return links
    return None


@dataclass
class Census:
    type: VariableType
    family: InstanceFamily
    game: PiGame
    survivors: list           # (Strategy, links or None)
    total_count: Optional[int] = None
    hunt: Optional[Strategy] = None

    @property
    def count(self):
        return len(self.survivors)


def full_completeness_experiment(F, family: InstanceFamily, depth=None, lasso_budget=8,
                                 history_free=True, winning=True, limit=10**6) -> Census:
    """Winning (history-free) strategies on Π(F), classified as copy-cats."""
    if not isinstance(F, VariableType):
        F = VariableType.of(F)
    if F.arity != 1:
        raise ArityMismatch("the experiment takes a unary type")
    Pi = build_pi(F, family, depth)
    census = Census(F, family, Pi, [])
    if history_free:
        for table in hf_total_strategies(Pi, limit):
            sigma = table_closure(Pi, table)
            if not is_history_free(sigma):
                continue
            if winning and not is_winning(sigma, RefinedGame(Pi, All()), lasso_budget):
                continue
            census.survivors.append((sigma, classify(sigma, F)))
    else:
        census.total_count = count_strategies(Pi, total_only=True)
        try:
            census.hunt = hunt_strategy(Pi)
        except GameError:
            census.hunt = None
    return census


# -- a non-history-free winning strategy -------------------------------------

X1, X2, X3 = ("L",), ("R", "L"), ("R", "R")


def strategy_from_policy(G: Game, policy: Callable) -> Strategy:
    """Grow a strategy from ``policy(sa) -> move or None``; illegal replies are
    dropped."""
    plays = [()]
    frontier = [()]
    while frontier:
        nxt = []
        for s in frontier:
            for a in G.extensions(s):
                b = policy(s + (a,))
                if b is not None and G.contains(s + (a, b)):
                    nxt.append(s + (a, b))
        plays.extend(nxt)
        frontier = nxt
    return Strategy.from_plays(G, plays)


def _hunt_policy(sa):
    n = len(sa)
    a0 = sa[0]
    if n == 1:
        return Move(a0.name, X2) if a0.path == X3 else None
    if n == 3:
        return Move(a0.name, X1) if sa[-1].path == X2 else None
    last = sa[-1]
    if last.path == X1:
        return Move(last.name, X3)
    if last.path == X3:
        return Move(last.name, X1)
    return None


def hunt_strategy(Pi: PiGame) -> Strategy:
    """On Π(X⊸(X⊸X)): answer the opening a in X₃ with a in X₂, answer
    Opponent's reply there with a in X₁, then copy-cat X₁↔X₃."""
    b, x = Pi.F.body, TVar(Pi.F.vars[0])
    if b != TBin("-o", x, TBin("-o", x, x)):
        raise GameError("Hunt's strategy lives on Π(X ⊸ (X ⊸ X))")
    return strategy_from_policy(Pi, _hunt_policy)


# -- winning conditions ----------------------------------------------------------

def interpret_spec(t: Type, env: dict) -> WinningSpec:
    """F_A(W): the structural action of a variable type on winning specs."""
    if isinstance(t, TVar):
        return env.get(t.name, All())
    if isinstance(t, TBin):
        a, b = interpret_spec(t.left, env), interpret_spec(t.right, env)
        return {"*": TensorW, "-o": LolliW, "&": WithW}[t.op](a, b)
    return All()


@dataclass(frozen=True, eq=False)
class PiW(WinningSpec):
    """Π_F: a lasso wins when it wins F_A(W_A) in every refined instance
    (A, W_A) of which it is an infinite play."""

    F: VariableType
    instances: tuple  # (Game, WinningSpec)

    def wins(self, l):
        x = self.F.vars[0]
        for A, W in self.instances:
            FA = _interp(self.F.body, {x: A}, None, None)
            if lasso_valid(FA, l) and not interpret_spec(self.F.body, {x: W}).wins(l):
                return False
        return True

    def to_json(self):
        return {"kind": "pi", "type": str(self.F.body), "instances": len(self.instances)}


def refined_pi(F, instances, depth=None, universe_game_=None) -> RefinedGame:
    """(Π(F), Π_F) over refined instances sharing one game universe."""
    if not isinstance(F, VariableType):
        F = VariableType.of(F)
    games = []
    for A, _ in instances:
        if A not in games:
            games.append(A)
    U = universe_game_ or games[-1]
    fam = InstanceFamily(tuple(games), U, "refined")
    return RefinedGame(build_pi(F, fam, depth), PiW(F, tuple(instances)))


# -- reindexing -------------------------------------------------------------------

def beck_chevalley_check(F, var: str, param: str, sub, family: InstanceFamily, depth=None) -> bool:
    """Π_X(F[sub/Y]) and (Π_X F)[sub/Y] have the same plays."""
    if isinstance(F, str):
        F = parse_type(F)
    if isinstance(sub, str):
        sub = parse_type(sub)
    G = _interp(sub, {}, family, depth)
    lhs = build_pi(VariableType(subst_type(F, param, sub), (var,)), family, depth)
    rhs = build_pi(VariableType(F, (var,)), family, depth, env={param: G})
    return lhs.plays == rhs.plays
