"""Binary relations on games and their lifting to strategies."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .category import Morphism, compose, identity
from .games import Game, GameError, lolli, restrict, show_play, tensor
from .strategies import Strategy

L, R = ("L",), ("R",)


class InvalidRelation(GameError):
    pass


class GameMismatch(GameError):
    pass


def _key(pair):
    s, t = pair
    return (len(s), [m.sort_key() for m in s], [m.sort_key() for m in t])


@dataclass(frozen=True, eq=False)
class Relation:
    left: Game
    right: Game
    pairs: frozenset

    def __post_init__(self):
        pairs = frozenset((tuple(s), tuple(t)) for s, t in self.pairs)
        object.__setattr__(self, "pairs", pairs)
        if ((), ()) not in pairs:
            raise InvalidRelation("(ε, ε) must be related")
        for s, t in pairs:
            if len(s) != len(t):
                raise InvalidRelation(f"not length-preserving: {show_play(s)} / {show_play(t)}")
            if not self.left.contains(s) or not self.right.contains(t):
                raise InvalidRelation(f"not a pair of plays: {show_play(s)} / {show_play(t)}")
            if s and (s[:-1], t[:-1]) not in pairs:
                raise InvalidRelation(f"not prefix-closed at {show_play(s)} / {show_play(t)}")

    def __contains__(self, pair):
        s, t = pair
        return (tuple(s), tuple(t)) in self.pairs

    def __eq__(self, other):
        return (isinstance(other, Relation) and self.left == other.left
                and self.right == other.right and self.pairs == other.pairs)

    def __hash__(self):
        return hash((self.left, self.right, self.pairs))

    def __len__(self):
        return len(self.pairs)

    def __repr__(self):
        return f"Relation({self.left!r}, {self.right!r}, {len(self.pairs)} pairs)"

    def sorted_pairs(self):
        return sorted(self.pairs, key=_key)


def diagonal(A: Game, plays=None) -> Relation:
    plays = A.plays if plays is None else plays
    return Relation(A, A, frozenset((s, s) for s in plays))


def full_relation(A: Game, B: Game) -> Relation:
    return Relation(A, B, frozenset(pair_tree(A, B)))


def pair_tree(A: Game, B: Game) -> list:
    """Every length-matched pair of plays, parents before children."""
    out = [((), ())]
    i = 0
    while i < len(out):
        s, t = out[i]
        for a in A.extensions(s):
            for b in B.extensions(t):
                out.append((s + (a,), t + (b,)))
        i += 1
    return out


def enumerate_relations(A: Game, B: Game, limit=10**5) -> list:
    """All relations between A and B: prefix-closed subsets of the pair tree."""
    def below(node):
        s, t = node
        per_child = []
        for a in A.extensions(s):
            for b in B.extensions(t):
                c = (s + (a,), t + (b,))
                per_child.append([frozenset()] + [sub | {c} for sub in below(c)])
        total = 1
        for opts in per_child:
            total *= len(opts)
            if total > limit:
                raise GameError(f"more than {limit} relations")
        return [frozenset().union(*c) for c in itertools.product(*per_child)]

    root = ((), ())
    return [Relation(A, B, frag | {root}) for frag in below(root)]


# -- lifting -------------------------------------------------------------------

@dataclass(frozen=True)
class RelVerdict:
    holds: bool
    witness: Optional[tuple] = None  # (s, a, t, a')
    clause: Optional[str] = None

    def __bool__(self):
        return self.holds


def lift_check(Rel: Relation, sigma: Strategy, tau: Strategy) -> RelVerdict:
    """R̂(σ, τ): at related odd positions both respond or neither does, and
    the responses keep the positions related."""
    if sigma.game != Rel.left or tau.game != Rel.right:
        raise GameMismatch("relation and strategies live on different games")
    for sa, ta in Rel.sorted_pairs():
        if len(sa) % 2 == 0:
            continue
        s, t = sa[:-1], ta[:-1]
        if s not in sigma.plays or t not in tau.plays:
            continue
        b, b2 = sigma.response(sa), tau.response(ta)
        if (b is None) != (b2 is None):
            return RelVerdict(False, (s, sa[-1], t, ta[-1]), "domain")
        if b is not None and (sa + (b,), ta + (b2,)) not in Rel.pairs:
            return RelVerdict(False, (s, sa[-1], t, ta[-1]), "response")
    return RelVerdict(True)


# -- connectives ---------------------------------------------------------------------

def _connective(Rg: Relation, Sg: Relation, build) -> Relation:
    left, right = build(Rg.left, Sg.left), build(Rg.right, Sg.right)
    pairs = [((), ())]
    frontier = [((), ())]
    while frontier:
        nxt = []
        for s, t in frontier:
            for a in left.extensions(s):
                for b in right.extensions(t):
                    if a.path[0] != b.path[0]:  # out*(s) = out*(t)
                        continue
                    sa, tb = s + (a,), t + (b,)
                    if ((restrict(sa, L), restrict(tb, L)) in Rg.pairs
                            and (restrict(sa, R), restrict(tb, R)) in Sg.pairs):
                        nxt.append((sa, tb))
        pairs.extend(nxt)
        frontier = nxt
    return Relation(left, right, frozenset(pairs))


def rel_tensor(Rg: Relation, Sg: Relation) -> Relation:
    return _connective(Rg, Sg, tensor)


def rel_lolli(Rg: Relation, Sg: Relation) -> Relation:
    return _connective(Rg, Sg, lolli)


def related_by(Rg: Relation, Sg: Relation, sigma: Strategy, tau: Strategy) -> RelVerdict:
    """R{(σ, τ)}S, i.e. the lifting of R ⊸ S."""
    return lift_check(rel_lolli(Rg, Sg), sigma, tau)


# -- order and meets ---------------------------------------------------------------

def _same_games(*rels):
    a = rels[0]
    for r in rels[1:]:
        if r.left != a.left or r.right != a.right:
            raise GameMismatch("relations over different game pairs")


def rel_leq(Rg: Relation, Sg: Relation) -> bool:
    """R ≤ S: S ⊆ R at Opponent moves and R ⊆ S at Player moves."""
    _same_games(Rg, Sg)
    for sa, tb in Sg.pairs:
        if len(sa) % 2 == 1 and (sa[:-1], tb[:-1]) in Rg.pairs and (sa, tb) not in Rg.pairs:
            return False
    for sa, tb in Rg.pairs:
        if sa and len(sa) % 2 == 0 and (sa[:-1], tb[:-1]) in Sg.pairs and (sa, tb) not in Sg.pairs:
            return False
    return True


def rel_leq_definitional(Rg: Relation, Sg: Relation) -> bool:
    """R{(id_A, id_B)}S."""
    _same_games(Rg, Sg)
    return bool(related_by(Rg, Sg, identity(Rg.left).strategy, identity(Rg.right).strategy))


def rel_meet(rels: Sequence[Relation]) -> Relation:
    rels = list(rels)
    if not rels:
        raise ValueError("meet of an empty list")
    _same_games(*rels)
    A, B = rels[0].left, rels[0].right
    pairs = [((), ())]
    frontier = [((), ())]
    while frontier:
        nxt = []
        for s, t in frontier:
            for a in A.extensions(s):
                for b in B.extensions(t):
                    p = (s + (a,), t + (b,))
                    if len(p[0]) % 2:
                        ok = any(p in r.pairs for r in rels)
                    else:
                        ok = all(p in r.pairs for r in rels if (s, t) in r.pairs)
                    if ok:
                        nxt.append(p)
        pairs.extend(nxt)
        frontier = nxt
    return Relation(A, B, frozenset(pairs))


def is_glb(M: Relation, rels: Sequence[Relation], candidates: Iterable[Relation]):
    """M is below every R_i, and every common lower bound is below M.
    Returns the first failing candidate or ``None``."""
    if not all(rel_leq(M, r) for r in rels):
        return M
    for Lb in candidates:
        if all(rel_leq(Lb, r) for r in rels) and not rel_leq(Lb, M):
            return Lb
    return None


# -- the cut law --------------------------------------------------------------------

def spec_structure_compose_check(Rg, Sg, Tg, sigma: Morphism, sigma2: Morphism,
                                 tau: Morphism, tau2: Morphism, algo="hiding") -> bool:
    """R{(σ,σ′)}S and S{(τ,τ′)}T imply R{(σ;τ, σ′;τ′)}T.

    σ: A → B and τ: B → C on the left; σ′: A′ → B′ and τ′: B′ → C′ on the right.
    Returns False only on a counterexample to the implication.
    """
    if sigma.cod != tau.dom or sigma2.cod != tau2.dom:
        from .category import DomainMismatch
        raise DomainMismatch("chains are not composable")
    if not related_by(Rg, Sg, sigma.strategy, sigma2.strategy):
        return True
    if not related_by(Sg, Tg, tau.strategy, tau2.strategy):
        return True
    left = compose(sigma, tau, algo)
    right = compose(sigma2, tau2, algo)
    return bool(related_by(Rg, Tg, left.strategy, right.strategy))


def is_morphism_of_relations(sigma: Morphism, Rg: Relation, Sg: Relation) -> bool:
    """σ: (A, R) → (B, S) in the diagonal category: R̂⊸S(σ, σ)."""
    return bool(related_by(Rg, Sg, sigma.strategy, sigma.strategy))


# -- unary case ----------------------------------------------------------------------

def unary_meet(game: Game, play_sets: Sequence[Iterable]) -> frozenset:
    """The meet of diagonal relations, read back as a set of plays."""
    rels = [diagonal(game, frozenset(map(tuple, ps))) for ps in play_sets]
    return frozenset(s for s, _ in rel_meet(rels).pairs)


# -- winning-set meets ---------------------------------------------------------------

def winning_meet_check(specs, candidates, game: Game, lassos, lasso_budget=8):
    """⋀W_i = ⋂W_i: the intersection is the greatest lower bound under the
    property order, and its extension is the intersection of extensions.

    Returns ``None`` on success or a string describing the failure.
    """
    from .winning import MeetW, spec_extension, spec_leq
    meet = MeetW(tuple(specs))
    ext = spec_extension(meet, lassos)
    inter = frozenset(lassos)
    for w in specs:
        inter &= spec_extension(w, lassos)
    if ext != inter:
        return "extension of the meet differs from the intersection"
    for w in specs:
        if not spec_leq(meet, w, game, lasso_budget):
            return f"meet not below {w}"
    for v in candidates:
        if all(spec_leq(v, w, game, lasso_budget) for w in specs) and not spec_leq(v, meet, game, lasso_budget):
            return f"lower bound {v} not below the meet"
    return None


def cut_law_sweep(A, A2, B, B2, C, C2, algo="hiding"):
    """Exhaustive check of the cut law over all relations R ⊆ A×A′,
    S ⊆ B×B′, T ⊆ C×C′ and all strategies.  Returns (instances, failures)."""
    from .category import morphisms
    rA, rB, rC = enumerate_relations(A, A2), enumerate_relations(B, B2), enumerate_relations(C, C2)
    f1, f2 = morphisms(A, B), morphisms(A2, B2)
    g1, g2 = morphisms(B, C), morphisms(B2, C2)
    memo = {}

    def related(Rg, Sg, left, right, tag):
        k = (Rg, Sg, tag)
        if k not in memo:
            lo = rel_lolli(Rg, Sg)
            memo[k] = [(i, j) for i, f in enumerate(left) for j, g in enumerate(right)
                       if lift_check(lo, f.strategy, g.strategy)]
        return memo[k]

    comp = {}

    def composite(side, i, k):
        key = (side, i, k)
        if key not in comp:
            fs, gs = (f1, g1) if side == 0 else (f2, g2)
            comp[key] = compose(fs[i], gs[k], algo).strategy
        return comp[key]

    n = failures = 0
    for Rg in rA:
        for Tg in rC:
            lo = rel_lolli(Rg, Tg)
            verdicts = {}  # the same composites recur for many S
            for Sg in rB:
                for i, j in related(Rg, Sg, f1, f2, 0):
                    for k, l in related(Sg, Tg, g1, g2, 1):
                        n += 1
                        key = (composite(0, i, k), composite(1, j, l))
                        v = verdicts.get(key)
                        if v is None:
                            v = verdicts[key] = bool(lift_check(lo, *key))
                        failures += not v
    return n, failures
