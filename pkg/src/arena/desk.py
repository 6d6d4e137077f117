"""The small exhaustive game family the law sweeps range over.

Members are finite games whose moves are at most four and whose plays have
length at most four.  Two sources:

* every rooted unordered tree with at most four edges, one fresh move per
  edge (labelled by position, polarity by depth);
* every game on at most three moves, moves reused freely, up to renaming.
"""

from __future__ import annotations

import functools
import itertools

from .games import FlatGame, Game, I, O, P, expected_polarity, make_flat_game

MAX_MOVES = 4
MAX_DEPTH = 4


def _trees(n: int):
    """Rooted unordered trees with n edges, as sorted tuples of subtrees."""
    if n == 0:
        return [()]
    out = set()
    # split n edges as child edge + child's subtree + the rest of the root
    for k in range(1, n + 1):  # edges used by the first child (incl. its edge)
        for child in _trees(k - 1):
            for rest in _trees(n - k):
                out.add(tuple(sorted(rest + (child,))))
    return sorted(out)


def _tree_depth(t):
    return 0 if not t else 1 + max(_tree_depth(c) for c in t)


def _shape(t):
    return "(" + "".join(_shape(c) for c in t) + ")"


def tree_game(t) -> FlatGame:
    pol, plays = {}, []
    counter = itertools.count()

    def walk(node, prefix):
        if not node:
            plays.append(prefix)
        for child in node:
            name = f"m{next(counter)}"
            pol[name] = expected_polarity(len(prefix))
            walk(child, prefix + (name,))

    walk(t, ())
    return make_flat_game(plays, pol, name=f"T{_shape(t)}")


def _canonical(g: FlatGame):
    """Play set up to renaming moves within each polarity."""
    os_ = [m for m, p in g.moves.items() if p is O]
    ps_ = [m for m, p in g.moves.items() if p is P]
    best = None
    for po in itertools.permutations(range(len(os_))):
        for pp in itertools.permutations(range(len(ps_))):
            ren = {m: ("o", i) for m, i in zip(os_, po)}
            ren.update({m: ("p", i) for m, i in zip(ps_, pp)})
            form = tuple(sorted(tuple(ren[m] for m in s) for s in g.plays))
            if best is None or form < best:
                best = form
    return best


def _reusing_games(max_moves=3, max_depth=MAX_DEPTH):
    """Every game whose moves (all used) number at most ``max_moves``."""
    out = []
    for n_o in range(1, max_moves + 1):
        for n_p in range(0, max_moves - n_o + 1):
            pol = {f"o{i}": O for i in range(n_o)}
            pol.update({f"p{i}": P for i in range(n_p)})
            by = {O: [m for m in pol if pol[m] is O], P: [m for m in pol if pol[m] is P]}

            def below(s):
                if len(s) == max_depth:
                    return [frozenset()]
                per_child = []
                for m in by[expected_polarity(len(s))]:
                    sm = s + (m,)
                    per_child.append([frozenset()] + [sub | {sm} for sub in below(sm)])
                return [frozenset().union(*c) for c in itertools.product(*per_child)]

            for frag in below(()):
                used = {m for s in frag for m in s}
                if len(used) != n_o + n_p:
                    continue
                out.append(make_flat_game(list(frag), {m: pol[m] for m in used}))
    return out


@functools.lru_cache(maxsize=None)
def desk_games() -> tuple:
    out, seen = [], set()
    for n in range(MAX_MOVES + 1):
        for t in _trees(n):
            if _tree_depth(t) <= MAX_DEPTH:
                g = tree_game(t) if t else I
                out.append(g)
                seen.add(g.key)
    forms = {_canonical(g) for g in out}
    for g in _reusing_games():
        form = _canonical(g)
        if form not in forms:
            forms.add(form)
            g.name = "G{" + ",".join(" ".join(m.name for m in s) for s in sorted(g.plays) if s) + "}"
            out.append(g)
    return tuple(out)


def fits(G: Game) -> bool:
    return len(G.moves) <= MAX_MOVES and G.depth_bound <= MAX_DEPTH


def size(G: Game):
    return len(G.moves), G.depth_bound


def fits_sum(*games) -> bool:
    return (sum(len(g.moves) for g in games) <= MAX_MOVES
            and sum(g.depth_bound for g in games) <= MAX_DEPTH)


def desk_pairs() -> list:
    """(A, B) with A ⊸ B in the family."""
    gs = desk_games()
    return [(A, B) for A in gs for B in gs if fits_sum(A, B)]


def desk_triples() -> list:
    """(A, B, C) with both A ⊸ B and B ⊸ C in the family."""
    gs = desk_games()
    return [(A, B, C) for A in gs for B in gs for C in gs
            if fits_sum(A, B) and fits_sum(B, C)]
