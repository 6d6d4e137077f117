"""Acceptance criteria 1-11.

Each test prints one line ``[PASS]`` / ``[FAIL]`` with the measured figures
and the time against its budget, then asserts.  Run standalone with
``python3 tests/test_acceptance.py`` or through pytest.
"""

from __future__ import annotations

import itertools
import time
from collections import defaultdict

import pytest

from arena.category import (Morphism, apply_mor, as_point, compose, compose_hiding,
                            compose_pointwise, covering_witness, curry, fst, identity,
                            interactions, morphisms, pair, snd, tensor_mor, terminal, uncurry,
                            _AC)
from arena.desk import desk_games, desk_pairs, desk_triples, fits_sum
from arena.games import (I, Move, O, P, boolean_game, lolli, make_flat_game, relabel,
                         stream_game, switching_states, tensor, with_)
from arena.strategies import Strategy, bottom, enumerate_strategies, is_history_free, table_strategy

B = boolean_game()


def report(emit, n, title, ok, detail, elapsed, budget):
    within = elapsed < budget
    verdict = "PASS" if ok and within else "FAIL"
    emit(f"[{verdict}] criterion {n:>2}: {title}: {detail} ({elapsed:.2f} s, budget {budget:g} s)")
    return ok and within


class timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0


_memo = {}


def homs(A, Bg):
    k = (A, Bg)
    if k not in _memo:
        _memo[k] = morphisms(A, Bg)
    return _memo[k]


_comp, _tens = {}, {}


def comp(x, y):
    """compose, memoised by value: distinct pairs often share a composite."""
    k = (x, y)
    r = _comp.get(k)
    if r is None:
        r = _comp[k] = compose(x, y)
    return r


def tens(x, y):
    k = (x, y)
    r = _tens.get(k)
    if r is None:
        r = _tens[k] = tensor_mor(x, y)
    return r


def mv(text):
    path, name = text.split(":") if ":" in text else ("", text)
    return Move(name, tuple(p for p in path.split(".") if p))


def play(*moves):
    return tuple(mv(m) for m in moves)


# -- 1 -----------------------------------------------------------------------------

def test_c01_boolean_census(emit):
    with timer() as t:
        found = set(enumerate_strategies(B))
        expected = {
            Strategy.closure(B, []),
            Strategy.closure(B, [play("*", "tt")]),
            Strategy.closure(B, [play("*", "ff")]),
        }
    ok = len(found) == 3 and found == expected
    assert report(emit, 1, "strategy census on B", ok, f"{len(found)} strategies, match={found == expected}",
                  t.elapsed, 1)


# -- 2 -----------------------------------------------------------------------------

def _neg():
    g = lolli(B, B)
    return Morphism(B, B, table_strategy(g, {mv("R:*"): mv("L:*"), mv("L:tt"): mv("R:ff"),
                                             mv("L:ff"): mv("R:tt")}))


def test_c02_boolean_complement(emit):
    with timer() as t:
        tt = Strategy.closure(B, [play("*", "tt")])
        ff = Strategy.closure(B, [play("*", "ff")])
        bot = bottom(B)
        neg = _neg()
        cases = [(bot, bot), (tt, ff), (ff, tt)]
        results = []
        for algo in ("hiding", "pointwise"):
            for x, y in cases:
                results.append(compose(as_point(x), neg, algo) == as_point(y))
    ok = all(results)
    assert report(emit, 2, "boolean complement", ok, f"{sum(results)}/6 composites as expected",
                  t.elapsed, 1)


# -- 3 and 6 -----------------------------------------------------------------------

_cut_stats = {}


def _sweep_cut():
    if _cut_stats:
        return _cut_stats
    n = bad = 0
    bij_fail = shape_fail = plays_checked = 0
    t0 = time.perf_counter()
    for A, Bg, C in desk_triples():
        for f in homs(A, Bg):
            for g in homs(Bg, C):
                n += 1
                h = compose_hiding(f, g)
                p = compose_pointwise(f, g)
                if h.plays != p.plays:
                    bad += 1
                inter = interactions(f, g)
                by_visible = defaultdict(list)
                for u in inter:
                    by_visible[relabel(u, _AC)].append(u)
                # ψ is onto the composite and injective on it
                if set(by_visible) != set(h.plays):
                    bij_fail += 1
                for s in h.plays:
                    plays_checked += 1
                    if len(by_visible[s]) != 1:
                        bij_fail += 1
                        continue
                    w = covering_witness(f, g, s, inter=by_visible[s])
                    if not _shape_ok(w):
                        shape_fail += 1
    _cut_stats.update(pairs=n, mismatches=bad, bij_fail=bij_fail, shape_fail=shape_fail,
                      plays=plays_checked, elapsed=time.perf_counter() - t0)
    return _cut_stats


def _shape_ok(w):
    """u = m₁ u₁ m₂ … u_{k-1} m_k with each u_i inside B."""
    u, visible = w.interaction, [m for m in w.interaction if m.path[0] != "B"]
    if relabel(u, _AC) != w.play or len(w.segments) != max(len(visible) - 1, 0):
        return False
    rebuilt = []
    for i, m in enumerate(visible):
        rebuilt.append(m)
        if i < len(w.segments):
            if any(x.path[0] != "B" for x in w.segments[i]):
                return False
            rebuilt.extend(w.segments[i])
    return tuple(rebuilt) == u


def test_c03_cut_oracle_equivalence(emit):
    s = _sweep_cut()
    ok = s["mismatches"] == 0 and s["pairs"] > 0
    detail = (f"{s['pairs']} strategy pairs over {len(desk_triples())} game triples "
              f"({len(desk_games())} games), {s['mismatches']} mismatches")
    assert report(emit, 3, "hiding ≡ pointwise", ok, detail, s["elapsed"], 60)


def test_c06_covering_lemma(emit):
    s = _sweep_cut()
    ok = s["bij_fail"] == 0 and s["shape_fail"] == 0 and s["plays"] > 0
    detail = (f"{s['plays']} composite plays, {s['bij_fail']} non-bijective, "
              f"{s['shape_fail']} bad shapes")
    # piggybacks on criterion 3, so shares its budget
    assert report(emit, 6, "covering lemma", ok, detail, s["elapsed"], 60)


# -- 4 -----------------------------------------------------------------------------

def _quadruples():
    gs = desk_games()
    for A, Bg, C in desk_triples():
        for D in gs:
            if fits_sum(C, D):
                yield A, Bg, C, D


def _tensor_pairs():
    """(A, A′, B, B′) with (A⊗A′) ⊸ (B⊗B′) inside the desk bounds, A, B ≠ I
    on at least one side so the laws are not vacuous."""
    for (A, Bg), (A2, B2) in itertools.product(desk_pairs(), repeat=2):
        if fits_sum(A, A2, Bg, B2):
            yield A, A2, Bg, B2


def _law_identity():
    n = bad = 0
    for A, Bg in desk_pairs():
        for f in homs(A, Bg):
            for algo in ("hiding", "pointwise"):
                n += 1
                bad += compose(identity(A), f, algo) != f or compose(f, identity(Bg), algo) != f
    return n, bad


def _law_assoc():
    n = bad = 0
    for A, Bg, C, D in _quadruples():
        for f in homs(A, Bg):
            for g in homs(Bg, C):
                fg = comp(f, g)
                for h in homs(C, D):
                    n += 1
                    bad += comp(fg, h) != comp(f, comp(g, h))
    return n, bad


def _law_tensor():
    n = bad = 0
    seen = set()
    for A, A2, Bg, B2 in _tensor_pairs():
        n += 1
        bad += tensor_mor(identity(A), identity(A2)) != identity(tensor(A, A2))
        for C, C2 in itertools.product(desk_games(), repeat=2):
            if not fits_sum(Bg, B2, C, C2):
                continue
            key = (A, A2, Bg, B2, C, C2)
            if key in seen:
                continue
            seen.add(key)
            for f, g in itertools.product(homs(A, Bg), homs(Bg, C)):
                for f2, g2 in itertools.product(homs(A2, B2), homs(B2, C2)):
                    n += 1
                    lhs = comp(tens(f, f2), tens(g, g2))
                    rhs = tens(comp(f, g), comp(f2, g2))
                    bad += lhs != rhs
    return n, bad


def _law_closed():
    """β: Ap ∘ (Λσ ⊗ id) = σ, uncurry ∘ curry = id; η: Λ(Ap ∘ (τ ⊗ id)) = τ."""
    n = bad = 0
    gs = desk_games()
    for A, Bg, C in itertools.product(gs, repeat=3):
        if not fits_sum(A, Bg, C):
            continue
        dom = tensor(A, Bg)
        for s in homs(dom, C):
            n += 1
            lam = curry(s)
            beta = compose(tensor_mor(lam, identity(Bg)), apply_mor(Bg, C))
            bad += beta != s or uncurry(lam) != s
        for tau in homs(A, lolli(Bg, C)):
            n += 1
            eta = curry(compose(tensor_mor(tau, identity(Bg)), apply_mor(Bg, C)))
            bad += eta != tau
    return n, bad


def _law_products():
    n = bad = 0
    gs = desk_games()
    for A, Bg, C in itertools.product(gs, repeat=3):
        if not fits_sum(C, A, Bg):
            continue
        for f in homs(C, A):
            for g in homs(C, Bg):
                n += 1
                p = pair(f, g)
                bad += compose(p, fst(A, Bg)) != f or compose(p, snd(A, Bg)) != g
        for h in homs(C, with_(A, Bg)):
            n += 1
            bad += pair(compose(h, fst(A, Bg)), compose(h, snd(A, Bg))) != h
    return n, bad


def _law_terminal():
    n = bad = 0
    for A in desk_games():
        n += 1
        hs = homs(A, I)
        bad += len(hs) != 1 or hs[0] != terminal(A)
    return n, bad


def test_c04_category_laws(emit):
    with timer() as t:
        laws = {
            "identity": _law_identity(),
            "assoc": _law_assoc(),
            "tensor": _law_tensor(),
            "closed": _law_closed(),
            "products": _law_products(),
            "terminal": _law_terminal(),
        }
    ok = all(bad == 0 and n > 0 for n, bad in laws.values())
    detail = ", ".join(f"{k} {n - bad}/{n}" for k, (n, bad) in laws.items())
    assert report(emit, 4, "category and monoidal laws", ok, detail, t.elapsed, 300)


# -- 5 -----------------------------------------------------------------------------

def _alternating_words(G, depth):
    """Every alternating word over M_G up to ``depth``, game membership aside."""
    out = [()]
    frontier = [()]
    for _ in range(depth):
        nxt = []
        for w in frontier:
            want = O if len(w) % 2 == 0 else P
            nxt.extend(w + (m,) for m in G.moves_of(want))
        out.extend(nxt)
        frontier = nxt
    return out


def test_c05_switching_conditions(emit):
    with timer() as t:
        figures = {}
        ok = True
        for name, G, forbidden in (("B⊗B", tensor(B, B), (P, P)), ("B⊸B", lolli(B, B), (O, O))):
            words = _alternating_words(G, 6)
            plays = violations = bad_states = 0
            agree = True
            for w in words:
                trace, violation = switching_states(G, w)
                comps_ok = (G.left.contains(relabel_side(w, "L"))
                            and G.right.contains(relabel_side(w, "R")))
                if G.contains(w):
                    plays += 1
                    violations += violation is not None
                    bad_states += forbidden in trace
                # a component-legal word is a play exactly when it switches legally
                if comps_ok and (violation is None) != G.contains(w):
                    agree = False
            ok &= violations == 0 and bad_states == 0 and agree and plays > 0
            figures[name] = f"{len(words)} words, {plays} plays, {violations} violations, {bad_states} {forbidden[0]}{forbidden[1]}-states"
    assert report(emit, 5, "switching conditions", ok, "; ".join(f"{k}: {v}" for k, v in figures.items()),
                  t.elapsed, 10)


def relabel_side(w, side):
    from arena.games import restrict
    return restrict(w, (side,))


# -- 7 -----------------------------------------------------------------------------

def _refined_objects():
    from arena.winning import All, Atom, LolliW, TensorW
    BB = tensor(B, B)
    finite = [(I, All()), (B, All()), (BB, TensorW(All(), All())), (lolli(B, B), LolliW(All(), All()))]
    S = stream_game(4)
    streams = [(I, All())] + [(S, w) for w in
                              (All(), Atom("loop-contains", "0"), Atom("loop-avoids", "1"))]
    return finite, streams


def _winning_homs(A, WA, C, WC, history_free):
    from arena.poly import hf_total_strategies, table_closure
    from arena.winning import LolliW, RefinedGame, is_winning
    G = lolli(A, C)
    if history_free:
        cands = [Morphism(A, C, table_closure(G, t)) for t in hf_total_strategies(G)]
    else:
        cands = homs(A, C)
    R = RefinedGame(G, LolliW(WA, WC))
    return [m for m in cands if is_winning(m.strategy, R)]


def _chattering_pair():
    """σ: I → Str always answers 0; τ: Str → B keeps asking for another bit."""
    S = stream_game(4)
    sigma = Morphism(I, S, table_strategy(lolli(I, S), {mv("R:*"): mv("R:0")}))
    tau = Morphism(S, B, table_strategy(lolli(S, B), {
        mv("R:*"): mv("L:*"), mv("L:0"): mv("L:*"), mv("L:1"): mv("L:*")}))
    return sigma, tau


def test_c07_winning_composition(emit):
    from arena.winning import All, LolliW, RefinedGame, is_total, is_winning, winning_compose
    with timer() as t:
        finite, streams = _refined_objects()
        pairs = good = 0
        for objs, hf, cap in ((finite, False, 6), (streams, True, None)):
            for (A, WA), (Bg, WB), (C, WC) in itertools.product(objs, repeat=3):
                if Bg == I:
                    continue
                if cap is not None and (len(A.moves) + len(Bg.moves) > cap
                                        or len(Bg.moves) + len(C.moves) > cap):
                    continue
                fs = _winning_homs(A, WA, Bg, WB, hf)
                gs = _winning_homs(Bg, WB, C, WC, hf)
                for f in fs:
                    for g in gs:
                        pairs += 1
                        v = winning_compose(f, g, WA, WB, WC, strict=True)
                        h = v.composite.strategy
                        won = is_winning(h, RefinedGame(h.game, LolliW(WA, WC)))
                        good += (v.status == "winning" and is_total(h).status == "total"
                                 and bool(won))
        sigma, tau = _chattering_pair()
        v = winning_compose(sigma, tau, All(), All(), All())
        tau_total = is_total(tau.strategy).status == "total"
        tau_wins = bool(is_winning(tau.strategy, RefinedGame(tau.strategy.game, LolliW(All(), All()))))
        lasso_ok = (v.status == "chattering" and v.lasso is not None
                    and all(m.path == () for m in v.lasso.loop))
    ok = pairs > 0 and good == pairs and tau_total and not tau_wins and lasso_ok
    detail = (f"{good}/{pairs} winning pairs compose to winning strategies; "
              f"chattering pair: τ total={tau_total}, winning={tau_wins}, B-lasso {v.lasso}")
    assert report(emit, 7, "winning composition", ok, detail, t.elapsed, 60)


# -- 8 and 9 -------------------------------------------------------------------------

_census = {}


def census(ty, fam, history_free=True):
    from arena.poly import full_completeness_experiment
    key = (ty, fam.name, history_free)
    if key not in _census:
        _census[key] = full_completeness_experiment(ty, fam, history_free=history_free)
    return _census[key]


K_COMBINATORS = "forall X. X -o (X -o X)"
SWAP_TYPE = "forall X. (X * X) -o (X * X)"
X1, X2, X3 = ("L",), ("R", "L"), ("R", "R")


def test_c08_full_completeness(emit):
    from arena.poly import classify, family_chain
    from arena.winning import All, RefinedGame, is_total, is_winning
    with timer() as t:
        fams = family_chain()
        sizes = [len(f) for f in fams]
        growing = all(set(a.games) < set(b.games) for a, b in zip(fams, fams[1:]))
        k_counts, k_links, t_counts, t_links = [], [], [], []
        for fam in fams:
            c = census(K_COMBINATORS, fam)
            k_counts.append(c.count)
            k_links.append({frozenset(links) for _, links in c.survivors if links})
            c = census(SWAP_TYPE, fam)
            t_counts.append(c.count)
            t_links.append({frozenset(links) for _, links in c.survivors if links})
        k_expect = {frozenset({(X1, X3)}), frozenset({(X2, X3)})}
        ident = ((("L", "L"), ("R", "L")), (("L", "R"), ("R", "R")))
        twist = ((("L", "L"), ("R", "R")), (("L", "R"), ("R", "L")))
        t_expect = {frozenset(ident), frozenset(twist)}
        hunt_rows = []
        for fam in fams:
            c = census(K_COMBINATORS, fam, history_free=False)
            h = c.hunt
            Pi = c.game
            hunt_rows.append((c.total_count, h is not None and is_total(h).status == "total"
                              and bool(is_winning(h, RefinedGame(Pi, All())))
                              and not is_history_free(h) and classify(h, c.type) is None))
    ok = (growing and k_counts == [2, 2, 2] and all(l == k_expect for l in k_links)
          and t_counts == [2, 2, 2] and all(l == t_expect for l in t_links)
          and all(n >= 3 and hunt for n, hunt in hunt_rows))
    detail = (f"families {sizes}; Π(X⊸X⊸X) HF winning {k_counts}; "
              f"Π((X⊗X)⊸(X⊗X)) {t_counts} (identity+twist: {all(l == t_expect for l in t_links)}); "
              f"non-HF totals {[n for n, _ in hunt_rows]}, Hunt found {[h for _, h in hunt_rows]}")
    assert report(emit, 8, "full completeness censuses", ok, detail, t.elapsed, 600)


def test_c09_definability(emit):
    from arena.lang import denote
    from arena.poly import family_chain
    with timer() as t:
        results = []
        for fam in family_chain():
            survivors = {frozenset(s.plays) for s, _ in census(K_COMBINATORS, fam).survivors}
            dens = {frozenset(denote(src, fam).plays)
                    for src in (r"/\X. \x:X. \y:X. x", r"/\X. \x:X. \y:X. y")}
            results.append(dens == survivors and len(dens) == 2)
    ok = all(results)
    # census time is charged to criterion 8
    assert report(emit, 9, "definability", ok, f"denotations = survivors on {results}", t.elapsed, 10)


# -- 11 ------------------------------------------------------------------------------

def _stream_specs():
    from arena.winning import All, Atom, Nothing
    return [All(), Nothing(), Atom("loop-contains", "0"), Atom("loop-contains", "1"),
            Atom("loop-avoids", "0"), Atom("loop-avoids", "1"), Atom("stem-at-most", "1"),
            Atom("stem-at-most", "3")]


def test_c11_winning_meet(emit):
    from arena.param import winning_meet_check
    from arena.winning import game_lassos
    with timer() as t:
        pool = _stream_specs()
        checked = failures = 0
        n_lassos = []
        for depth in (2, 4):
            S = stream_game(depth)
            lassos = game_lassos(S, 6)
            n_lassos.append(len(lassos))
            for k in (1, 2, 3):
                for specs in itertools.combinations(pool, k):
                    checked += 1
                    if winning_meet_check(list(specs), pool, S, lassos, lasso_budget=6) is not None:
                        failures += 1
    ok = checked > 0 and failures == 0
    detail = f"{checked} spec families over Str2/Str4 ({n_lassos} lassos), {failures} failures"
    assert report(emit, 11, "winning-meet specialisation", ok, detail, t.elapsed, 10)


# -- 10 ------------------------------------------------------------------------------

REL_LIMIT = 40  # relations per game pair; keeps the quadratic order sweep bounded


def _relation_games():
    return [g for g in desk_games() if len(g.plays) <= 6]


def _relation_spaces():
    from arena.games import GameError
    from arena.param import enumerate_relations
    out = []
    for A, C in itertools.product(_relation_games(), repeat=2):
        try:
            rels = enumerate_relations(A, C, limit=REL_LIMIT)
        except GameError:
            continue
        if len(rels) <= REL_LIMIT:
            out.append((A, C, rels))
    return out


def _chain(n):
    return make_flat_game([tuple(("o", "p")[i % 2] for i in range(n))], {"o": O, "p": P},
                          name=f"c{n}")


def _cut_games():
    return [I, _chain(1), _chain(2), B]


def test_c10_parametricity(emit):
    from arena.param import cut_law_sweep, is_glb, rel_leq, rel_leq_definitional, rel_meet
    with timer() as t:
        spaces = _relation_spaces()
        order = order_bad = glb_bad = 0
        for A, C, rels in spaces:
            for r, s in itertools.product(rels, repeat=2):
                order += 1
                order_bad += rel_leq(r, s) != rel_leq_definitional(r, s)
                glb_bad += is_glb(rel_meet([r, s]), [r, s], rels) is not None
        cut = cut_bad = 0
        gs = _cut_games()
        for A, Bg, C in itertools.product(gs, repeat=3):
            if Bg == I:
                continue
            n, bad = cut_law_sweep(A, A, Bg, Bg, C, C)
            cut += n
            cut_bad += bad
        # heterogeneous sides: differently shaped games on the left and right
        for sides in (((_chain(1), _chain(2)), (B, B), (_chain(1), _chain(2))),
                      ((B, _chain(2)), (_chain(2), B), (B, B))):
            (A, A2), (Bg, B2), (C, C2) = sides
            n, bad = cut_law_sweep(A, A2, Bg, B2, C, C2)
            cut += n
            cut_bad += bad
    ok = order_bad == 0 and glb_bad == 0 and cut_bad == 0 and order > 0 and cut > 0
    detail = (f"{len(spaces)} game pairs, {order} relation pairs: order mismatches {order_bad}, "
              f"glb failures {glb_bad}; cut law {cut} instances, {cut_bad} failures")
    assert report(emit, 10, "parametricity suite", ok, detail, t.elapsed, 300)


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
