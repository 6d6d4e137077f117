"""``arena``: command-line front end.

Exit codes: 0 success, 1 verdict failure (witness printed), 2 usage or
format error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass, field

from . import io
from .category import DomainMismatch, Morphism, as_point, compose, compose_hiding, from_point
from .games import GameError, I, LolliGame, parse_move, show_play
from .strategies import (BudgetExceeded, InvalidStrategy, Strategy, StrategyError, check_strategy,
                         count_strategies, enumerate_strategies)
from .syntax import ParseError, show_type

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class Report:
    code: int = EXIT_OK
    lines: list = field(default_factory=list)
    data: dict = field(default_factory=dict)

    def say(self, line=""):
        self.lines.append(line)

    def fail(self, line):
        self.code = EXIT_FAIL
        self.lines.append(line)


def fmt_strategy(sigma: Strategy) -> str:
    top = [s for s in sigma.maximal() if s]
    if not top:
        return "{ε}"
    return "Pref{" + "; ".join(show_play(s) for s in top) + "}"


def _as_morphism(sigma: Strategy) -> Morphism:
    g = sigma.game
    if isinstance(g, LolliGame):
        return Morphism(g.left, g.right, sigma)
    return as_point(sigma)


def _show_result(m: Morphism) -> str:
    return fmt_strategy(from_point(m) if m.dom == I else m.strategy)


# -- commands ---------------------------------------------------------------------

def cmd_validate(args, rep: Report):
    d = io.load_json(args.file)
    kind = io.detect_kind(d)
    rep.data["kind"] = kind
    if kind in ("game", "refined"):
        g = io.game_from_json(d)
        rep.say(f"valid {kind}: {len(g.moves)} moves, {len(g.plays)} plays")
        if kind == "refined":
            io.refined_from_json(d)
        rep.data.update(moves=len(g.moves), plays=len(g.plays))
    elif kind == "strategy":
        sigma = io.load_strategy(d, check=False)
        v = check_strategy(sigma.plays, sigma.game)
        rep.data["verdict"] = str(v)
        if v:
            rep.say(f"valid strategy: {len(sigma.plays)} plays")
        else:
            rep.fail(f"invalid strategy: {v}")
    else:
        Rel = io.relation_from_json(d)
        rep.say(f"valid relation: {len(Rel.pairs)} pairs")
        rep.data["pairs"] = len(Rel.pairs)


def cmd_compose(args, rep: Report):
    sigma = _as_morphism(io.load_strategy(args.first))
    tau = _as_morphism(io.load_strategy(args.second))
    if sigma.cod != tau.dom:
        raise DomainMismatch(f"cannot compose: {sigma.cod!r} is not {tau.dom!r}")
    algos = ["hiding", "pointwise"] if args.algo == "both" else [args.algo]
    results = {}
    for algo in algos:
        results[algo] = compose(sigma, tau, algo)
        rep.say(f"{algo + ':':<11}{_show_result(results[algo])}")
    rep.data["composites"] = {a: [io.play_ref(s) for s in m.strategy.maximal()] for a, m in results.items()}
    hiding = results.get("hiding") or compose_hiding(sigma, tau)
    divs = hiding.divergences
    if divs:
        rep.data["divergences"] = [str(d) for d in divs]
        msg = f"possible divergence: {divs[0]}"
        if args.allow_divergence:
            rep.say(msg)
        else:
            rep.fail(msg)
    if len(results) == 2:
        same = results["hiding"].strategy == results["pointwise"].strategy
        rep.data["agree"] = same
        if same:
            rep.say("algorithms agree")
        else:
            rep.fail("algorithms DISAGREE")


def cmd_enumerate(args, rep: Report):
    G = io.resolve_game(args.game)
    todo = enumerate_strategies(G, history_free_only=args.hf, limit=args.limit)
    label = "history-free strategies" if args.hf else "strategies"
    rep.say(f"{len(todo)} {label}")
    shown = todo
    if args.sample is not None and args.sample < len(todo):
        rng = random.Random(args.seed)
        shown = sorted(rng.sample(range(len(todo)), args.sample))
        shown = [todo[i] for i in shown]
    for i, s in enumerate(shown, 1):
        rep.say(f"  {i}. {fmt_strategy(s)}")
    rep.data.update(count=len(todo), strategies=[[io.play_ref(p) for p in s.maximal()] for s in shown])


def cmd_check(args, rep: Report):
    from .winning import All, RefinedGame, is_total, is_winning, spec_from_json
    if args.relation:
        from .param import lift_check
        if not (args.sigma and args.tau):
            raise UsageError("--relation needs --sigma and --tau")
        Rel = io.relation_from_json(io.load_json(args.relation))
        sigma, tau = io.load_strategy(args.sigma), io.load_strategy(args.tau)
        v = lift_check(Rel, sigma, tau)
        rep.data["holds"] = v.holds
        if v:
            rep.say("relation lifts: R̂(σ, τ) holds")
        else:
            s, a, t, a2 = v.witness
            rep.fail(f"relation does not lift ({v.clause}): s={show_play(s)} a={a} t={show_play(t)} a'={a2}")
        return
    if not args.strategy:
        raise UsageError("check needs a strategy file (or --relation)")
    doc = io.load_json(args.strategy)
    sigma = io.strategy_from_json(doc)
    if not (args.total or args.winning is not None):
        args.total = True
    if args.total:
        t = is_total(sigma)
        rep.data["total"] = t.status
        if t.status == "total":
            rep.say("total")
        else:
            rep.fail(f"{t.status} at {show_play(t.witness)}")
    if args.winning is not None:
        if args.winning:
            wd = io.load_json(args.winning)
            W = spec_from_json(wd["winning"] if "winning" in wd else wd)
        elif isinstance(doc.get("game"), dict) and "winning" in doc["game"]:
            W = spec_from_json(doc["game"]["winning"])
        else:
            W = All()
        v = is_winning(sigma, RefinedGame(sigma.game, W), args.lasso_budget)
        rep.data["winning"] = v.status
        wit = f": {v.witness}" if v.witness is not None and not isinstance(v.witness, tuple) \
            else (f" at {show_play(v.witness)}" if v.witness else "")
        if v:
            rep.say("winning" + (f" ({v.reason})" if v.reason else ""))
        else:
            rep.fail(f"{v.status} ({v.reason}){wit}")


def cmd_denote(args, rep: Report):
    from .lang import denote, typecheck
    from .syntax import alpha_eq, parse_term, parse_type
    from .poly import family_by_size
    term = parse_term(args.term)
    ty = typecheck(term)
    rep.say(f"type: {show_type(ty)}")
    rep.data["type"] = str(ty)
    if args.type:
        want = parse_type(args.type)
        if not alpha_eq(want, ty):
            rep.fail(f"type mismatch: expected {want}")
            return
    fam = family_by_size(args.family_size)
    sigma = denote(term, fam, args.depth)
    rep.say(f"denotation: {fmt_strategy(sigma)}")
    rep.data["plays"] = [io.play_ref(s) for s in sigma.maximal()]
    if args.out:
        with open(args.out, "w") as f:
            json.dump(io.strategy_to_json(sigma), f, indent=1, ensure_ascii=False)
            f.write("\n")
        rep.say(f"wrote {args.out}")


def cmd_pi(args, rep: Report):
    from .poly import (VariableType, full_completeness_experiment, family_by_size, build_pi,
                       hf_total_strategies, table_closure, show_links, classify)
    from .strategies import is_history_free
    from .winning import All, RefinedGame, is_winning
    F = VariableType.of(args.type)
    if F.arity != 1:
        raise UsageError("pi needs a type with exactly one quantified variable")
    fam = family_by_size(args.family_size)
    Pi = build_pi(F, fam, args.depth)
    rep.say(f"{Pi.name} over {fam!r}: {len(Pi.plays)} plays")
    rep.data.update(family=repr(fam), plays=len(Pi.plays))
    if args.hf:
        if args.winning:
            census = full_completeness_experiment(F, fam, args.depth, args.lasso_budget, limit=args.limit)
            found = census.survivors
            label = "winning history-free strategies"
        else:
            found = []
            for t in hf_total_strategies(Pi, args.limit, total=False):
                s = table_closure(Pi, t)
                if is_history_free(s):
                    found.append((s, classify(s, F)))
            label = "history-free strategies"
        rep.say(f"{len(found)} {label}")
        for i, (s, links) in enumerate(found, 1):
            desc = f"copy-cat {show_links(links)}" if links else fmt_strategy(s)
            rep.say(f"  {i}. {desc}")
        rep.data["count"] = len(found)
        rep.data["strategies"] = [show_links(l) if l else None for _, l in found]
    else:
        n = count_strategies(Pi, total_only=args.winning)
        label = "winning strategies" if args.winning else "strategies"
        rep.say(f"{n} {label}")
        rep.data["count"] = n
        if args.winning:
            census = full_completeness_experiment(F, fam, args.depth, history_free=False)
            if census.hunt is not None:
                h = census.hunt
                ok = bool(is_winning(h, RefinedGame(Pi, All()), args.lasso_budget))
                hf = is_history_free(h)
                rep.say(f"Hunt's strategy: {'winning' if ok else 'not winning'}, "
                        f"{'history-free' if hf else 'not history-free'}")
                rep.data["hunt"] = {"winning": ok, "history_free": hf}


def interactive_play(sigma: Strategy, read, write) -> tuple:
    """Opponent moves come from ``read()`` (``None`` at end of input); returns
    the transcript reached when the session ends."""
    g = sigma.game
    s = ()
    history = []
    stuck = False  # Player has no response at the odd position s
    while True:
        legal = [] if stuck else g.extensions(s)
        if stuck:
            write(f"position {show_play(s)}: no response")
        elif legal:
            write(f"position {show_play(s)}; legal: {' '.join(str(m) for m in legal)}")
        else:
            write(f"position {show_play(s)}: no legal Opponent move")
        line = read()
        if line is None or line.strip() == ":quit":
            return s
        line = line.strip()
        if not line:
            continue
        if line == ":legal":
            write("legal: " + (" ".join(str(m) for m in legal) or "none"))
            continue
        if line == ":undo":
            if history:
                s = history.pop()
                stuck = False
            write(f"back to {show_play(s)}")
            continue
        a = parse_move(line)
        if a not in legal:
            write(f"illegal move {line}")
            continue
        history.append(s)
        b = sigma.response(s + (a,))
        if b is None:
            write(f"O {a}  P has no response")
            s, stuck = s + (a,), True
        else:
            s = s + (a, b)
            write(f"O {a}  P {b}")


def cmd_play(args, rep: Report):
    sigma = io.load_strategy(args.strategy)
    stream = sys.stdin

    def read():
        # prompt on stderr keeps stdout a clean log when input is piped
        sys.stderr.write("> ")
        sys.stderr.flush()
        line = stream.readline()
        return line if line else None

    def write(msg):
        print(msg)

    s = interactive_play(sigma, read, write)
    sigma.game.check_play(s)
    rep.say(f"transcript: {show_play(s)}")
    rep.data["transcript"] = io.play_ref(s)


# -- parser ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="arena", description="Games, strategies and the polymorphic model.")
    p.add_argument("--json", action="store_true", help="machine-readable report")
    p.add_argument("--seed", type=int, default=0, help="seed for randomised choices")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", help="validate a game, strategy or relation file")
    v.add_argument("file")
    v.set_defaults(run=cmd_validate)

    c = sub.add_parser("compose", help="compose two strategies")
    c.add_argument("first")
    c.add_argument("second")
    c.add_argument("--algo", choices=["hiding", "pointwise", "both"], default="hiding")
    c.add_argument("--allow-divergence", action="store_true")
    c.set_defaults(run=cmd_compose)

    e = sub.add_parser("enumerate", help="list the strategies on a finite game")
    e.add_argument("game")
    e.add_argument("--hf", action="store_true", help="history-free strategies only")
    e.add_argument("--limit", type=int, default=10**5)
    e.add_argument("--sample", type=int, help="print a seeded random sample")
    e.set_defaults(run=cmd_enumerate)

    k = sub.add_parser("check", help="totality, winning or relational checks")
    k.add_argument("strategy", nargs="?")
    k.add_argument("--total", action="store_true")
    k.add_argument("--winning", nargs="?", const="", default=None, metavar="SPEC")
    k.add_argument("--lasso-budget", type=int, default=8)
    k.add_argument("--relation")
    k.add_argument("--sigma")
    k.add_argument("--tau")
    k.set_defaults(run=cmd_check)

    d = sub.add_parser("denote", help="type and denote a closed term")
    d.add_argument("term")
    d.add_argument("--type")
    d.add_argument("--out")
    d.add_argument("--family-size", type=int, default=3)
    d.add_argument("--depth", type=int)
    d.set_defaults(run=cmd_denote)

    q = sub.add_parser("pi", help="strategy census on a quantified type")
    q.add_argument("--type", required=True)
    q.add_argument("--family-size", type=int, default=3)
    q.add_argument("--depth", type=int)
    q.add_argument("--hf", action="store_true")
    q.add_argument("--winning", action="store_true")
    q.add_argument("--lasso-budget", type=int, default=8)
    q.add_argument("--limit", type=int, default=10**6)
    q.set_defaults(run=cmd_pi)

    y = sub.add_parser("play", help="play Opponent against a strategy")
    y.add_argument("strategy")
    y.set_defaults(run=cmd_play)
    return p


def run(argv=None) -> Report:
    parser = build_parser()
    args = parser.parse_args(argv)
    rep = Report()
    try:
        args.run(args, rep)
    except (io.FormatError, ParseError, UsageError, GameError, InvalidStrategy, DomainMismatch,
            ValueError) as e:
        rep.code = EXIT_USAGE
        rep.lines.append(f"error: {e}")
        rep.data["error"] = str(e)
    except (BudgetExceeded, StrategyError) as e:
        rep.code = EXIT_FAIL
        rep.lines.append(f"failed: {e}")
        rep.data["error"] = str(e)
    except Exception as e:
        from .lang import TypeError_, NotDefinable
        if isinstance(e, (TypeError_, NotDefinable)):
            rep.code = EXIT_FAIL
            rep.lines.append(f"{type(e).__name__} [{getattr(e, 'rule', '')}]: {e}".replace(" []", ""))
            rep.data["error"] = str(e)
        else:
            raise
    rep.data.setdefault("command", args.command)
    rep.data["exit"] = rep.code
    if args.json:
        print(json.dumps(rep.data, sort_keys=True, ensure_ascii=False))
    else:
        for line in rep.lines:
            print(line)
    return rep


def main(argv=None) -> int:
    return run(argv).code


if __name__ == "__main__":
    sys.exit(main())
