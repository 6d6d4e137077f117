"""JSON formats for games, strategies, refined games and relations.

A *moveref* is the string ``"L.R:name"`` (path, colon, name; a bare name
for the empty path).  A *gameref* is an inline game object, a builtin name,
a path to a JSON file, or a closed type such as ``"B -o B"``.
"""

from __future__ import annotations

import json
import os
import re

from .games import (FlatGame, Game, Move, Polarity, boolean_game, make_flat_game, parse_move, stream_game, universe_game,
                    I)
from .strategies import Strategy, table_strategy
from .winning import All, RefinedGame, spec_from_json


class FormatError(Exception):
    pass


def move_ref(m: Move) -> str:
    return str(m)


def play_ref(s) -> list:
    return [str(m) for m in s]


def parse_play(refs) -> tuple:
    if isinstance(refs, str):
        refs = refs.split()
    return tuple(parse_move(r) for r in refs)


def _play_order(s):
    return (len(s), [m.sort_key() for m in s])


# -- games -----------------------------------------------------------------------

def game_to_json(G: Game) -> dict:
    return {
        "moves": [{"name": m.name, "path": ".".join(m.path), "polarity": p.value}
                  for m, p in G.moves.items()],
        "plays": [play_ref(s) for s in sorted(G.plays, key=_play_order) if s],
    }


def game_from_json(d: dict, name=None) -> FlatGame:
    try:
        pol = {}
        for mv in d["moves"]:
            path = tuple(x for x in str(mv.get("path", "")).split(".") if x)
            pol[Move(mv["name"], path)] = Polarity(mv["polarity"])
        plays = [parse_play(s) for s in d.get("plays", [])]
    except (KeyError, TypeError, ValueError) as e:
        raise FormatError(f"malformed game: {e}") from None
    return make_flat_game(plays, pol, name=name or d.get("name"))


_BUILTIN = {"B": boolean_game, "bool": boolean_game, "I": lambda: I}


def builtin_game(name: str):
    if name in _BUILTIN:
        return _BUILTIN[name]()
    m = re.fullmatch(r"Str(\d+)", name)
    if m:
        return stream_game(int(m.group(1)))
    m = re.fullmatch(r"U(\d+)", name)
    if m:
        return universe_game(("0", "1"), int(m.group(1)))
    return None


def load_json(path: str):
    try:
        with open(path) as f:
            return json.load(f)
    except OSError as e:
        raise FormatError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise FormatError(f"{path}:{e.lineno}:{e.colno}: {e.msg}") from None


def resolve_game(ref, family=None) -> Game:
    if isinstance(ref, Game):
        return ref
    if isinstance(ref, dict):
        if "game" in ref and "moves" not in ref:
            return resolve_game(ref["game"], family)
        return game_from_json(ref)
    if not isinstance(ref, str):
        raise FormatError(f"not a game reference: {ref!r}")
    g = builtin_game(ref)
    if g is not None:
        return g
    if os.path.exists(ref):
        return resolve_game(load_json(ref), family)
    from .lang import denote_type
    from .syntax import ParseError
    try:
        return denote_type(ref, family)
    except ParseError as e:
        raise FormatError(f"not a game, file or type: {ref!r} ({e})") from None


# -- strategies ------------------------------------------------------------------

def strategy_to_json(sigma: Strategy, game_ref=None) -> dict:
    return {"game": game_ref if game_ref is not None else game_to_json(sigma.game),
            "plays": [play_ref(s) for s in sigma.maximal() if s]}


def strategy_from_json(d: dict, family=None, check=True) -> Strategy:
    if not isinstance(d, dict) or "game" not in d:
        raise FormatError("a strategy needs a 'game' field")
    G = resolve_game(d["game"], family)
    if "table" in d:
        try:
            table = {parse_move(e["on"]): parse_move(e["play"]) for e in d["table"]}
        except (KeyError, TypeError) as e:
            raise FormatError(f"malformed table: {e}") from None
        return table_strategy(G, table, check=check)
    if "plays" not in d:
        raise FormatError("a strategy needs 'plays' or 'table'")
    return Strategy.closure(G, [parse_play(s) for s in d["plays"]], check=check)


def load_strategy(ref, family=None, check=True) -> Strategy:
    d = load_json(ref) if isinstance(ref, str) else ref
    return strategy_from_json(d, family, check)


# -- refined games and relations ------------------------------------------------------

def refined_from_json(d: dict, family=None) -> RefinedGame:
    G = resolve_game(d.get("game", d), family)
    W = spec_from_json(d["winning"]) if "winning" in d else All()
    return RefinedGame(G, W)


def refined_to_json(R: RefinedGame) -> dict:
    return {**game_to_json(R.game), "winning": R.W.to_json()}


def relation_from_json(d: dict, family=None):
    from .param import Relation
    try:
        A, B = resolve_game(d["left"], family), resolve_game(d["right"], family)
        pairs = {(parse_play(s), parse_play(t)) for s, t in d["pairs"]}
    except (KeyError, TypeError, ValueError) as e:
        raise FormatError(f"malformed relation: {e}") from None
    pairs.add(((), ()))
    return Relation(A, B, frozenset(pairs))


def relation_to_json(Rel, left_ref=None, right_ref=None) -> dict:
    return {"left": left_ref if left_ref is not None else game_to_json(Rel.left),
            "right": right_ref if right_ref is not None else game_to_json(Rel.right),
            "pairs": [[play_ref(s), play_ref(t)] for s, t in Rel.sorted_pairs()]}


def detect_kind(d) -> str:
    if not isinstance(d, dict):
        raise FormatError("expected a JSON object")
    if "pairs" in d:
        return "relation"
    if "moves" in d:
        return "refined" if "winning" in d else "game"
    if "game" in d:
        return "strategy"
    raise FormatError("unrecognised document")
