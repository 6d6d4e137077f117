"""Game semantics for second-order affine multiplicative linear logic."""

from .games import (Game, FlatGame, Move, O, P, Polarity, I, boolean_game, make_flat_game,
                    stream_game, universe_game, tensor, lolli, with_, leq, switching_states)
from .strategies import (Strategy, check_strategy, enumerate_strategies, count_strategies,
                         is_history_free, table_strategy)
from .category import (Morphism, identity, compose, compose_hiding, compose_pointwise, copycat,
                       tensor_mor, curry, uncurry, apply_mor, pair, fst, snd, terminal)
from .winning import (Lasso, RefinedGame, All, Nothing, Atom, TensorW, LolliW, WithW, MeetW,
                      is_total, is_winning, winning_compose)
from .poly import (VariableType, InstanceFamily, build_pi, instantiate, poly_project,
                   second_order_curry, full_completeness_experiment, family_chain)
from .param import Relation, lift_check, rel_tensor, rel_lolli, rel_leq, rel_meet
from .lang import typecheck, denote

__version__ = "0.1.0"

__all__ = [
    "Game", "FlatGame", "Move", "O", "P", "Polarity", "I", "boolean_game", "make_flat_game",
    "stream_game", "universe_game", "tensor", "lolli", "with_", "leq", "switching_states",
    "Strategy", "check_strategy", "enumerate_strategies", "count_strategies",
    "is_history_free", "table_strategy", "Morphism", "identity", "compose", "compose_hiding",
    "compose_pointwise", "copycat", "tensor_mor", "curry", "uncurry", "apply_mor", "pair",
    "fst", "snd", "terminal", "Lasso", "RefinedGame", "All", "Nothing", "Atom", "TensorW",
    "LolliW", "WithW", "MeetW", "is_total", "is_winning", "winning_compose", "VariableType",
    "InstanceFamily", "build_pi", "instantiate", "poly_project", "second_order_curry",
    "full_completeness_experiment", "family_chain", "Relation", "lift_check", "rel_tensor",
    "rel_lolli", "rel_leq", "rel_meet", "typecheck", "denote",
]
