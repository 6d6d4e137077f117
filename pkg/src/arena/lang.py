"""Affine second-order terms: typing and strategy denotations.

A context ``x1:A1, ..., xn:An`` is interpreted as the left-nested tensor
``((I ⊗ A1) ⊗ ...) ⊗ An`` so that extending it is literally ``Γ ⊗ A`` and
λ-abstraction is currying.
"""

from __future__ import annotations

from dataclasses import dataclass

from .category import (Morphism, apply_mor, compose, copycat, curry, fst, from_point, identity,
                       pair, snd, tensor_mor)
from .games import Game, I, boolean_game, lolli, tensor
from .poly import InstanceFamily, build_pi, family_by_size, poly_project, second_order_curry, \
    VariableType, _interp
from .strategies import Strategy
from .syntax import (App, Const, LetPair, Lam, Pair, Proj, TApp, TBin, TBool, TForall, TLam, TUnit,
                     Term, Type, Var, WithPair, alpha_eq, parse_term, parse_type, subst_type, Lolli,
                     Tensor, With)

L, R = ("L",), ("R",)


class TypeError_(Exception):
    rule = "typing"


class UnboundVariable(TypeError_):
    rule = "var"


class NonAffineUse(TypeError_):
    rule = "affine"


class ScopeViolation(TypeError_):
    rule = "forall-intro"


class TypeMismatch(TypeError_):
    rule = "mismatch"


class NotDefinable(Exception):
    pass


CONSTANTS = {
    "tt": TBool(),
    "ff": TBool(),
    "not": Lolli(TBool(), TBool()),
    "unit": TUnit(),
}


# -- typing ---------------------------------------------------------------------


def typecheck(t, ctx=None) -> Type:
    """The type of ``t`` under the affine discipline."""
    if isinstance(t, str):
        t = parse_term(t)
    ty, _ = _check(t, dict(ctx or {}), frozenset())
    return ty


def _scope(ty: Type, tvars):
    free = ty.free_vars() - tvars
    if free:
        raise ScopeViolation(f"type variable {sorted(free)[0]} is not in scope")


def _disjoint(a, b, where):
    both = a & b
    if both:
        raise NonAffineUse(f"variable {sorted(both)[0]} used more than once in {where}")


def _check(t: Term, ctx: dict, tvars: frozenset):
    """Returns (type, variables used)."""
    if isinstance(t, Var):
        if t.name not in ctx:
            raise UnboundVariable(t.name)
        return ctx[t.name], frozenset({t.name})
    if isinstance(t, Const):
        return CONSTANTS[t.name], frozenset()
    if isinstance(t, Lam):
        _scope(t.ty, tvars)
        body, used = _check(t.body, {**ctx, t.var: t.ty}, tvars)
        return Lolli(t.ty, body), used - {t.var}
    if isinstance(t, App):
        f, uf = _check(t.fn, ctx, tvars)
        a, ua = _check(t.arg, ctx, tvars)
        _disjoint(uf, ua, "an application")
        if not (isinstance(f, TBin) and f.op == "-o"):
            raise TypeMismatch(f"applying a term of type {f}")
        if not alpha_eq(f.left, a):
            raise TypeMismatch(f"argument of type {a} where {f.left} is expected")
        return f.right, uf | ua
    if isinstance(t, Pair):
        a, ua = _check(t.left, ctx, tvars)
        b, ub = _check(t.right, ctx, tvars)
        _disjoint(ua, ub, "a tensor pair")
        return Tensor(a, b), ua | ub
    if isinstance(t, LetPair):
        if t.x == t.y:
            raise NonAffineUse(f"variable {t.x} bound twice")
        p, up = _check(t.bound, ctx, tvars)
        if not (isinstance(p, TBin) and p.op == "*"):
            raise TypeMismatch(f"let-pair on a term of type {p}")
        body, ub = _check(t.body, {**ctx, t.x: p.left, t.y: p.right}, tvars)
        ub = ub - {t.x, t.y}
        _disjoint(up, ub, "a let-pair")
        return body, up | ub
    if isinstance(t, WithPair):
        a, ua = _check(t.left, ctx, tvars)
        b, ub = _check(t.right, ctx, tvars)
        return With(a, b), ua | ub
    if isinstance(t, Proj):
        p, up = _check(t.arg, ctx, tvars)
        if not (isinstance(p, TBin) and p.op == "&"):
            raise TypeMismatch(f"{t.which} of a term of type {p}")
        return (p.left if t.which == "fst" else p.right), up
    if isinstance(t, TLam):
        for x, ty in ctx.items():
            if t.var in ty.free_vars():
                raise ScopeViolation(f"{t.var} occurs free in the type of {x}")
        body, used = _check(t.body, ctx, tvars | {t.var})
        return TForall(t.var, body), used
    if isinstance(t, TApp):
        _scope(t.ty, tvars)
        f, uf = _check(t.fn, ctx, tvars)
        if not isinstance(f, TForall):
            raise TypeMismatch(f"type application to a term of type {f}")
        return subst_type(f.body, f.var, t.ty), uf
    raise TypeError(f"not a term: {t!r}")


# -- type substitution on terms -----------------------------------------------------

def subst_term_type(t: Term, var: str, by: Type) -> Term:
    if isinstance(t, Lam):
        return Lam(t.var, subst_type(t.ty, var, by), subst_term_type(t.body, var, by))
    if isinstance(t, App):
        return App(subst_term_type(t.fn, var, by), subst_term_type(t.arg, var, by))
    if isinstance(t, Pair):
        return Pair(subst_term_type(t.left, var, by), subst_term_type(t.right, var, by))
    if isinstance(t, LetPair):
        return LetPair(t.x, t.y, subst_term_type(t.bound, var, by), subst_term_type(t.body, var, by))
    if isinstance(t, WithPair):
        return WithPair(subst_term_type(t.left, var, by), subst_term_type(t.right, var, by))
    if isinstance(t, Proj):
        return Proj(t.which, subst_term_type(t.arg, var, by))
    if isinstance(t, TLam):
        if t.var == var:
            return t
        return TLam(t.var, subst_term_type(t.body, var, by))
    if isinstance(t, TApp):
        return TApp(subst_term_type(t.fn, var, by), subst_type(t.ty, var, by))
    return t


def _reduce_tapp(t: TApp):
    """Syntactic Λ-redex (ΛX.u){T} ↦ u[T/X], or None."""
    fn = t.fn
    if isinstance(fn, TApp):
        fn = _reduce_tapp(fn)
    if isinstance(fn, TLam):
        return subst_term_type(fn.body, fn.var, t.ty)
    return None


# -- denotation ---------------------------------------------------------------------

@dataclass
class _Env:
    family: InstanceFamily
    depth: object
    tenv: dict  # type variable -> Game


def ctx_game(types: list) -> Game:
    g = I
    for A in types:
        g = tensor(g, A)
    return g


def _var_path(n: int, i: int) -> tuple:
    """Path of the i-th (0-based) of n context entries."""
    return ("L",) * (n - 1 - i) + ("R",)


def denote(t, family: InstanceFamily = None, depth=None) -> Strategy:
    """The strategy a closed, well-typed term denotes on its type's game."""
    if isinstance(t, str):
        t = parse_term(t)
    typecheck(t)
    env = _Env(family if family is not None else family_by_size(3), depth, {})
    return from_point(_den(t, [], env))


def denote_type(ty, family: InstanceFamily = None, depth=None) -> Game:
    if isinstance(ty, str):
        ty = parse_type(ty)
    return _interp(ty, {}, family if family is not None else family_by_size(3), depth)


def _ty(ty: Type, env: _Env) -> Game:
    return _interp(ty, env.tenv, env.family, env.depth)


def _type_of(t, ctx, env: _Env):
    ty, _ = _check(t, dict(ctx), frozenset(env.tenv))
    return ty


def _used(t, ctx, env: _Env):
    _, used = _check(t, dict(ctx), frozenset(env.tenv))
    return used


def _den(t: Term, ctx: list, env: _Env) -> Morphism:
    """⟦ctx ⊢ t⟧ : Γ → ⟦T⟧ with Γ the interpreted context."""
    gamma = ctx_game([_ty(a, env) for _, a in ctx])
    n = len(ctx)
    if isinstance(t, Var):
        i = max(k for k, (x, _) in enumerate(ctx) if x == t.name)
        A = _ty(ctx[i][1], env)
        game = lolli(gamma, A)
        return Morphism(gamma, A, copycat(game, [(("L",) + _var_path(n, i), R)]))
    if isinstance(t, Const):
        A = _ty(CONSTANTS[t.name], env)
        return Morphism(gamma, A, _constant(t.name).relabelled(lolli(gamma, A), {(): R}))
    if isinstance(t, Lam):
        body = _den(t.body, ctx + [(t.var, t.ty)], env)
        return curry(body)
    if isinstance(t, (App, Pair)):
        left, right = (t.fn, t.arg) if isinstance(t, App) else (t.left, t.right)
        split, c1, c2 = _split(ctx, _used(left, ctx, env), env)
        m = compose(split, tensor_mor(_den(left, c1, env), _den(right, c2, env)))
        if isinstance(t, Pair):
            return m
        f_ty = _ty(_type_of(left, c1, env), env)
        return compose(m, apply_mor(f_ty.left, f_ty.right))
    if isinstance(t, LetPair):
        split, c1, c2 = _split(ctx, _used(t.bound, ctx, env), env)
        bound = _den(t.bound, c1, env)
        rest = identity(ctx_game([_ty(a, env) for _, a in c2]))
        m = compose(split, tensor_mor(bound, rest))
        A, B = bound.cod.left, bound.cod.right
        g2 = rest.dom
        src = tensor(tensor(A, B), g2)
        dst = tensor(tensor(g2, A), B)
        swap = Morphism(src, dst, copycat(lolli(src, dst), [
            (("L", "L", "L"), ("R", "L", "R")), (("L", "L", "R"), ("R", "R")),
            (("L", "R"), ("R", "L", "L"))]))
        pty = _type_of(t.bound, c1, env)
        body = _den(t.body, c2 + [(t.x, pty.left), (t.y, pty.right)], env)
        return compose(compose(m, swap), body)
    if isinstance(t, WithPair):
        return pair(_den(t.left, ctx, env), _den(t.right, ctx, env))
    if isinstance(t, Proj):
        m = _den(t.arg, ctx, env)
        A, B = m.cod.left, m.cod.right
        return compose(m, fst(A, B) if t.which == "fst" else snd(A, B))
    if isinstance(t, TLam):
        inner = _Env(env.family, env.depth, {**env.tenv, t.var: env.family.universe})
        body_ty = _type_of(t.body, ctx, inner)
        sigma = _den(t.body, ctx, inner)
        Pi = build_pi(VariableType(body_ty, (t.var,)), env.family, env.depth, env=env.tenv)
        return second_order_curry(sigma, Pi, check=False)
    if isinstance(t, TApp):
        red = _reduce_tapp(t)
        if red is not None:
            return _den(red, ctx, env)
        m = _den(t.fn, ctx, env)
        A = _ty(t.ty, env)
        if A not in env.family:
            raise NotDefinable(f"{t.ty} is not an instance in the family")
        return compose(m, poly_project(m.cod, A))
    raise TypeError(f"not a term: {t!r}")


def _split(ctx, used, env):
    """Γ → Γ₁ ⊗ Γ₂ copying the variables ``used`` to Γ₁ and the rest to Γ₂."""
    # a shadowed entry is never the one a term refers to
    last = {x: i for i, (x, _) in enumerate(ctx)}
    live = [x in used and last[x] == i for i, (x, _) in enumerate(ctx)]
    c1 = [e for e, keep in zip(ctx, live) if keep]
    c2 = [e for e, keep in zip(ctx, live) if not keep]
    gamma = ctx_game([_ty(a, env) for _, a in ctx])
    g1 = ctx_game([_ty(a, env) for _, a in c1])
    g2 = ctx_game([_ty(a, env) for _, a in c2])
    cod = tensor(g1, g2)
    links = []
    n, i1, i2 = len(ctx), 0, 0
    for i in range(n):
        if live[i]:
            links.append((("L",) + _var_path(n, i), ("R", "L") + _var_path(len(c1), i1)))
            i1 += 1
        else:
            links.append((("L",) + _var_path(n, i), ("R", "R") + _var_path(len(c2), i2)))
            i2 += 1
    return Morphism(gamma, cod, copycat(lolli(gamma, cod), links)), c1, c2


def _constant(name: str) -> Strategy:
    from .games import Move
    B = boolean_game()
    if name == "unit":
        return Strategy.from_plays(I, [()])
    if name in ("tt", "ff"):
        return Strategy.closure(B, [(Move("*"), Move(name))])
    g = lolli(B, B)
    star_r, star_l = Move("*", R), Move("*", L)
    plays = [(star_r, star_l, Move(v, L), Move(w, R)) for v, w in (("tt", "ff"), ("ff", "tt"))]
    return Strategy.closure(g, plays)
