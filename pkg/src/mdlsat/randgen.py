"""Seeded random formula generation for cross-checks and self tests."""

from __future__ import annotations

from .formula import (
    And, BOT, Box, Cor, Dep, Diamond, Formula, NegDep, NegProp, Or, Prop, TOP,
)

__all__ = ["random_formula"]


def _random_atom(rng, props, ops, max_dep_arity) -> Formula:
    kinds = ["prop"]
    if "top" in ops:
        kinds.append("top")
    if "bot" in ops:
        kinds.append("bot")
    if "neg" in ops:
        kinds.append("negprop")
    if "dep" in ops:
        kinds.append("dep")
        if "neg" in ops:
            kinds.append("negdep")
    kind = rng.choice(kinds)
    if kind == "top":
        return TOP
    if kind == "bot":
        return BOT
    if kind == "prop":
        return Prop(rng.choice(props))
    if kind == "negprop":
        return NegProp(rng.choice(props))
    arity = rng.randint(0, min(max_dep_arity, len(props)))
    args = tuple(rng.sample(props, arity))
    target = rng.choice(props)
    return Dep(args, target) if kind == "dep" else NegDep(args, target)


def random_formula(rng, props, size, ops, max_dep_arity=1,
                   max_modal_depth=None) -> Formula:
    """A random formula of roughly `size` nodes using only the given
    operator flags, over the given proposition names."""
    props = list(props)
    unaries = [op for op in ("box", "diamond") if op in ops]
    if max_modal_depth is not None and max_modal_depth <= 0:
        unaries = []
    binaries = [op for op in ("and", "or", "cor") if op in ops]

    choices = []
    if size >= 2 and unaries:
        choices += [("unary", op) for op in unaries]
    if size >= 3 and binaries:
        choices += [("binary", op) for op in binaries]
    if not choices:
        return _random_atom(rng, props, ops, max_dep_arity)

    shape, op = rng.choice([("atom", None)] + choices) if size < 5 \
        else rng.choice(choices)
    if shape == "atom":
        return _random_atom(rng, props, ops, max_dep_arity)
    if shape == "unary":
        inner_depth = None if max_modal_depth is None else max_modal_depth - 1
        child = random_formula(rng, props, size - 1, ops, max_dep_arity, inner_depth)
        return Box(child) if op == "box" else Diamond(child)
    left_size = rng.randint(1, size - 2)
    left = random_formula(rng, props, left_size, ops, max_dep_arity, max_modal_depth)
    right = random_formula(rng, props, size - 1 - left_size, ops,
                           max_dep_arity, max_modal_depth)
    node = {"and": And, "or": Or, "cor": Cor}[op]
    return node(left, right)
