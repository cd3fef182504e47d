"""Shared test utilities: tiny structure builders and independent oracles."""

from itertools import product

from mdlsat.formula import And, Bot, NegProp, Or, Prop, Top
from mdlsat.kripke import KripkeStructure


def mk(labels: dict, edges=()) -> KripkeStructure:
    """Structure from {world: iterable-of-props} plus edge pairs."""
    return KripkeStructure(list(labels), list(edges), {w: set(ps) for w, ps in labels.items()})


def team(*ids) -> frozenset:
    return frozenset(ids)


def eval_prop(f, valuation: dict) -> bool:
    """Truth-table evaluation of a purely propositional formula."""
    if isinstance(f, Top):
        return True
    if isinstance(f, Bot):
        return False
    if isinstance(f, Prop):
        return valuation[f.name]
    if isinstance(f, NegProp):
        return not valuation[f.name]
    if isinstance(f, And):
        return eval_prop(f.left, valuation) and eval_prop(f.right, valuation)
    if isinstance(f, Or):
        return eval_prop(f.left, valuation) or eval_prop(f.right, valuation)
    raise AssertionError(f"unexpected node {f!r}")


def one_world_structures(props):
    """All structures with a single world w: every labeling, with and
    without a self loop."""
    out = []
    for bits in product((False, True), repeat=len(props)):
        labeling = {p for p, b in zip(props, bits) if b}
        for loop in (False, True):
            edges = [("w", "w")] if loop else []
            out.append(mk({"w": labeling}, edges))
    return out


def random_structure(rng, max_worlds, props):
    ids = [f"w{i}" for i in range(rng.randint(1, max_worlds))]
    edges = [(a, b) for a in ids for b in ids if rng.random() < 0.45]
    labels = {w: {p for p in props if rng.random() < 0.5} for w in ids}
    return mk(labels, edges)
