"""Team-semantics model checking, and single-world checking for plain
modal logic.

Teams are frozensets of world ids.  A proposition that never appears in the
structure's labeling is simply false everywhere, so checking is total.
"""

from __future__ import annotations

from itertools import product

from .formula import (
    And, Bot, Box, Cor, Dep, Diamond, Formula, NegDep, NegProp, Or, Prop, Top,
)
from .kripke import KripkeStructure

__all__ = ["check", "check_ml"]


def check(structure: KripkeStructure, team: frozenset, f: Formula) -> bool:
    """Does the team satisfy f in this structure?

    Split disjunction tries only disjoint two-part splits of the team and
    diamond tries only images of successor-choice functions; both
    restrictions are complete because satisfaction is downward closed.
    Results are memoized per (subformula, team) within one call.
    """
    unknown = team - set(structure.worlds)
    if unknown:
        raise ValueError(f"team contains unknown worlds: {sorted(unknown)}")

    index = {w: i for i, w in enumerate(structure.worlds)}
    world_at = structure.worlds
    succ_mask = {}
    for w in structure.worlds:
        mask = 0
        for t in structure.successors_of(w):
            mask |= 1 << index[t]
        succ_mask[w] = mask

    team_mask = 0
    for w in team:
        team_mask |= 1 << index[w]

    memo: dict[tuple[int, int], bool] = {}

    def members(mask: int):
        i = 0
        while mask:
            if mask & 1:
                yield world_at[i]
            mask >>= 1
            i += 1

    def go(node: Formula, mask: int) -> bool:
        key = (id(node), mask)
        hit = memo.get(key)
        if hit is not None:
            return hit
        result = evaluate(node, mask)
        memo[key] = result
        return result

    def evaluate(node: Formula, mask: int) -> bool:
        if isinstance(node, Top):
            return True
        if isinstance(node, Bot):
            return mask == 0
        if isinstance(node, Prop):
            return all(node.name in structure.labels[w] for w in members(mask))
        if isinstance(node, NegProp):
            return all(node.name not in structure.labels[w] for w in members(mask))
        if isinstance(node, Dep):
            seen: dict[tuple[bool, ...], bool] = {}
            for w in members(mask):
                labels = structure.labels[w]
                key = tuple(p in labels for p in node.args)
                value = node.target in labels
                if seen.setdefault(key, value) != value:
                    return False
            return True
        if isinstance(node, NegDep):
            return mask == 0
        if isinstance(node, And):
            return go(node.left, mask) and go(node.right, mask)
        if isinstance(node, Cor):
            return go(node.left, mask) or go(node.right, mask)
        if isinstance(node, Or):
            # Enumerate submasks: left part sub, right part mask \ sub.
            sub = mask
            while True:
                if go(node.left, sub) and go(node.right, mask & ~sub):
                    return True
                if sub == 0:
                    return False
                sub = (sub - 1) & mask
        if isinstance(node, Box):
            image = 0
            for w in members(mask):
                image |= succ_mask[w]
            return go(node.child, image)
        if isinstance(node, Diamond):
            choices = []
            for w in members(mask):
                options = succ_mask[w]
                if options == 0:
                    return False
                choices.append([1 << index[t] for t in structure.successors_of(w)])
            images = set()
            for pick in product(*choices):
                image = 0
                for bit in pick:
                    image |= bit
                images.add(image)
            return any(go(node.child, image) for image in sorted(images))
        raise TypeError(f"not a formula node: {node!r}")

    return go(f, team_mask)


def check_ml(structure: KripkeStructure, world: str, psi: Formula) -> bool:
    """Ordinary single-world Kripke satisfaction for dep-free, cor-free
    formulas (disjunction is classical here)."""
    if world not in structure.labels:
        raise ValueError(f"unknown world {world!r}")

    def go(node: Formula, w: str) -> bool:
        if isinstance(node, Top):
            return True
        if isinstance(node, Bot):
            return False
        if isinstance(node, Prop):
            return node.name in structure.labels[w]
        if isinstance(node, NegProp):
            return node.name not in structure.labels[w]
        if isinstance(node, And):
            return go(node.left, w) and go(node.right, w)
        if isinstance(node, Or):
            return go(node.left, w) or go(node.right, w)
        if isinstance(node, Box):
            return all(go(node.child, t) for t in structure.successors_of(w))
        if isinstance(node, Diamond):
            return any(go(node.child, t) for t in structure.successors_of(w))
        if isinstance(node, (Dep, NegDep, Cor)):
            raise ValueError("single-world checking is for plain modal logic "
                             f"formulas; found {node}")
        raise TypeError(f"not a formula node: {node!r}")

    return go(psi, world)
