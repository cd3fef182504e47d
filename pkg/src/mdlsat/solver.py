"""Satisfiability engines.

The complete decision procedure is a pipeline: expand classical
disjunctions into a big classical disjunction of cor-free formulas, rewrite
negated dep atoms to bot, translate each cor-free formula into a lazy
disjunction of plain modal-logic formulas (one per choice of Boolean
function for each dep-atom occurrence), and feed those to a backtracking
implementation of Ladner's satisfiability algorithm.  The input is
satisfiable iff some (expansion, translation) disjunct is ML-satisfiable;
a nonempty witness team exists exactly in that case because satisfaction
is downward closed.

A bounded brute-force engine over small tree frames and two fragment fast
paths serve as cross-checks.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import combinations, product

from .formula import (
    And, Bot, Box, Cor, Dep, Diamond, Formula, NegDep, NegProp, Or, Prop,
    Top, BOT, TOP, modal_depth, normalize_neg_dep, propositions, signature,
)
from .kripke import KripkeStructure
from . import teamsem

__all__ = [
    "Verdict", "SatResult", "BudgetExceeded", "DEFAULT_BUDGET",
    "expand_cor", "alpha_encoding", "function_tables", "to_nnf_ml",
    "translate_singleton", "translate_singleton_indexed",
    "ladner_sat", "sat", "sat_bruteforce",
    "sat_no_conjunction", "sat_conjunction_of_literals",
]

DEFAULT_BUDGET = 10_000_000


class BudgetExceeded(Exception):
    """Raised internally when the node budget runs out."""


class _Budget:
    __slots__ = ("remaining",)

    def __init__(self, limit: int):
        self.remaining = limit

    def tick(self, n: int = 1) -> None:
        self.remaining -= n
        if self.remaining < 0:
            raise BudgetExceeded


class Verdict(enum.Enum):
    SAT = "sat"
    UNSAT = "unsat"
    # Brute force exhausted its tree bounds without finding a model.
    BOUNDED_UNSAT = "bounded-unsat"
    # The node budget ran out before a verdict was reached.
    BUDGET_EXCEEDED = "budget-exceeded"


@dataclass
class SatResult:
    verdict: Verdict
    witness: tuple[KripkeStructure, frozenset] | None
    engine: str
    disjunct_index: tuple[int, int] | None

    @property
    def satisfiable(self) -> bool:
        return self.verdict is Verdict.SAT


# ---------------------------------------------------------------------------
# Classical-disjunction expansion

def _cor_count(node: Formula) -> int:
    if isinstance(node, (And, Or, Cor)):
        n = _cor_count(node.left) + _cor_count(node.right)
        return n + 1 if isinstance(node, Cor) else n
    if isinstance(node, (Box, Diamond)):
        return _cor_count(node.child)
    return 0


def _select(node: Formula, bits: int, j: int) -> tuple[Formula, int]:
    """Resolve every classical disjunction by its preorder bit in `bits`."""
    if isinstance(node, Cor):
        here = j
        left_count = _cor_count(node.left)
        after = j + 1 + left_count + _cor_count(node.right)
        if (bits >> here) & 1 == 0:
            chosen, _ = _select(node.left, bits, j + 1)
        else:
            chosen, _ = _select(node.right, bits, j + 1 + left_count)
        return chosen, after
    if isinstance(node, (And, Or)):
        left, j = _select(node.left, bits, j)
        right, j = _select(node.right, bits, j)
        return type(node)(left, right), j
    if isinstance(node, (Box, Diamond)):
        child, j = _select(node.child, bits, j)
        return type(node)(child), j
    return node, j


def expand_cor(f: Formula):
    """Yield the cor-free formulas whose classical disjunction equals f.

    Disjunct number i resolves the j-th classical disjunction (preorder)
    to its left side when bit j of i is 0 and to its right side when it is
    1, so the sequence has 2^(number of cor nodes) entries, possibly with
    repetition.
    """
    c = _cor_count(f)
    for bits in range(1 << c):
        yield _select(f, bits, 0)[0]


# ---------------------------------------------------------------------------
# Boolean function encodings and the singleton translation

def function_tables(arity: int):
    """All truth tables of Boolean functions on `arity` inputs, as integers.

    Bit r of a table is the function value on row r, where row r assigns
    variable t the value of bit (arity-1-t) of r (binary, first variable
    most significant).
    """
    return range(1 << (1 << arity))


def _fold_and(parts) -> Formula:
    out: Formula | None = None
    for p in parts:
        if isinstance(p, Bot):
            return BOT
        if isinstance(p, Top):
            continue
        out = p if out is None else And(out, p)
    return TOP if out is None else out


def _fold_or(parts) -> Formula:
    out: Formula | None = None
    for p in parts:
        if isinstance(p, Top):
            return TOP
        if isinstance(p, Bot):
            continue
        out = p if out is None else Or(out, p)
    return BOT if out is None else out


def alpha_encoding(table: int, variables) -> Formula:
    """Propositional encoding of a Boolean function: the disjunction of the
    minterms of all rows where the table is true (true rows first).

    Repeated variable names are folded: a minterm forcing both p and ~p is
    dropped, a repeated conjunct is kept once.
    """
    variables = tuple(variables)
    j = len(variables)
    if not 0 <= table < (1 << (1 << j)):
        raise ValueError(f"table {table} out of range for arity {j}")
    minterms = []
    for r in range((1 << j) - 1, -1, -1):
        if not (table >> r) & 1:
            continue
        polarity: dict[str, bool] = {}
        consistent = True
        literals = []
        for t, name in enumerate(variables):
            value = bool((r >> (j - 1 - t)) & 1)
            if name in polarity:
                if polarity[name] != value:
                    consistent = False
                    break
                continue
            polarity[name] = value
            literals.append(Prop(name) if value else NegProp(name))
        if consistent:
            minterms.append(_fold_and(literals))
    return _fold_or(minterms)


def _neg_propositional(f: Formula) -> Formula:
    """De Morgan negation of a purely propositional formula."""
    if isinstance(f, Top):
        return BOT
    if isinstance(f, Bot):
        return TOP
    if isinstance(f, Prop):
        return NegProp(f.name)
    if isinstance(f, NegProp):
        return Prop(f.name)
    if isinstance(f, And):
        return _fold_or([_neg_propositional(f.left), _neg_propositional(f.right)])
    if isinstance(f, Or):
        return _fold_and([_neg_propositional(f.left), _neg_propositional(f.right)])
    raise ValueError(f"not a propositional formula: {f}")


def to_nnf_ml(alpha: Formula, target: str) -> Formula:
    """Eliminate the biconditional `alpha <-> target` into negation normal
    form: (alpha & target) | (~alpha & ~target), with constants folded."""
    positive = _fold_and([alpha, Prop(target)])
    negative = _fold_and([_neg_propositional(alpha), NegProp(target)])
    return _fold_or([positive, negative])


def _dep_occurrences(f: Formula) -> list[Dep]:
    out: list[Dep] = []

    def walk(node: Formula) -> None:
        if isinstance(node, Dep):
            out.append(node)
        elif isinstance(node, (And, Or, Cor)):
            walk(node.left)
            walk(node.right)
        elif isinstance(node, (Box, Diamond)):
            walk(node.child)

    walk(f)
    return out


def _contains_dep(node: Formula) -> bool:
    if isinstance(node, Dep):
        return True
    if isinstance(node, (And, Or, Cor)):
        return _contains_dep(node.left) or _contains_dep(node.right)
    if isinstance(node, (Box, Diamond)):
        return _contains_dep(node.child)
    return False


def _replace_deps(node: Formula, repls) -> Formula:
    """Substitute dep occurrences in preorder by the next items of `repls`.
    Dep-free subtrees are shared, not rebuilt."""
    if isinstance(node, Dep):
        return next(repls)
    if not _contains_dep(node):
        return node
    if isinstance(node, (And, Or, Cor)):
        left = _replace_deps(node.left, repls)
        right = _replace_deps(node.right, repls)
        return type(node)(left, right)
    if isinstance(node, (Box, Diamond)):
        return type(node)(_replace_deps(node.child, repls))
    return node


def _check_translatable(f: Formula) -> None:
    if isinstance(f, Cor):
        raise ValueError("classical disjunction must be expanded before translation")
    if isinstance(f, NegDep):
        raise ValueError("negated dep atoms must be normalized before translation")
    if isinstance(f, (And, Or)):
        _check_translatable(f.left)
        _check_translatable(f.right)
    elif isinstance(f, (Box, Diamond)):
        _check_translatable(f.child)


def translate_singleton_indexed(f: Formula):
    """Like translate_singleton but yields (selection_index, formula) pairs.

    The selection index is the mixed-radix number over the full function
    tables of every dep occurrence (first occurrence most significant,
    tables ordered by truth-table integer).  Selections producing a formula
    identical to an earlier one are skipped; that cannot change which index
    is the least satisfiable one.
    """
    _check_translatable(f)
    occurrences = _dep_occurrences(f)
    if not occurrences:
        yield 0, f
        return

    per_atom: list[list[tuple[int, Formula]]] = []
    full_sizes: list[int] = []
    for atom in occurrences:
        full_sizes.append(1 << (1 << atom.arity))
        options: list[tuple[int, Formula]] = []
        seen: set[Formula] = set()
        for table in function_tables(atom.arity):
            repl = to_nnf_ml(alpha_encoding(table, atom.args), atom.target)
            if repl not in seen:
                seen.add(repl)
                options.append((table, repl))
        per_atom.append(options)

    strides = [1] * len(occurrences)
    for i in range(len(occurrences) - 2, -1, -1):
        strides[i] = strides[i + 1] * full_sizes[i + 1]

    for selection in product(*per_atom):
        index = sum(t * s for (t, _), s in zip(selection, strides))
        repls = iter(repl for _, repl in selection)
        yield index, _replace_deps(f, repls)


def translate_singleton(f: Formula):
    """Yield plain modal-logic formulas whose classical disjunction is
    equivalent to f on singleton teams (dep atoms range over all Boolean
    functions of their arguments).  Rejects cor / negated-dep input."""
    for _, psi in translate_singleton_indexed(f):
        yield psi


# ---------------------------------------------------------------------------
# Ladner's algorithm (backtracking, with a tree-model builder)

def _check_ml_input(f: Formula) -> None:
    if isinstance(f, (Dep, NegDep, Cor)):
        raise ValueError(f"not a plain modal-logic formula: {f}")
    if isinstance(f, (And, Or)):
        _check_ml_input(f.left)
        _check_ml_input(f.right)
    elif isinstance(f, (Box, Diamond)):
        _check_ml_input(f.child)


_MISSING = object()


class _LadnerEngine:
    """Decides ML satisfiability world by world.

    A call decomposes its formula set: conjunctions split, disjunctions
    backtrack (the existential guess), box children accumulate for all
    successors and diamond children each spawn one successor world.  A world
    whose atoms contain bot or a complementary literal pair is inconsistent.
    Returns a tree model (labels, children) on success, None on failure.

    Worlds travel as tuples in a deterministic construction order (the memo
    key is the frozenset, so permuted duplicates still share one entry).
    The top-level formula of each query is not memoized: callers feed
    thousands of distinct disjuncts through one engine, and retaining them
    all would defeat garbage collection.
    """

    def __init__(self, budget: _Budget):
        self.budget = budget
        self.memo: dict[frozenset, tuple | None] = {}

    def model(self, psi: Formula):
        return self._world((psi,), store=False)

    def _world(self, formulas: tuple, store: bool = True):
        key = frozenset(formulas)
        hit = self.memo.get(key, _MISSING)
        if hit is not _MISSING:
            return hit
        self.budget.tick()
        seen: set[Formula] = set()
        pending = [f for f in formulas if not (f in seen or seen.add(f))]
        pending.reverse()
        result = self._expand(pending, set(), [], [])
        if store:
            self.memo[key] = result
        return result

    def _expand(self, pending, lits, boxes, diamonds):
        self.budget.tick()
        pending = list(pending)
        lits = set(lits)
        boxes = list(boxes)
        diamonds = list(diamonds)
        while pending:
            psi = pending.pop()
            if isinstance(psi, And):
                pending.append(psi.right)
                pending.append(psi.left)
            elif isinstance(psi, Or):
                left = self._expand(pending + [psi.left], lits, boxes, diamonds)
                if left is not None:
                    return left
                return self._expand(pending + [psi.right], lits, boxes, diamonds)
            elif isinstance(psi, Box):
                boxes.append(psi.child)
            elif isinstance(psi, Diamond):
                diamonds.append(psi.child)
            elif isinstance(psi, Top):
                pass
            elif isinstance(psi, Bot):
                return None
            elif isinstance(psi, Prop):
                if (False, psi.name) in lits:
                    return None
                lits.add((True, psi.name))
            elif isinstance(psi, NegProp):
                if (True, psi.name) in lits:
                    return None
                lits.add((False, psi.name))
            else:
                raise ValueError(f"not a plain modal-logic formula: {psi}")
        children = []
        if diamonds:
            base = tuple(boxes)
            seen = set()
            for d in diamonds:
                sub = self._world(base + (d,))
                if sub is None:
                    return None
                if sub not in seen:
                    seen.add(sub)
                    children.append(sub)
        labels = frozenset(name for positive, name in lits if positive)
        return (labels, tuple(children))


def ladner_sat(psi: Formula, budget: int | None = None) -> bool:
    """Satisfiability of a plain modal-logic formula (no dep, no cor)."""
    _check_ml_input(psi)
    engine = _LadnerEngine(_Budget(DEFAULT_BUDGET if budget is None else budget))
    return engine.model(psi) is not None


def _tree_to_structure(tree) -> tuple[KripkeStructure, str]:
    worlds: list[str] = []
    edges: list[tuple[str, str]] = []
    labels: dict[str, frozenset] = {}

    def emit(node) -> str:
        ident = f"w{len(worlds)}"
        worlds.append(ident)
        labels[ident] = node[0]
        for child in node[1]:
            edges.append((ident, emit(child)))
        return ident

    root = emit(tree)
    return KripkeStructure(worlds, edges, labels), root


# ---------------------------------------------------------------------------
# The full pipeline

# Dedup of already-checked disjuncts is an optimization only, so its
# memory is capped; past the cap duplicates are simply re-solved.
_SEEN_CAP = 20_000


def _sat_pipeline(f: Formula, want_witness: bool, budget: int) -> SatResult:
    counter = _Budget(budget)
    engine = _LadnerEngine(counter)
    seen: set[Formula] = set()
    try:
        for i, disjunct in enumerate(expand_cor(f)):
            disjunct = normalize_neg_dep(disjunct)
            for j, ml in translate_singleton_indexed(disjunct):
                counter.tick()
                if ml in seen:
                    continue
                if len(seen) < _SEEN_CAP:
                    seen.add(ml)
                model = engine.model(ml)
                if model is not None:
                    witness = None
                    if want_witness:
                        structure, root = _tree_to_structure(model)
                        team = frozenset((root,))
                        if not teamsem.check(structure, team, f):
                            raise AssertionError(
                                "internal error: pipeline witness failed re-check")
                        witness = (structure, team)
                    return SatResult(Verdict.SAT, witness, "pipeline", (i, j))
    except BudgetExceeded:
        return SatResult(Verdict.BUDGET_EXCEEDED, None, "pipeline", None)
    return SatResult(Verdict.UNSAT, None, "pipeline", None)


# ---------------------------------------------------------------------------
# Bounded brute force over tree frames

def _labelings(props):
    out = []
    for bits in range(1 << len(props)):
        out.append(frozenset(p for i, p in enumerate(props) if (bits >> i) & 1))
    return out


def _canonical_trees(depth: int, branching: int, labelings, counter: _Budget):
    """All trees of depth <= depth with <= branching pairwise distinct child
    subtrees per node, in a fixed order.  Skipping duplicate siblings loses
    no models: worlds with identical labeled subtrees are indistinguishable."""
    if depth == 0:
        for lab in labelings:
            counter.tick()
            yield (lab, ())
        return
    subtrees = list(_canonical_trees(depth - 1, branching, labelings, counter))
    for lab in labelings:
        for k in range(branching + 1):
            for combo in combinations(subtrees, k):
                counter.tick()
                yield (lab, combo)


def sat_bruteforce(f: Formula, depth: int, branching: int,
                   budget: int | None = None) -> SatResult:
    """Search rooted trees up to the given depth and branching for a model
    of f with team {root}.  A negative answer only means no model within
    the bounds."""
    props = sorted(propositions(f))
    counter = _Budget(DEFAULT_BUDGET if budget is None else budget)
    try:
        for tree in _canonical_trees(depth, branching, _labelings(props), counter):
            structure, root = _tree_to_structure(tree)
            team = frozenset((root,))
            if teamsem.check(structure, team, f):
                return SatResult(Verdict.SAT, (structure, team), "bruteforce", None)
    except BudgetExceeded:
        return SatResult(Verdict.BUDGET_EXCEEDED, None, "bruteforce", None)
    return SatResult(Verdict.BOUNDED_UNSAT, None, "bruteforce", None)


# ---------------------------------------------------------------------------
# Fragment fast paths

def _flatten(node: Formula, kinds) -> list[Formula]:
    if isinstance(node, kinds):
        return _flatten(node.left, kinds) + _flatten(node.right, kinds)
    return [node]


def sat_no_conjunction(f: Formula) -> bool:
    """Satisfiability for conjunction-free formulas, in polynomial time.

    At each level the formula is a disjunction (either flavour; they agree
    here) of boxed formulas, diamond formulas and atoms.  Any boxed
    disjunct, literal, top or dep atom is immediately satisfiable;
    otherwise recurse into the diamonds.
    """
    if signature(f).has("and"):
        raise ValueError("fast path requires a conjunction-free formula")

    def sat_rec(node: Formula) -> bool:
        diamonds = []
        for d in _flatten(node, (Or, Cor)):
            if isinstance(d, (Box, Prop, NegProp, Top, Dep)):
                return True
            if isinstance(d, Diamond):
                diamonds.append(d.child)
            # bot and ~dep disjuncts can never be satisfied on a nonempty team
        return any(sat_rec(child) for child in diamonds)

    return sat_rec(f)


def sat_conjunction_of_literals(f: Formula) -> bool:
    """Satisfiability for modality- and disjunction-free conjunctions.

    True iff there is no bot, no negated dep atom, and no complementary
    literal pair; dep atoms and top hold on any singleton team.
    """
    positive: set[str] = set()
    negative: set[str] = set()
    for c in _flatten(f, And):
        if isinstance(c, (Box, Diamond, Or, Cor)):
            raise ValueError("fast path requires a modality- and "
                             "disjunction-free conjunction")
        if isinstance(c, (Bot, NegDep)):
            return False
        if isinstance(c, Prop):
            positive.add(c.name)
        elif isinstance(c, NegProp):
            negative.add(c.name)
    return not (positive & negative)


# ---------------------------------------------------------------------------
# Entry point

def sat(f: Formula, engine: str = "auto", witness: bool = False,
        budget: int | None = None) -> SatResult:
    """Decide satisfiability of an MDL formula (nonempty team semantics).

    engine: "auto" routes by fragment classification, "pipeline" is the
    complete procedure, "bruteforce" the bounded tree search, "fastpath"
    one of the polynomial fragment procedures (error if none applies).
    A witness, when requested, is reconstructed from the satisfiable
    ML disjunct and re-checked under team semantics.
    """
    from .classifier import classify

    budget = DEFAULT_BUDGET if budget is None else budget
    if engine == "auto":
        recommended = classify(signature(f)).recommended_engine
        engine = "pipeline" if witness else recommended

    if engine == "pipeline":
        return _sat_pipeline(f, witness, budget)
    if engine == "bruteforce":
        return sat_bruteforce(f, max(modal_depth(f), 1), 4, budget)
    if engine == "fastpath":
        sig = signature(f)
        if not sig.has("and"):
            engine = "no_conjunction"
        elif not any(sig.has(op) for op in ("box", "diamond", "or", "cor")):
            engine = "literal_conjunction"
        else:
            raise ValueError("no fast path applies to this formula")
    if engine == "no_conjunction":
        verdict = Verdict.SAT if sat_no_conjunction(f) else Verdict.UNSAT
        return SatResult(verdict, None, "no_conjunction", None)
    if engine == "literal_conjunction":
        verdict = Verdict.SAT if sat_conjunction_of_literals(f) else Verdict.UNSAT
        return SatResult(verdict, None, "literal_conjunction", None)
    raise ValueError(f"unknown engine {engine!r}")
