"""Hardness-reduction constructions and brute-force oracles for their
source problems.

Three reduction families:

* 1-in-3 quantified constraint instances (forall block then exists block)
  map to conjunction/classical-disjunction formulas whose UNsatisfiability
  equals instance truth;
* CNF-DQBF instances (Henkin-style dependence sets) map to poor man's
  dependence formulas, satisfiable iff the instance is true;
* exists-forall-exists 3CNF sentences map likewise, using only 0-ary and
  3-ary dependence atoms.

Each source problem also gets an exponential brute-force truth oracle so
reductions can be cross-checked end to end on small instances.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from .formula import (
    And, BOT, Box, Cor, Dep, Diamond, Formula, NegProp, Prop, TOP,
)

__all__ = [
    "QCSP13Instance", "DQBFInstance", "QBF3Instance", "InstanceFormatError",
    "reduce_qcsp", "qcsp_valuation_formula", "reduce_dqbf", "reduce_qbf3",
    "oracle_qcsp", "oracle_dqbf", "oracle_qbf3", "parse_instance",
]


class InstanceFormatError(ValueError):
    pass


@dataclass(frozen=True)
class QCSP13Instance:
    """Universally quantified variables 1..k, existential k+1..n, and
    clauses of three pairwise distinct variables; true iff every universal
    assignment extends to one with exactly one true variable per clause."""
    universal_count: int
    existential_count: int
    clauses: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        k, n = self.universal_count, self.num_variables
        if k < 0 or self.existential_count < 0:
            raise InstanceFormatError("negative variable counts")
        seen = set()
        for clause in self.clauses:
            if len(clause) != 3 or len(set(clause)) != 3:
                raise InstanceFormatError(
                    f"clause {clause} must have three pairwise distinct variables")
            for v in clause:
                if not 1 <= v <= n:
                    raise InstanceFormatError(f"variable {v} out of range 1..{n}")
                seen.add(v)
        missing = set(range(1, n + 1)) - seen
        if missing:
            raise InstanceFormatError(
                f"variables {sorted(missing)} occur in no clause")

    @property
    def num_variables(self) -> int:
        return self.universal_count + self.existential_count


@dataclass(frozen=True)
class DQBFInstance:
    """Universals 1..k, existentials k+1..n with explicit dependence sets
    (subsets of the universals), and clauses of exactly three literals
    (repetition allowed)."""
    universal_count: int
    existential_count: int
    dependence_sets: tuple[frozenset[int], ...]
    clauses: tuple[tuple[int, int, int], ...]
    original_order: tuple[int, ...] = field(default=())

    def __post_init__(self):
        k, n = self.universal_count, self.num_variables
        if k < 0 or self.existential_count < 0:
            raise InstanceFormatError("negative variable counts")
        if len(self.dependence_sets) != self.existential_count:
            raise InstanceFormatError("one dependence set per existential variable")
        for deps in self.dependence_sets:
            bad = [v for v in deps if not 1 <= v <= k]
            if bad:
                raise InstanceFormatError(
                    f"dependence set {sorted(deps)} references non-universal {bad}")
        _check_literal_triples(self.clauses, n)
        if not self.original_order:
            object.__setattr__(self, "original_order", tuple(range(1, n + 1)))

    @property
    def num_variables(self) -> int:
        return self.universal_count + self.existential_count


@dataclass(frozen=True)
class QBF3Instance:
    """exists-forall-exists prefix over 3-literal clauses; the three block
    sizes are (first existential, universal, trailing existential)."""
    exists_first: int
    forall_middle: int
    exists_last: int
    clauses: tuple[tuple[int, int, int], ...]
    original_order: tuple[int, ...] = field(default=())

    def __post_init__(self):
        if min(self.exists_first, self.forall_middle, self.exists_last) < 0:
            raise InstanceFormatError("negative block sizes")
        _check_literal_triples(self.clauses, self.num_variables)
        if not self.original_order:
            object.__setattr__(
                self, "original_order", tuple(range(1, self.num_variables + 1)))

    @property
    def num_variables(self) -> int:
        return self.exists_first + self.forall_middle + self.exists_last


def _check_literal_triples(clauses, n: int) -> None:
    for clause in clauses:
        if len(clause) != 3:
            raise InstanceFormatError(f"clause {clause} must have exactly 3 literals")
        for lit in clause:
            if lit == 0 or abs(lit) > n:
                raise InstanceFormatError(f"literal {lit} out of range for {n} variables")


# ---------------------------------------------------------------------------
# Formula-building helpers

def _boxes(count: int, body: Formula) -> Formula:
    for _ in range(count):
        body = Box(body)
    return body


def _diamonds(count: int, body: Formula) -> Formula:
    for _ in range(count):
        body = Diamond(body)
    return body


def _apply_modalities(mods, body: Formula) -> Formula:
    for m in reversed(mods):
        body = Diamond(body) if m == "diamond" else Box(body)
    return body


def _conj(parts) -> Formula:
    out: Formula | None = None
    for p in parts:
        out = p if out is None else And(out, p)
    return TOP if out is None else out


# ---------------------------------------------------------------------------
# 1-in-3 QCSP reduction (instance true iff formula UNSAT)

def _qcsp_nabla(inst: QCSP13Instance, i: int) -> list[str]:
    once = ["diamond" if i in clause else "box" for clause in inst.clauses]
    return once + once


def _qcsp_universal_suffix(inst: QCSP13Instance, i: int) -> Formula:
    k = inst.universal_count
    return _boxes(i - 1, Diamond(_boxes(k - i, Prop("p"))))


def reduce_qcsp(inst: QCSP13Instance, variant: str = "bot") -> Formula:
    """The conjunction whose unsatisfiability equals instance truth.

    Each universal variable contributes a classical disjunction between its
    doubled clause-membership prefix and a pure box prefix, each existential
    contributes only the former, and a final all-box conjunct ends in bot
    (variant "bot") or ~p (variant "negp").
    """
    if variant not in ("bot", "negp"):
        raise ValueError(f"variant must be 'bot' or 'negp', got {variant!r}")
    k, n, m = inst.universal_count, inst.num_variables, len(inst.clauses)
    parts = []
    for i in range(1, k + 1):
        suffix = _qcsp_universal_suffix(inst, i)
        left = _apply_modalities(_qcsp_nabla(inst, i), suffix)
        right = _boxes(2 * m, suffix)
        parts.append(Cor(left, right))
    for i in range(k + 1, n + 1):
        parts.append(_apply_modalities(_qcsp_nabla(inst, i), _boxes(k, Prop("p"))))
    final = BOT if variant == "bot" else NegProp("p")
    parts.append(_boxes(2 * m, _boxes(k, final)))
    return _conj(parts)


def qcsp_valuation_formula(inst: QCSP13Instance, valuation, variant: str = "bot") -> Formula:
    """The classical disjunct of the reduction selected by a universal
    valuation: true universals keep their clause-membership prefix, false
    ones take the all-box prefix.  Unsatisfiable iff the valuation extends
    to a 1-in-3 solution."""
    if variant not in ("bot", "negp"):
        raise ValueError(f"variant must be 'bot' or 'negp', got {variant!r}")
    k, n, m = inst.universal_count, inst.num_variables, len(inst.clauses)
    parts = []
    for i in range(1, k + 1):
        suffix = _qcsp_universal_suffix(inst, i)
        if valuation[i]:
            parts.append(_apply_modalities(_qcsp_nabla(inst, i), suffix))
        else:
            parts.append(_boxes(2 * m, suffix))
    for i in range(k + 1, n + 1):
        parts.append(_apply_modalities(_qcsp_nabla(inst, i), _boxes(k, Prop("p"))))
    final = BOT if variant == "bot" else NegProp("p")
    parts.append(_boxes(2 * m, _boxes(k, final)))
    return _conj(parts)


def oracle_qcsp(inst: QCSP13Instance) -> bool:
    """Brute force: every universal assignment extends to an assignment
    with exactly one true variable in each clause."""
    k, n = inst.universal_count, inst.num_variables
    existentials = range(k + 1, n + 1)
    for universal_bits in product((False, True), repeat=k):
        assignment = dict(zip(range(1, k + 1), universal_bits))
        for existential_bits in product((False, True), repeat=n - k):
            assignment.update(zip(existentials, existential_bits))
            if all(sum(assignment[v] for v in clause) == 1 for clause in inst.clauses):
                break
        else:
            return False
    return True


# ---------------------------------------------------------------------------
# DQBF and QBF3 reductions (instance true iff formula satisfiable)

def _lit_negated(lit: int) -> Formula:
    return NegProp(f"p{lit}") if lit > 0 else Prop(f"p{-lit}")


def _drop_tautological(clauses):
    """Remove clauses containing a variable and its complement.

    Such clauses hold under every assignment, so the instance keeps its
    truth value; the constructed formula, however, would demand a world
    falsifying all three literals, which cannot exist."""
    return tuple(c for c in clauses if not any(-l in c for l in c))


def _tree_forcing(n: int) -> list[Formula]:
    parts = []
    for i in range(1, n + 1):
        body = And(Diamond(_boxes(n - i, Prop(f"p{i}"))),
                   Diamond(_boxes(n - i, NegProp(f"p{i}"))))
        parts.append(_boxes(i - 1, body))
    return parts


def _clause_parts(clauses, n: int) -> list[Formula]:
    parts = []
    for idx, clause in enumerate(clauses, start=1):
        body = _conj([_lit_negated(l) for l in clause] + [Prop(f"f{idx}")])
        parts.append(_diamonds(n, body))
    for idx, clause in enumerate(clauses, start=1):
        args = tuple(f"p{abs(l)}" for l in clause)
        parts.append(_boxes(n, Dep(args, f"f{idx}")))
    return parts


def reduce_dqbf(inst: DQBFInstance) -> Formula:
    """Poor man's dependence formula, satisfiable iff the instance is true.

    A complete binary tree over p1..pn is forced level by level; each
    clause contributes one witness diamond plus an all-leaves dep atom
    tying its falsity marker f_i to the clause variables; the final
    conjunct runs boxes over the universals and diamonds over the
    existentials into a leaf set avoiding every f_i and respecting the
    dependence sets.
    """
    k, n = inst.universal_count, inst.num_variables
    clauses = _drop_tautological(inst.clauses)
    m = len(clauses)
    parts = _tree_forcing(n) + _clause_parts(clauses, n)
    leaf = [NegProp(f"f{i}") for i in range(1, m + 1)]
    for offset, deps in enumerate(inst.dependence_sets):
        i = inst.universal_count + 1 + offset
        leaf.append(Dep(tuple(f"p{j}" for j in sorted(deps)), f"p{i}"))
    parts.append(_boxes(k, _diamonds(n - k, _conj(leaf))))
    return _conj(parts)


def reduce_qbf3(inst: QBF3Instance) -> Formula:
    """Same construction for exists-forall-exists 3CNF sentences; the first
    existential block is pinned by 0-ary (constancy) dep atoms and the
    trailing block needs no dep atoms at all."""
    k = inst.exists_first
    ell = inst.exists_first + inst.forall_middle
    n = inst.num_variables
    clauses = _drop_tautological(inst.clauses)
    m = len(clauses)
    parts = _tree_forcing(n) + _clause_parts(clauses, n)
    leaf = [Dep((), f"p{i}") for i in range(1, k + 1)]
    leaf += [NegProp(f"f{i}") for i in range(1, m + 1)]
    parts.append(_diamonds(k, _boxes(ell - k, _diamonds(n - ell, _conj(leaf)))))
    return _conj(parts)


def _clause_true(clause, assignment) -> bool:
    return any(assignment[abs(l)] == (l > 0) for l in clause)


def oracle_dqbf(inst: DQBFInstance) -> bool:
    """Brute force over all collections of Skolem functions (one truth
    table per existential variable over its dependence set)."""
    k, n = inst.universal_count, inst.num_variables
    dep_lists = [sorted(deps) for deps in inst.dependence_sets]
    table_spaces = [range(1 << (1 << len(deps))) for deps in dep_lists]
    for tables in product(*table_spaces):
        ok = True
        for universal_bits in product((False, True), repeat=k):
            assignment = dict(zip(range(1, k + 1), universal_bits))
            for offset, deps in enumerate(dep_lists):
                row = 0
                for v in deps:
                    row = (row << 1) | int(assignment[v])
                assignment[k + 1 + offset] = bool((tables[offset] >> row) & 1)
            if not all(_clause_true(c, assignment) for c in inst.clauses):
                ok = False
                break
        if ok:
            return True
    return False


def oracle_qbf3(inst: QBF3Instance) -> bool:
    """Brute force exists-forall-exists evaluation over the three blocks."""
    k = inst.exists_first
    ell = k + inst.forall_middle
    n = inst.num_variables
    for first in product((False, True), repeat=k):
        ok = True
        for middle in product((False, True), repeat=ell - k):
            assignment = dict(zip(range(1, ell + 1), first + middle))
            for last in product((False, True), repeat=n - ell):
                assignment.update(zip(range(ell + 1, n + 1), last))
                if all(_clause_true(c, assignment) for c in inst.clauses):
                    break
            else:
                ok = False
                break
        if ok:
            return True
    return False


# ---------------------------------------------------------------------------
# Instance text formats

def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        yield lineno, line.split()


def parse_instance(kind: str, text: str):
    """Parse an instance of one of the three source problems.

    * qcsp13: header `p qcsp13 <n> <m> <k>` (first k variables universal),
      then m lines of three distinct indices terminated by 0;
    * dqbf: QDIMACS with `a`/`e` quantifier lines and optional
      `d <var> <deps...> 0` lines overriding the sequential dependencies;
    * qbf3: QDIMACS restricted to an exists-forall-exists prefix.

    Clause lines for dqbf/qbf3 carry exactly three literals.  Variables are
    renumbered so that blocks are contiguous in prefix order; the original
    numbering is recorded on the instance.
    """
    if kind == "qcsp13":
        return _parse_qcsp13(text)
    if kind == "dqbf":
        return _parse_dqbf(text)
    if kind == "qbf3":
        return _parse_qbf3(text)
    raise ValueError(f"unknown instance kind {kind!r}")


def _parse_qcsp13(text: str) -> QCSP13Instance:
    lines = list(_content_lines(text))
    if not lines:
        raise InstanceFormatError("empty instance")
    lineno, header = lines[0]
    if len(header) != 5 or header[0] != "p" or header[1] != "qcsp13":
        raise InstanceFormatError(f"line {lineno}: expected header 'p qcsp13 <n> <m> <k>'")
    try:
        n, m, k = int(header[2]), int(header[3]), int(header[4])
    except ValueError:
        raise InstanceFormatError(f"line {lineno}: non-numeric header field") from None
    if k > n:
        raise InstanceFormatError(f"line {lineno}: universal count {k} exceeds {n} variables")
    clauses = []
    for lineno, tokens in lines[1:]:
        if tokens[-1] != "0":
            raise InstanceFormatError(f"line {lineno}: clause must end with 0")
        try:
            values = [int(t) for t in tokens[:-1]]
        except ValueError:
            raise InstanceFormatError(f"line {lineno}: non-numeric clause entry") from None
        if len(values) != 3:
            raise InstanceFormatError(f"line {lineno}: clause needs exactly 3 variables")
        if any(v <= 0 for v in values):
            raise InstanceFormatError(f"line {lineno}: variables are positive indices")
        clauses.append(tuple(values))
    if len(clauses) != m:
        raise InstanceFormatError(f"expected {m} clauses, found {len(clauses)}")
    return QCSP13Instance(k, n - k, tuple(clauses))


def _parse_qdimacs_prefix(text: str):
    """Shared QDIMACS scaffolding: header, quantifier blocks, d-lines,
    3-literal clauses.  Returns (n, blocks, deps, clauses)."""
    lines = list(_content_lines(text))
    if not lines:
        raise InstanceFormatError("empty instance")
    lineno, header = lines[0]
    if len(header) != 4 or header[0] != "p" or header[1] != "cnf":
        raise InstanceFormatError(f"line {lineno}: expected header 'p cnf <n> <m>'")
    try:
        n, m = int(header[2]), int(header[3])
    except ValueError:
        raise InstanceFormatError(f"line {lineno}: non-numeric header field") from None

    blocks: list[tuple[str, list[int]]] = []
    deps: dict[int, list[int]] = {}
    clauses: list[tuple[int, int, int]] = []
    quantified: set[int] = set()
    in_clauses = False
    for lineno, tokens in lines[1:]:
        if tokens[0] in ("a", "e", "d"):
            if in_clauses:
                raise InstanceFormatError(
                    f"line {lineno}: quantifier line after clauses began")
            if tokens[-1] != "0":
                raise InstanceFormatError(f"line {lineno}: prefix line must end with 0")
            try:
                values = [int(t) for t in tokens[1:-1]]
            except ValueError:
                raise InstanceFormatError(f"line {lineno}: non-numeric variable") from None
            if any(not 1 <= v <= n for v in values):
                raise InstanceFormatError(f"line {lineno}: variable out of range 1..{n}")
            if tokens[0] == "d":
                if not values:
                    raise InstanceFormatError(f"line {lineno}: empty d line")
                deps[values[0]] = values[1:]
            else:
                for v in values:
                    if v in quantified:
                        raise InstanceFormatError(
                            f"line {lineno}: variable {v} quantified twice")
                    quantified.add(v)
                if blocks and blocks[-1][0] == tokens[0]:
                    blocks[-1][1].extend(values)
                else:
                    blocks.append((tokens[0], list(values)))
        else:
            in_clauses = True
            if tokens[-1] != "0":
                raise InstanceFormatError(f"line {lineno}: clause must end with 0")
            try:
                lits = [int(t) for t in tokens[:-1]]
            except ValueError:
                raise InstanceFormatError(f"line {lineno}: non-numeric literal") from None
            if len(lits) != 3:
                raise InstanceFormatError(
                    f"line {lineno}: clause needs exactly 3 literals "
                    "(repeat one to pad shorter clauses)")
            if any(l == 0 or abs(l) > n for l in lits):
                raise InstanceFormatError(f"line {lineno}: literal out of range")
            clauses.append(tuple(lits))
    if len(clauses) != m:
        raise InstanceFormatError(f"expected {m} clauses, found {len(clauses)}")
    if quantified and quantified != set(range(1, n + 1)):
        missing = sorted(set(range(1, n + 1)) - quantified)
        raise InstanceFormatError(f"variables {missing} are not quantified")
    if not quantified and n > 0:
        blocks.append(("e", list(range(1, n + 1))))
    return n, blocks, deps, clauses


def _renumber_clauses(clauses, position: dict[int, int]):
    out = []
    for clause in clauses:
        out.append(tuple(position[abs(l)] * (1 if l > 0 else -1) for l in clause))
    return tuple(out)


def _parse_dqbf(text: str) -> DQBFInstance:
    n, blocks, deps, clauses = _parse_qdimacs_prefix(text)
    universals: list[int] = []
    existentials: list[int] = []
    default_deps: dict[int, list[int]] = {}
    for quant, variables in blocks:
        for v in variables:
            if quant == "a":
                universals.append(v)
            else:
                existentials.append(v)
                default_deps[v] = list(universals)
    for v, dvars in deps.items():
        if v not in default_deps:
            raise InstanceFormatError(f"d line for non-existential variable {v}")
        bad = [u for u in dvars if u not in universals]
        if bad:
            raise InstanceFormatError(
                f"d line for {v} references non-universal variables {bad}")
        default_deps[v] = dvars

    order = universals + existentials
    position = {orig: i + 1 for i, orig in enumerate(order)}
    dep_sets = tuple(
        frozenset(position[u] for u in default_deps[v]) for v in existentials)
    return DQBFInstance(
        universal_count=len(universals),
        existential_count=len(existentials),
        dependence_sets=dep_sets,
        clauses=_renumber_clauses(clauses, position),
        original_order=tuple(order),
    )


def _parse_qbf3(text: str) -> QBF3Instance:
    n, blocks, deps, clauses = _parse_qdimacs_prefix(text)
    if deps:
        raise InstanceFormatError("d lines are not part of the qbf3 format")
    shapes = {
        (): (0, 0, 0),
        ("e",): (2,),            # a lone exists block is the trailing one
        ("a",): (1,),
        ("e", "a"): (0, 1),
        ("a", "e"): (1, 2),
        ("e", "a", "e"): (0, 1, 2),
    }
    key = tuple(q for q, _ in blocks)
    if key not in shapes:
        raise InstanceFormatError(
            f"prefix {'/'.join(key)} is not of exists-forall-exists shape")
    slots: list[list[int]] = [[], [], []]
    for slot, (_, variables) in zip(shapes[key], blocks):
        slots[slot] = list(variables)
    order = slots[0] + slots[1] + slots[2]
    position = {orig: i + 1 for i, orig in enumerate(order)}
    return QBF3Instance(
        exists_first=len(slots[0]),
        forall_middle=len(slots[1]),
        exists_last=len(slots[2]),
        clauses=_renumber_clauses(clauses, position),
        original_order=tuple(order),
    )
