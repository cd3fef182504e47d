"""Modal dependence logic formulas: AST, concrete syntax, signatures, rewrites.

The nine operators are box `[]`, diamond `<>`, conjunction `&`, dependence
disjunction `|`, classical disjunction `||`, atomic negation `~`, the
constants `top` and `bot`, and dependence atoms `dep(p1,...,pk;q)`.
Negation is only available on propositions and dependence atoms.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

__all__ = [
    "Formula", "Top", "Bot", "Prop", "NegProp", "Dep", "NegDep",
    "And", "Or", "Cor", "Box", "Diamond",
    "TOP", "BOT", "OPERATORS", "FragmentSignature", "FormulaSyntaxError",
    "parse", "render", "signature", "modal_depth", "size", "propositions",
    "normalize_neg_dep", "monotone_collapse", "single_modality_collapse",
]


class Formula:
    """Base class for AST nodes. Nodes are immutable and hashable."""

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True)
class Top(Formula):
    pass


@dataclass(frozen=True)
class Bot(Formula):
    pass


@dataclass(frozen=True)
class Prop(Formula):
    name: str


@dataclass(frozen=True)
class NegProp(Formula):
    name: str


@dataclass(frozen=True)
class Dep(Formula):
    """dep(args; target): target is determined by args on the whole team."""
    args: tuple[str, ...]
    target: str

    @property
    def arity(self) -> int:
        return len(self.args)


@dataclass(frozen=True)
class NegDep(Formula):
    args: tuple[str, ...]
    target: str

    @property
    def arity(self) -> int:
        return len(self.args)


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    """Dependence disjunction: the team splits into two parts."""
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Cor(Formula):
    """Classical disjunction: the whole team satisfies one side."""
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Box(Formula):
    child: Formula


@dataclass(frozen=True)
class Diamond(Formula):
    child: Formula


def _install_hash_caching():
    # Formula trees get hashed heavily (memo keys, dedup sets); the
    # dataclass hash walks the whole subtree every call, so cache it per
    # node.  The class name is mixed in because the generated hash only
    # covers field values.
    for cls in (Top, Bot, Prop, NegProp, Dep, NegDep, And, Or, Cor, Box, Diamond):
        generated = cls.__hash__

        def cached(self, _generated=generated, _name=cls.__name__):
            value = self.__dict__.get("_hash")
            if value is None:
                value = hash((_name, _generated(self)))
                object.__setattr__(self, "_hash", value)
            return value

        cls.__hash__ = cached


_install_hash_caching()

TOP = Top()
BOT = Bot()

# Operator flags as they appear in fragment signatures.
OPERATORS = ("box", "diamond", "and", "or", "neg", "top", "bot", "dep", "cor")

_KEYWORDS = {"top", "bot", "dep"}


@dataclass(frozen=True)
class FragmentSignature:
    """Which operators occur in a formula, plus the largest dep-atom arity.

    `max_dep_arity` is None exactly when no dependence atom occurs.  A
    negated dependence atom raises both the `dep` and the `neg` flag.
    """
    operators: frozenset[str]
    max_dep_arity: int | None

    def __post_init__(self):
        unknown = self.operators - set(OPERATORS)
        if unknown:
            raise ValueError(f"unknown operator flags: {sorted(unknown)}")
        if ("dep" in self.operators) != (self.max_dep_arity is not None):
            raise ValueError("max_dep_arity must be set iff dep occurs")

    def has(self, op: str) -> bool:
        return op in self.operators


class FormulaSyntaxError(ValueError):
    """Raised on malformed formula text; carries the offending position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


_TOKEN_RE = re.compile(
    r"""
    (?P<space>\s+)
  | (?P<ident>[a-z][a-z0-9_]*)
  | (?P<cor>\|\|)
  | (?P<or>\|)
  | (?P<and>&)
  | (?P<neg>~)
  | (?P<box>\[\])
  | (?P<diamond><>)
  | (?P<lpar>\()
  | (?P<rpar>\))
  | (?P<comma>,)
  | (?P<semi>;)
    """,
    re.VERBOSE,
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "space":
            tokens.append((kind, m.group(), pos))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def _peek(self):
        if self.pos < len(self.tokens):
            return self.tokens[self.pos]
        return ("eof", "", len(self.text))

    def _next(self):
        tok = self._peek()
        self.pos += 1
        return tok

    def _expect(self, kind: str, what: str):
        tok = self._next()
        if tok[0] != kind:
            raise FormulaSyntaxError(f"expected {what}, found {tok[1]!r}" if tok[1]
                                     else f"expected {what}, found end of input", tok[2])
        return tok

    def parse(self) -> Formula:
        f = self._cor()
        tok = self._peek()
        if tok[0] != "eof":
            raise FormulaSyntaxError(f"unexpected trailing input {tok[1]!r}", tok[2])
        return f

    # Precedence, loosest first: ||, |, &, unary.  All binary operators
    # are left-associative.

    def _cor(self) -> Formula:
        f = self._or()
        while self._peek()[0] == "cor":
            self._next()
            f = Cor(f, self._or())
        return f

    def _or(self) -> Formula:
        f = self._and()
        while self._peek()[0] == "or":
            self._next()
            f = Or(f, self._and())
        return f

    def _and(self) -> Formula:
        f = self._unary()
        while self._peek()[0] == "and":
            self._next()
            f = And(f, self._unary())
        return f

    def _unary(self) -> Formula:
        kind, text, pos = self._peek()
        if kind == "box":
            self._next()
            return Box(self._unary())
        if kind == "diamond":
            self._next()
            return Diamond(self._unary())
        if kind == "neg":
            self._next()
            return self._negated(pos)
        return self._atom()

    def _negated(self, neg_pos: int) -> Formula:
        kind, text, pos = self._peek()
        if kind == "ident" and text == "dep":
            args, target = self._dep_body()
            return NegDep(args, target)
        if kind == "ident" and text not in _KEYWORDS:
            self._next()
            return NegProp(text)
        raise FormulaSyntaxError(
            "negation applies only to propositions and dependence atoms", neg_pos)

    def _atom(self) -> Formula:
        kind, text, pos = self._next()
        if kind == "lpar":
            f = self._cor()
            self._expect("rpar", "')'")
            return f
        if kind == "ident":
            if text == "top":
                return TOP
            if text == "bot":
                return BOT
            if text == "dep":
                self.pos -= 1
                args, target = self._dep_body()
                return Dep(args, target)
            return Prop(text)
        raise FormulaSyntaxError(f"expected a formula, found {text!r}" if text
                                 else "expected a formula, found end of input", pos)

    def _dep_body(self) -> tuple[tuple[str, ...], str]:
        self._expect("ident", "'dep'")
        self._expect("lpar", "'(' after dep")
        args = []
        if self._peek()[0] == "ident":
            args.append(self._prop_name())
            while self._peek()[0] == "comma":
                self._next()
                args.append(self._prop_name())
        self._expect("semi", "';' in dependence atom")
        target = self._prop_name()
        self._expect("rpar", "')' closing dependence atom")
        return tuple(args), target

    def _prop_name(self) -> str:
        kind, text, pos = self._next()
        if kind != "ident" or text in _KEYWORDS:
            raise FormulaSyntaxError(
                f"expected a proposition name, found {text!r}" if text
                else "expected a proposition name, found end of input", pos)
        return text


def parse(text: str) -> Formula:
    """Parse formula text into its AST.

    Unary operators bind tightest, then `&`, then `|`, then `||`; binary
    operators are left-associative.  Raises FormulaSyntaxError on bad input,
    including negation applied to anything but a proposition or dep atom.
    """
    return _Parser(text).parse()


def _render_binary_child(child: Formula, parent_type: type, right: bool) -> str:
    if isinstance(child, (And, Or, Cor)):
        if type(child) is not parent_type or right:
            return "(" + render(child) + ")"
    return render(child)


def render(f: Formula) -> str:
    """Render to concrete syntax; parse(render(f)) == f."""
    if isinstance(f, Top):
        return "top"
    if isinstance(f, Bot):
        return "bot"
    if isinstance(f, Prop):
        return f.name
    if isinstance(f, NegProp):
        return "~" + f.name
    if isinstance(f, Dep):
        return "dep(%s;%s)" % (",".join(f.args), f.target)
    if isinstance(f, NegDep):
        return "~dep(%s;%s)" % (",".join(f.args), f.target)
    if isinstance(f, Box):
        inner = render(f.child)
        if isinstance(f.child, (And, Or, Cor)):
            inner = "(" + inner + ")"
        return "[]" + inner
    if isinstance(f, Diamond):
        inner = render(f.child)
        if isinstance(f.child, (And, Or, Cor)):
            inner = "(" + inner + ")"
        return "<>" + inner
    if isinstance(f, And):
        return _render_binary_child(f.left, And, False) + " & " + \
            _render_binary_child(f.right, And, True)
    if isinstance(f, Or):
        return _render_binary_child(f.left, Or, False) + " | " + \
            _render_binary_child(f.right, Or, True)
    if isinstance(f, Cor):
        return _render_binary_child(f.left, Cor, False) + " || " + \
            _render_binary_child(f.right, Cor, True)
    raise TypeError(f"not a formula node: {f!r}")


def signature(f: Formula) -> FragmentSignature:
    """Extract the set of operators occurring in f and the maximal dep arity."""
    ops: set[str] = set()
    arity: list[int] = []

    def walk(node: Formula) -> None:
        if isinstance(node, Top):
            ops.add("top")
        elif isinstance(node, Bot):
            ops.add("bot")
        elif isinstance(node, Prop):
            pass
        elif isinstance(node, NegProp):
            ops.add("neg")
        elif isinstance(node, Dep):
            ops.add("dep")
            arity.append(node.arity)
        elif isinstance(node, NegDep):
            ops.update(("dep", "neg"))
            arity.append(node.arity)
        elif isinstance(node, And):
            ops.add("and")
            walk(node.left)
            walk(node.right)
        elif isinstance(node, Or):
            ops.add("or")
            walk(node.left)
            walk(node.right)
        elif isinstance(node, Cor):
            ops.add("cor")
            walk(node.left)
            walk(node.right)
        elif isinstance(node, Box):
            ops.add("box")
            walk(node.child)
        elif isinstance(node, Diamond):
            ops.add("diamond")
            walk(node.child)
        else:
            raise TypeError(f"not a formula node: {node!r}")

    walk(f)
    return FragmentSignature(frozenset(ops), max(arity) if arity else None)


def modal_depth(f: Formula) -> int:
    """Maximum nesting of box/diamond operators."""
    if isinstance(f, (Box, Diamond)):
        return 1 + modal_depth(f.child)
    if isinstance(f, (And, Or, Cor)):
        return max(modal_depth(f.left), modal_depth(f.right))
    return 0


def size(f: Formula) -> int:
    """Number of AST nodes (a dependence atom counts as one node)."""
    if isinstance(f, (And, Or, Cor)):
        return 1 + size(f.left) + size(f.right)
    if isinstance(f, (Box, Diamond)):
        return 1 + size(f.child)
    return 1


def propositions(f: Formula) -> frozenset[str]:
    """All proposition names occurring in f (including inside dep atoms)."""
    out: set[str] = set()

    def walk(node: Formula) -> None:
        if isinstance(node, (Prop, NegProp)):
            out.add(node.name)
        elif isinstance(node, (Dep, NegDep)):
            out.update(node.args)
            out.add(node.target)
        elif isinstance(node, (And, Or, Cor)):
            walk(node.left)
            walk(node.right)
        elif isinstance(node, (Box, Diamond)):
            walk(node.child)

    walk(f)
    return frozenset(out)


def _map_children(f: Formula, fn) -> Formula:
    if isinstance(f, (And, Or, Cor)):
        return type(f)(fn(f.left), fn(f.right))
    if isinstance(f, (Box, Diamond)):
        return type(f)(fn(f.child))
    return f


def normalize_neg_dep(f: Formula) -> Formula:
    """Replace every negated dependence atom by bot.

    A negated dep atom holds only on the empty team, exactly like bot, so
    this rewrite preserves truth on every structure and team.
    """
    if isinstance(f, NegDep):
        return BOT
    return _map_children(f, normalize_neg_dep)


def monotone_collapse(f: Formula) -> Formula:
    """Replace every proposition and dep atom with the single proposition t.

    Only valid on negation-free input (satisfiability is then preserved,
    because any model can be repainted with every proposition true).
    Rejects formulas containing ~p or ~dep.
    """
    if isinstance(f, NegProp):
        raise ValueError("monotone collapse requires a negation-free formula")
    if isinstance(f, NegDep):
        raise ValueError("monotone collapse requires a negation-free formula")
    if isinstance(f, (Prop, Dep)):
        return Prop("t")
    return _map_children(f, monotone_collapse)


def single_modality_collapse(f: Formula) -> Formula:
    """Rewrite for formulas using at most one of box/diamond.

    dep atoms become top, ~dep becomes bot, and classical disjunction
    becomes dependence disjunction; satisfiability is unchanged because
    every subformula is evaluated on a singleton (or smaller) team there.
    Rejects formulas containing both modalities.
    """
    sig = signature(f)
    if sig.has("box") and sig.has("diamond"):
        raise ValueError("single-modality collapse requires at most one modality")

    def go(node: Formula) -> Formula:
        if isinstance(node, Dep):
            return TOP
        if isinstance(node, NegDep):
            return BOT
        if isinstance(node, Cor):
            return Or(go(node.left), go(node.right))
        return _map_children(node, go)

    return go(f)
