import hypothesis.strategies as st
import pytest
from hypothesis import given

from mdlsat.formula import (
    And, BOT, Box, Cor, Dep, Diamond, FormulaSyntaxError, NegDep, NegProp,
    Or, Prop, TOP, modal_depth, monotone_collapse, normalize_neg_dep, parse,
    render, signature, single_modality_collapse, size,
)


# --- parsing ---------------------------------------------------------------

def test_parse_constants():
    assert parse("top") == TOP
    assert parse("bot") == BOT


def test_parse_dep_and_diamond():
    f = parse("dep(p1,p2;p3) & <>q")
    assert f == And(Dep(("p1", "p2"), "p3"), Diamond(Prop("q")))


def test_parse_zero_ary_dep():
    assert parse("dep(;p)") == Dep((), "p")
    assert parse("~dep(;p)") == NegDep((), "p")


def test_negation_of_compound_rejected():
    with pytest.raises(FormulaSyntaxError) as err:
        parse("~(p & q)")
    assert "negation" in str(err.value)


@pytest.mark.parametrize("bad", ["~top", "~bot", "~~p", "~<>p", "~[]p"])
def test_negation_only_atomic(bad):
    with pytest.raises(FormulaSyntaxError):
        parse(bad)


@pytest.mark.parametrize("bad", [
    "dep(p,q)",        # missing determined variable
    "dep(p;q;r)",      # two semicolons
    "dep(p,;q)",       # trailing comma
    "dep(;top)",       # keyword as proposition
    "dep(p q)",        # missing separators
])
def test_malformed_dep_lists(bad):
    with pytest.raises(FormulaSyntaxError):
        parse(bad)


def test_syntax_error_carries_position():
    with pytest.raises(FormulaSyntaxError) as err:
        parse("p & ?")
    assert err.value.position == 4


def test_trailing_input_rejected():
    with pytest.raises(FormulaSyntaxError):
        parse("p q")


def test_precedence_unary_and_or_cor():
    assert parse("[]p & q") == And(Box(Prop("p")), Prop("q"))
    assert parse("p & q | r") == Or(And(Prop("p"), Prop("q")), Prop("r"))
    assert parse("p | q || r") == Cor(Or(Prop("p"), Prop("q")), Prop("r"))
    assert parse("p || q | r") == Cor(Prop("p"), Or(Prop("q"), Prop("r")))


def test_left_associativity():
    assert parse("p & q & r") == And(And(Prop("p"), Prop("q")), Prop("r"))
    assert parse("p | q | r") == Or(Or(Prop("p"), Prop("q")), Prop("r"))


def test_whitespace_insignificant():
    assert parse(" [] <> dep ( p ; q ) ") == parse("[]<>dep(p;q)")


# --- rendering -------------------------------------------------------------

def test_render_examples():
    assert render(TOP) == "top"
    assert render(Dep((), "p")) == "dep(;p)"
    assert render(Cor(Prop("p"), Or(Prop("q"), Prop("r")))) == "p || (q | r)"


def test_render_box_of_conjunction():
    assert render(Box(And(Prop("p"), Prop("q")))) == "[](p & q)"


_names = st.sampled_from(["p", "q", "r", "p1"])
_atoms = st.one_of(
    st.just(TOP),
    st.just(BOT),
    st.builds(Prop, _names),
    st.builds(NegProp, _names),
    st.builds(Dep, st.lists(_names, max_size=2).map(tuple), _names),
    st.builds(NegDep, st.lists(_names, max_size=2).map(tuple), _names),
)
_formulas = st.recursive(
    _atoms,
    lambda sub: st.one_of(
        st.builds(And, sub, sub),
        st.builds(Or, sub, sub),
        st.builds(Cor, sub, sub),
        st.builds(Box, sub),
        st.builds(Diamond, sub),
    ),
    max_leaves=12,
)


@given(_formulas)
def test_parse_render_round_trip(f):
    assert parse(render(f)) == f


@given(st.text(alphabet="pq dept(;,)~&|[]<>bo", max_size=30))
def test_parser_never_crashes(text):
    # arbitrary input either parses or raises the positioned syntax error
    try:
        parse(text)
    except FormulaSyntaxError:
        pass


# --- signatures ------------------------------------------------------------

def test_signature_examples():
    sig = signature(parse("p & ~q"))
    assert sig.operators == frozenset({"and", "neg"})
    assert sig.max_dep_arity is None

    sig = signature(parse("[]dep(p;q) | <>bot"))
    assert sig.operators == frozenset({"box", "diamond", "or", "dep", "bot"})
    assert sig.max_dep_arity == 1


def test_negdep_raises_both_flags():
    sig = signature(parse("~dep(p,q;r)"))
    assert sig.operators == frozenset({"dep", "neg"})
    assert sig.max_dep_arity == 2


# --- rewrites --------------------------------------------------------------

def test_normalize_neg_dep_examples():
    assert normalize_neg_dep(NegDep(("p",), "q")) == BOT
    f = parse("[](p | dep(q;r))")
    assert normalize_neg_dep(f) == f
    assert normalize_neg_dep(And(NegDep((), "p"), TOP)) == And(BOT, TOP)


def test_monotone_collapse_examples():
    assert monotone_collapse(parse("dep(p;q) & r")) == parse("t & t")
    assert monotone_collapse(parse("top")) == parse("top")
    assert monotone_collapse(parse("<>(p | dep(q;r))")) == parse("<>(t | t)")


def test_monotone_collapse_rejects_negation():
    with pytest.raises(ValueError):
        monotone_collapse(parse("~p & q"))
    with pytest.raises(ValueError):
        monotone_collapse(parse("~dep(p;q)"))


def test_single_modality_collapse_examples():
    assert single_modality_collapse(parse("[](dep(p;q) || r)")) == parse("[](top | r)")
    assert single_modality_collapse(parse("<>p")) == parse("<>p")
    with pytest.raises(ValueError):
        single_modality_collapse(parse("[]p & <>q"))


def test_single_modality_collapse_removes_dep_and_cor():
    f = parse("<>(dep(p;q) || ~dep(;r)) & (p || q)")
    out = single_modality_collapse(f)
    ops = signature(out).operators
    assert "dep" not in ops and "cor" not in ops


@given(_formulas)
def test_normalize_neg_dep_idempotent(f):
    once = normalize_neg_dep(f)
    assert normalize_neg_dep(once) == once


@given(_formulas)
def test_collapses_idempotent(f):
    sig = signature(f)
    if "neg" not in sig.operators:
        once = monotone_collapse(f)
        assert monotone_collapse(once) == once
    if not (sig.has("box") and sig.has("diamond")):
        once = single_modality_collapse(f)
        assert single_modality_collapse(once) == once


# --- measures --------------------------------------------------------------

def test_modal_depth():
    assert modal_depth(parse("p & q")) == 0
    assert modal_depth(parse("[]<>p")) == 2
    assert modal_depth(parse("[](p & <>q) | <>r")) == 2


def test_size_counts_dep_as_one_node():
    assert size(parse("dep(p,q,r;s)")) == 1
    assert size(parse("p & q")) == 3
