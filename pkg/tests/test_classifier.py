import random

import pytest

from mdlsat.classifier import COMPLEXITY_LEVELS, classify, rules
from mdlsat.formula import OPERATORS, FragmentSignature, signature
from mdlsat.randgen import random_formula
from mdlsat.solver import sat


def _sig(*ops, arity=None):
    ops = frozenset(ops)
    if "dep" in ops and arity is None:
        arity = 1
    return FragmentSignature(ops, arity)


def test_classify_full_dep_fragment_unbounded():
    result = classify(_sig("box", "diamond", "and", "neg", "dep"))
    assert result.complexity == "NEXPTIME"
    assert result.result_kind == "completeness"


def test_classify_full_dep_fragment_bounded():
    result = classify(_sig("box", "diamond", "and", "neg", "dep", arity=3),
                      arity_bound=3)
    assert result.complexity == "Sigma_3^p"
    assert result.result_kind == "completeness"
    assert not result.arity_caveat


def test_classify_monotone_fragment_trivial():
    result = classify(_sig("box", "diamond", "or", "top", "dep"))
    assert result.complexity == "trivial"


def test_classify_propositional_np():
    result = classify(_sig("and", "or", "neg"))
    assert result.complexity == "NP"
    assert result.result_kind == "completeness"


def test_rule_tables_have_21_rows_each():
    assert len(rules("unbounded")) == 21
    assert len(rules("bounded")) == 21


def test_every_rule_carries_a_citation():
    for regime in ("unbounded", "bounded"):
        for rule in rules(regime):
            assert rule.citation
            assert rule.complexity in COMPLEXITY_LEVELS
            expected_kind = "upper_bound" if rule.complexity == "P" else "completeness"
            assert rule.result_kind == expected_kind


def test_unknown_regime_rejected():
    with pytest.raises(ValueError):
        rules("sideways")


def _all_signatures():
    for bits in range(1 << len(OPERATORS)):
        ops = frozenset(op for i, op in enumerate(OPERATORS) if (bits >> i) & 1)
        yield FragmentSignature(ops, 2 if "dep" in ops else None)


def test_totality_and_chain_consistency():
    # classify() itself raises if no rule matches or matched classes are
    # incomparable; running it over every signature in both regimes is the
    # exhaustive check.
    for sig in _all_signatures():
        for bound in (None, 3):
            result = classify(sig, bound)
            assert result.matched_rules
            best = COMPLEXITY_LEVELS[result.complexity]
            assert all(COMPLEXITY_LEVELS[r.complexity] >= best
                       for r in result.matched_rules)


def test_trivial_exactly_when_monotone_without_bot():
    for sig in _all_signatures():
        expected = not sig.has("neg") and not sig.has("bot")
        assert (classify(sig).complexity == "trivial") == expected


def test_arity_caveat_for_small_bounds():
    sig = _sig("box", "diamond", "and", "neg", "dep", arity=2)
    assert classify(sig, arity_bound=2).arity_caveat
    assert classify(sig, arity_bound=0).arity_caveat
    assert not classify(sig, arity_bound=5).arity_caveat
    assert not classify(sig).arity_caveat


def test_engine_recommendation():
    assert classify(_sig("or", "diamond")).recommended_engine == "no_conjunction"
    assert classify(_sig("and", "neg")).recommended_engine == "literal_conjunction"
    assert classify(_sig("and", "diamond")).recommended_engine == "pipeline"


def test_routing_soundness_no_conjunction():
    rng = random.Random(211)
    ops = {"box", "diamond", "or", "cor", "neg", "top", "bot", "dep"}
    for _ in range(200):
        f = random_formula(rng, ["p", "q"], rng.randint(1, 9), ops, 1)
        engine = classify(signature(f)).recommended_engine
        assert engine == "no_conjunction"
        assert sat(f, engine=engine).satisfiable == sat(f, engine="pipeline").satisfiable


def test_routing_soundness_literal_conjunction():
    rng = random.Random(223)
    ops = {"and", "neg", "top", "bot", "dep"}
    for _ in range(200):
        f = random_formula(rng, ["p", "q"], rng.randint(2, 9), ops, 1)
        engine = classify(signature(f)).recommended_engine
        assert engine in ("literal_conjunction", "no_conjunction")
        assert sat(f, engine=engine).satisfiable == sat(f, engine="pipeline").satisfiable


def test_trivial_fragments_really_are_trivial():
    # semantic check of the trivial table row: fragments without negation
    # and bot only produce satisfiable formulas
    rng = random.Random(227)
    trivial_ops = {"box", "diamond", "and", "or", "top", "dep", "cor"}
    for _ in range(100):
        f = random_formula(rng, ["p", "q"], rng.randint(1, 9), trivial_ops, 1)
        assert classify(signature(f)).complexity == "trivial"
        assert sat(f, engine="pipeline").satisfiable, f
