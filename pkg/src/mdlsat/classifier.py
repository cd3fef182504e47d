"""Complexity classification of operator fragments.

Each rule states, for one combination of required/forbidden operators, the
exact complexity of the satisfiability problem for formulas within that
fragment (P entries are upper bounds, everything else is a completeness
result).  There are two rule tables: one for unbounded dependence-atom
arity and one for arity bounded by a constant k >= 3.  Rules may overlap;
whenever several match, their classes always lie on one chain of the
inclusion order, and the classification reports the least class, which is
the tightest statement the tables support.
"""

from __future__ import annotations

from dataclasses import dataclass

from .formula import OPERATORS, FragmentSignature

__all__ = ["ClassificationRule", "Classification", "classify", "rules",
           "COMPLEXITY_LEVELS"]

# Position in the inclusion chain trivial < P < {NP, coNP} < Sigma_2^p
# < Sigma_3^p < PSPACE < NEXPTIME.  NP and coNP share a level and are
# incomparable; no fragment matches rules of both.
COMPLEXITY_LEVELS = {
    "trivial": 0,
    "P": 1,
    "NP": 2,
    "coNP": 2,
    "Sigma_2^p": 3,
    "Sigma_3^p": 4,
    "PSPACE": 5,
    "NEXPTIME": 6,
}


@dataclass(frozen=True)
class ClassificationRule:
    """One table row: a 9-character pattern over the operators
    (box, diamond, and, or, neg, top, bot, dep, cor), with '+' required,
    '-' forbidden and '*' irrelevant."""
    pattern: str
    regime: str               # "unbounded" | "bounded"
    complexity: str
    result_kind: str          # "completeness" | "upper_bound"
    citation: str

    def matches(self, sig: FragmentSignature) -> bool:
        for op, req in zip(OPERATORS, self.pattern):
            if req == "+" and not sig.has(op):
                return False
            if req == "-" and sig.has(op):
                return False
        return True


def _rule(pattern, regime, complexity, citation):
    kind = "upper_bound" if complexity == "P" else "completeness"
    return ClassificationRule(pattern, regime, complexity, kind, citation)


# Pattern columns: box diamond and or neg top bot dep cor.
_SHARED_LOWER = [
    # one modality only
    ("+-+++****", "NP", "np-single-modality-disjunction"),
    ("-++++****", "NP", "np-single-modality-disjunction"),
    ("+-+-+***+", "NP", "np-single-modality-disjunction"),
    ("-++-+***+", "NP", "np-single-modality-disjunction"),
    ("+-+-+***-", "P", "p-single-modality-negation"),
    ("-++-+***-", "P", "p-single-modality-negation"),
    ("+-+*-****", "P", "p-single-modality-monotone"),
    ("-++*-****", "P", "p-single-modality-monotone"),
    ("**-******", "P", "p-no-conjunction"),
    ("****-*-**", "trivial", "trivial-monotone-no-bot"),
    # no modalities
    ("--+++****", "NP", "cook-1971"),
    ("--+*+***+", "NP", "cook-1971-classical-disjunction"),
    ("--*-****-", "P", "p-literal-conjunction"),
    ("--**-****", "P", "p-monotone-evaluation"),
]

_UNBOUNDED_UPPER = [
    ("+++*+**+*", "NEXPTIME", "nexptime-unbounded-dep"),
    ("+++++**-*", "PSPACE", "pspace-full-negation"),
    ("++++-*+**", "PSPACE", "pspace-monotone-bot"),
    ("+++-+**-+", "Sigma_2^p", "sigma2p-monotone-poor-mans"),
    ("+++--*+*+", "Sigma_2^p", "sigma2p-monotone-poor-mans"),
    ("+++-+**--", "coNP", "ladner-1977-donini-1992"),
    ("+++--*+*-", "coNP", "conp-poor-mans-bot"),
]

_BOUNDED_UPPER = [
    ("+++++****", "PSPACE", "pspace-bounded-dep"),
    ("++++-*+**", "PSPACE", "pspace-monotone-bot"),
    ("+++-+**+*", "Sigma_3^p", "sigma3p-bounded-poor-mans-dep"),
    ("+++-+**-+", "Sigma_2^p", "sigma2p-monotone-poor-mans"),
    ("+++--*+*+", "Sigma_2^p", "sigma2p-monotone-poor-mans"),
    ("+++-+**--", "coNP", "ladner-1977-donini-1992"),
    ("+++--*+*-", "coNP", "conp-poor-mans-bot"),
]

_RULES = {
    "unbounded": tuple(_rule(p, "unbounded", c, cite) for p, c, cite in _UNBOUNDED_UPPER)
    + tuple(_rule(p, "unbounded", c, cite) for p, c, cite in _SHARED_LOWER),
    "bounded": tuple(_rule(p, "bounded", c, cite) for p, c, cite in _BOUNDED_UPPER)
    + tuple(_rule(p, "bounded", c, cite) for p, c, cite in _SHARED_LOWER),
}


@dataclass(frozen=True)
class Classification:
    complexity: str
    result_kind: str
    matched_rules: tuple[ClassificationRule, ...]
    recommended_engine: str
    # Set when a bounded classification was requested for k < 3: the
    # bounded table is only stated for k >= 3, so the answer is an upper
    # bound that may not be tight for smaller arities.
    arity_caveat: bool = False


def rules(regime: str) -> tuple[ClassificationRule, ...]:
    """The full encoded rule table for one regime."""
    if regime not in _RULES:
        raise ValueError(f"regime must be 'unbounded' or 'bounded', got {regime!r}")
    return _RULES[regime]


def _recommend(sig: FragmentSignature) -> str:
    if not sig.has("and"):
        return "no_conjunction"
    if not any(sig.has(op) for op in ("box", "diamond", "or", "cor")):
        return "literal_conjunction"
    return "pipeline"


def classify(sig: FragmentSignature, arity_bound: int | None = None) -> Classification:
    """Look up the complexity of a fragment signature.

    With arity_bound given, the bounded-arity table applies; bounds below 3
    still answer from that table but carry a caveat flag.
    """
    regime = "unbounded" if arity_bound is None else "bounded"
    matched = tuple(r for r in _RULES[regime] if r.matches(sig))
    if not matched:
        raise AssertionError(f"no rule matches signature {sorted(sig.operators)}")
    names_by_level: dict[int, set[str]] = {}
    for r in matched:
        names_by_level.setdefault(COMPLEXITY_LEVELS[r.complexity], set()).add(r.complexity)
    for level, names in names_by_level.items():
        if len(names) > 1:
            raise AssertionError(
                f"incomparable classes {sorted(names)} matched for {sorted(sig.operators)}")
    best = min(matched, key=lambda r: COMPLEXITY_LEVELS[r.complexity])
    return Classification(
        complexity=best.complexity,
        result_kind=best.result_kind,
        matched_rules=matched,
        recommended_engine=_recommend(sig),
        arity_caveat=arity_bound is not None and arity_bound < 3,
    )
