"""Modal dependence logic workbench.

Parsing and printing of MDL formulas, team-semantics model checking,
complete satisfiability solving with cross-checking engines, complexity
classification of operator fragments, and constructive hardness
reductions from three quantified-Boolean source problems.
"""

from .formula import (
    And, Bot, Box, Cor, Dep, Diamond, Formula, FragmentSignature, NegDep,
    NegProp, Or, Prop, Top, modal_depth, monotone_collapse,
    normalize_neg_dep, parse, render, signature, single_modality_collapse,
)
from .kripke import (
    KripkeStructure, build_full_binary_tree, parse_structure,
    render_structure, successors,
)
from .teamsem import check, check_ml
from .solver import (
    SatResult, Verdict, alpha_encoding, expand_cor, ladner_sat, sat,
    sat_bruteforce, sat_conjunction_of_literals, sat_no_conjunction,
    to_nnf_ml, translate_singleton,
)
from .classifier import Classification, ClassificationRule, classify, rules
from .reductions import (
    DQBFInstance, QBF3Instance, QCSP13Instance, oracle_dqbf, oracle_qbf3,
    oracle_qcsp, parse_instance, reduce_dqbf, reduce_qbf3, reduce_qcsp,
)

__version__ = "0.1.0"
