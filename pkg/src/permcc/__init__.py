"""Congruence closure of ground equations modulo permutation equations."""

from permcc.engine import Caps, EngineState, run_fair_mu
from permcc.etheory import PermTheory, canonical_term, decompose, ground_eq_mod_e
from permcc.permgroup import Permutation, from_cycles, generate
from permcc.rewriter import ClosureSystem, decide_word, normalize
from permcc.terms import App, Equation, KConst, Signature, Symbol

__all__ = [
    "App", "Caps", "ClosureSystem", "EngineState", "Equation", "KConst", "PermTheory",
    "Permutation", "Signature", "Symbol", "canonical_term", "decide_word", "decompose",
    "from_cycles", "generate", "ground_eq_mod_e", "normalize", "run_fair_mu",
]
