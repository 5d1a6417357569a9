"""Finitely presented group engine.

Words are freely reduced sequences of signed generator letters; presentations
carry named generators plus relator words and round-trip through a small text
grammar.  On top of that sit integer Smith normal form / abelianization,
Todd-Coxeter coset enumeration, Reidemeister-Schreier rewriting for kernels of
cyclic characters, Tietze simplification, a bounded search for relator
consequences, and the catalog of built-in presentations used elsewhere in the
package.
"""

from .words import Word
from .presentation import (
    BadParameters,
    CyclicCharacter,
    GrammarError,
    NotSurjective,
    Presentation,
)
from .snf import AbelianInvariants, abelianize, smith_normal_form
from .coset import CosetTable, IncompleteTable, derived_series_finite, todd_coxeter
from .rewrite import (
    CONSEQUENCE,
    UNKNOWN,
    NotEliminable,
    central_in_class2,
    consequence_search,
    kill_generators,
    reidemeister_schreier,
    tietze_eliminate,
    tietze_simplify,
)
from .catalog import BUILTIN_NAMES, builtin_presentation, k1hat_via_rewriting

__all__ = [
    "AbelianInvariants",
    "BUILTIN_NAMES",
    "BadParameters",
    "CONSEQUENCE",
    "CosetTable",
    "CyclicCharacter",
    "GrammarError",
    "IncompleteTable",
    "NotEliminable",
    "NotSurjective",
    "Presentation",
    "UNKNOWN",
    "Word",
    "abelianize",
    "builtin_presentation",
    "central_in_class2",
    "consequence_search",
    "derived_series_finite",
    "k1hat_via_rewriting",
    "kill_generators",
    "reidemeister_schreier",
    "smith_normal_form",
    "tietze_eliminate",
    "tietze_simplify",
    "todd_coxeter",
]
