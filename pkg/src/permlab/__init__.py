"""permlab: exact arithmetic for perm algebras.

A perm algebra is an associative algebra with (xy)z = x(zy).  Structure
constants live in numpy arrays over Q (``Fraction`` objects) or GF(p)
(``int64``); every check returns a :class:`Verdict` listing each failing
identity at its basis indices.
"""
__version__ = "0.1.0"

from .errors import PermlabError, ParseError, SearchBoundExceeded  # noqa: E402
from .kernel import Field, Verdict  # noqa: E402
from .perm_core import (PermAlgebra, Representation, check_perm,  # noqa: E402
                        check_representation, semidirect_product)
from .extensions import (ExtendingDatum, MatchedPair, bicrossed_product,  # noqa: E402
                         unified_product, validate_extending_structure,
                         validate_matched_pair)
from .flag import FlagDatum, datum_from_flag, validate_flag_datum  # noqa: E402
from .nonabelian import (AutPair, NonAbelianCocycle, WellsContext,  # noqa: E402
                         crossed_product, is_inducible, validate_cocycle, wells_map)
from .bialgebra import (Comultiplication, RTensor, check_perm_bialgebra,  # noqa: E402
                        coboundary_delta, manin_triple_from_bialgebra)

__all__ = [
    "__version__", "PermlabError", "ParseError", "SearchBoundExceeded", "Field", "Verdict",
    "PermAlgebra", "Representation", "check_perm", "check_representation", "semidirect_product",
    "ExtendingDatum", "MatchedPair", "bicrossed_product", "unified_product",
    "validate_extending_structure", "validate_matched_pair", "FlagDatum", "datum_from_flag",
    "validate_flag_datum", "AutPair", "NonAbelianCocycle", "WellsContext", "crossed_product",
    "is_inducible", "validate_cocycle", "wells_map", "Comultiplication", "RTensor",
    "check_perm_bialgebra", "coboundary_delta", "manin_triple_from_bialgebra",
]
