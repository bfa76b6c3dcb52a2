"""Cohomology of function fields in characteristic p.

Exact arithmetic for Witt vectors, Kaehler differentials, Milnor K-symbols
and H-symbols over F_p(x_1, ..., x_m), with residues, ramification levels
and three-valued zero tests whose certificates can be re-checked.

>>> from charp import FieldContext, HSymbolSum, WittVector, h_is_zero
>>> F = FieldContext(3, ["t"])
>>> t = F.gen("t")
>>> h_is_zero(HSymbolSum.symbol(WittVector(F, [1 / t]), [t])).status
'Zero'
"""

from .errors import CharpError
from .field import (
    DivisorValuation, FieldContext, RatFunc, rf_frobenius_decompose, rf_normalize, rf_reduce,
    rf_valuation, solve_artin_schreier,
)
from .witt import (
    WittVector, witt_add, witt_frobenius, witt_mul, witt_pmul, witt_shift_iota, witt_sub,
    witt_truncate_pi, witt_verschiebung,
)
from .forms import (
    DiffForm, cartier, classify_closed, form_d, form_dlog, inverse_cartier, is_logarithmic,
)
from .verdict import Verdict
from .milnor import KSymbolSum, k_dlog, k_is_zero, k_normalize, k_residue, k_specialize
from .hsym import (
    HSymbolSum, h_constant_lift, h_filtration, h_is_tame, h_is_unramified, h_is_wild, h_is_zero,
    h_multiply_p, h_normalize, h_residue, h_shift_iota, h_simple_form, h_torsion_order_bound,
    h_truncate_pi,
)
from .certify import CertificateError, check
from .evaluate import Evaluator, evaluate

__version__ = "0.1.0"

__all__ = [
    "CharpError", "DivisorValuation", "FieldContext", "RatFunc", "rf_frobenius_decompose",
    "rf_normalize", "rf_reduce", "rf_valuation", "solve_artin_schreier",
    "WittVector", "witt_add", "witt_frobenius", "witt_mul", "witt_pmul", "witt_shift_iota",
    "witt_sub", "witt_truncate_pi", "witt_verschiebung",
    "DiffForm", "cartier", "classify_closed", "form_d", "form_dlog", "inverse_cartier",
    "is_logarithmic", "Verdict",
    "KSymbolSum", "k_dlog", "k_is_zero", "k_normalize", "k_residue", "k_specialize",
    "HSymbolSum", "h_constant_lift", "h_filtration", "h_is_tame", "h_is_unramified", "h_is_wild",
    "h_is_zero", "h_multiply_p", "h_normalize", "h_residue", "h_shift_iota", "h_simple_form",
    "h_torsion_order_bound", "h_truncate_pi",
    "CertificateError", "check", "Evaluator", "evaluate",
]
