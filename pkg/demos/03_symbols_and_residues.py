"""Milnor symbols and H-symbols: residues, tame and wild classes, zero tests.

Run with ``python demos/03_symbols_and_residues.py``.
"""

from charp import (
    DivisorValuation, FieldContext, HSymbolSum, KSymbolSum, WittVector, check, h_filtration,
    h_is_tame, h_is_zero, h_residue, h_simple_form, k_is_zero, k_residue,
)

F = FieldContext(3, ["x", "t"])
x, t = F.gens()
at0 = DivisorValuation("t", 0)

# Tame symbol: the residue of {t, x} at t = 0 is {x}.
s = KSymbolSum.symbol([t, x], 9)
print("residue of", s, "at t=0:", k_residue(s, at0))
print("{x}@9 is", k_is_zero(KSymbolSum.symbol([x], 9)).status)
print("{x^9}@9 is", k_is_zero(KSymbolSum.symbol([x ** 9], 9)).status)


def H(a, *b):
    return HSymbolSum.symbol(WittVector(F, [a]), list(b))


# [1/t | t} is exact, so it dies; [x | t} survives because x is not of the form g^3 - g.
print()
for sym in (H(1 / t, t), H(x, t), H(t ** -3 - t ** -1, x)):
    v = h_is_zero(sym)
    print(f"{str(sym):28} {v.status:8} ({v.reason}); certificate ok: {check(sym, v)}")

# A tame class has a residue; a wild one has a ramification level instead.
print()
print("residue of [x | t} at t=0:", h_residue(H(x, t), at0))
wild = H(x / t ** 2, x)
print(wild, "is", h_is_tame(wild, at0).status)
rep = h_filtration(wild, at0)
print("  level", rep.level, "graded piece", rep.graded[0])

sf = h_simple_form(wild + H(1 / t, x), at0)
for level, phi, phi2 in sf.terms:
    print(f"  simple form, level {level}: {phi}")
