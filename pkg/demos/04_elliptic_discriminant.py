"""The discriminant of the generic Weierstrass curve in characteristic 2.

Along a1 = 0 the j-invariant a1^12 / disc has a pole of order 12, and the
residue of the symbol {a1^12 / disc} modulo 2^r shows 12 mod 2^r.  The
cohomology class alpha built from the curve is wild of level 3 there.

Run with ``python demos/04_elliptic_discriminant.py``.
"""

from charp import DivisorValuation, KSymbolSum, h_filtration, k_residue, rf_valuation
from charp.applications import alpha_class, char2_context, char2_discriminant, verify_battery

ctx = char2_context()
a1 = ctx.gen("a1")
disc = char2_discriminant(ctx)
v = DivisorValuation("a1", 0)

print("disc =", disc)
print("v_{a1=0}(j) =", rf_valuation(a1 ** 12 / disc, v))

for r in (1, 2, 3):
    j = KSymbolSum.symbol([a1 ** 12 / disc], 2 ** r)
    print(f"residue of {{j}} modulo {2 ** r}: {k_residue(j, v)}")

rep = h_filtration(alpha_class(1), v)
print()
print("alpha: level", rep.level, "wild" if rep.wild else "tame")

# The full battery re-derives all of the above with audited verdicts.
report = verify_battery("char2", r=2)
print()
print("\n".join(report.lines()[-6:]))
