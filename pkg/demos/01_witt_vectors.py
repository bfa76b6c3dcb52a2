"""Witt vectors over F_p(x): carries, Frobenius and Verschiebung.

Run with ``python demos/01_witt_vectors.py``.
"""

from charp import FieldContext, WittVector, witt_frobenius, witt_pmul, witt_verschiebung

# Over F_2 the Witt vectors of length 2 are Z/4, so 1 + 1 carries into the second slot.
F2 = FieldContext(2, [])
one = WittVector.one(F2, 2)
print("W_2(F_2):  1 + 1 =", one + one)
print("           2 * 1 =", 2 * one)

# With a function field the components become rational functions.
F = FieldContext(3, ["x"])
x = F.gen("x")
a = WittVector(F, [x, 1 / x])
b = WittVector(F, [x + 1, 0 * x])

print()
print("a =", a)
print("b =", b)
print("a + b =", a + b)
print("a * b =", a * b)

# p = V o F on Witt vectors; the shortcut witt_pmul agrees.
print()
print("F(a)    =", witt_frobenius(a))
print("V(F(a)) =", witt_verschiebung(witt_frobenius(a)))
print("3 * a   =", 3 * a)
assert 3 * a == witt_pmul(a)

# A quick ring-law spot check in characteristic 3.
c = WittVector(F, [x ** 2, x])
assert a * (b + c) == a * b + a * c
print("distributivity holds for a, b, c")
