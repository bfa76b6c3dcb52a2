"""Differential forms in characteristic p and the Cartier operator.

Run with ``python demos/02_forms_and_cartier.py``.
"""

from charp import DiffForm, FieldContext, cartier, classify_closed, form_d, form_dlog, inverse_cartier

F = FieldContext(3, ["x", "y"])
x, y = F.gens()

# d(x^3) vanishes, which is why closed forms are more plentiful than exact ones.
print("d(x^3) =", form_d(DiffForm.function(x ** 3)))

# The Cartier operator inverts Phi(f dx) = f^p x^(p-1) dx and kills exact forms.
w = DiffForm.dx(F, ["x"]).scale(y)
print("Phi(y dx)    =", inverse_cartier(w))
print("C(Phi(y dx)) =", cartier(inverse_cartier(w)))
print("C(d(x^2 y))  =", cartier(form_d(DiffForm.function(x ** 2 * y))))

# A closed 2-form: a logarithmic piece plus something exact.
closed = form_dlog(F.one(), x, y) + form_d(DiffForm.dx(F, ["y"]).scale(x ** 2))
info = classify_closed(closed)
print()
print("classify", closed)
print("  verdict:", info.verdict)
for a, psi in info.pairs:
    print(f"  ({a})^3 * {psi}")
print("  exact part:", info.exact_part)
