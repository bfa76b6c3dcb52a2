import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations

from charp import (
    DiffForm, FieldContext, RatFunc, cartier, classify_closed, form_d, form_dlog, inverse_cartier,
    is_logarithmic,
)
from charp.errors import NotClosed, ZeroArgument
from charp.forms import antiderivative, df, form_pullback, split_exact
from conftest import forms, ratfuncs

F3 = FieldContext(3, ["x", "y", "z"])
F2 = FieldContext(2, ["x", "y"])
_TR = standard_transformations + (convert_xor,)


def cartier_oracle(w: DiffForm) -> DiffForm:
    """C(x^a dlog x_I) = x^(a/p) dlog x_I when p | a, else 0; polynomial closed forms only."""
    ctx = w.ctx
    p = ctx.p
    syms = sympy.symbols(ctx.variables)
    out = DiffForm.zero(ctx, w.n)
    for I, c in w.coeffs.items():
        assert c.den.is_one()
        xs = sympy.Mul(*[syms[i] for i in I])
        P = sympy.Poly(parse_expr(str(c.num), transformations=_TR) * xs, *syms, modulus=p)
        for mono, coef in P.terms():
            if all(k % p == 0 for k in mono):
                e = tuple(k // p for k in mono)
                f = RatFunc(ctx, ctx.poly({e: int(coef) % p}))
                out = out + DiffForm.dlog_basis(ctx, I, f)
    return out


@st.composite
def closed_poly_forms(draw, ctx, n):
    eta = draw(forms(ctx, n - 1, 2, rational=False))
    psi = draw(forms(ctx, n, 1, rational=False))
    return form_d(eta) + inverse_cartier(psi), psi


@given(st.integers(1, 2).flatmap(lambda n: closed_poly_forms(F3, n)))
@settings(max_examples=60)
def test_cartier_matches_monomial_formula(pair):
    w, psi = pair
    assert cartier(w) == cartier_oracle(w) == psi


@given(forms(F3, 1, 1))
@settings(max_examples=40)
def test_d_squared_and_exact_split(eta):
    w = form_d(eta)
    assert form_d(w).is_zero()
    assert cartier(w).is_zero()
    assert w.is_zero() or classify_closed(w).verdict == "Exact"
    if not w.is_zero():
        assert form_d(antiderivative(w)) == w


@given(st.integers(1, 2).flatmap(lambda n: closed_poly_forms(F2, n)))
@settings(max_examples=40)
def test_split_exact_recomposes(pair):
    w, psi = pair
    c, xi = split_exact(w)
    assert c == psi
    assert inverse_cartier(c) + form_d(xi) == w


@given(ratfuncs(F3, 2), ratfuncs(F3, 2), forms(F3, 1, 1))
@settings(max_examples=40)
def test_leibniz(f, g, w):
    assert form_d(DiffForm.function(f * g)) == df(f).scale(g) + df(g).scale(f)
    assert form_d(w.scale(f)) == df(f).wedge(w) + form_d(w).scale(f)


def test_t_inverse_dlog_t_is_exact():
    ctx = FieldContext(3, ["t"])
    t = ctx.gen("t")
    w = form_dlog(1 / t, t)
    assert w == df(-1 / t)
    c = classify_closed(w)
    assert c.verdict == "Exact"


def test_classification_examples():
    x, y, z = F3.gens()
    assert classify_closed(DiffForm.dx(F3, ["x"]).scale(y)).verdict == "NotClosed"
    w = form_dlog(y ** 3, x, y)
    c = classify_closed(w)
    assert c.verdict == "LogDecomposition"
    assert c.log_part(F3, 2) == w and c.exact_part.is_zero()
    assert is_logarithmic(form_dlog(F3.one(), x, y + z))
    assert not is_logarithmic(form_dlog(x, y))
    with pytest.raises(NotClosed):
        cartier(DiffForm.dx(F3, ["x"]).scale(y))
    with pytest.raises(ZeroArgument):
        form_dlog(F3.one(), F3.zero())


def test_dlog_is_additive_in_its_arguments():
    x, y, z = F3.gens()
    assert form_dlog(F3.one(), x * y, z) == form_dlog(F3.one(), x, z) + form_dlog(F3.one(), y, z)
    assert form_dlog(F3.one(), x, x).is_zero()
    assert form_dlog(F3.one(), x, 1 - x).is_zero()


def test_pullback_commutes_with_d():
    x, y, z = F3.gens()
    w = DiffForm.dx(F3, ["x"]).scale(y * z) + DiffForm.dx(F3, ["z"]).scale(x)
    m = {"x": x * y + 1, "z": z ** 2 + x}
    assert form_d(form_pullback(w, m)) == form_pullback(form_d(w), m)


def test_wedge_antisymmetry():
    a = DiffForm.dx(F3, ["x"])
    b = DiffForm.dx(F3, ["y"])
    assert a.wedge(b) == -b.wedge(a)
    assert a.wedge(a).is_zero()
