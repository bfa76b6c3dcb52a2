import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from charp import (
    DivisorValuation, FieldContext, HSymbolSum, KSymbolSum, WittVector, check, form_d,
    h_constant_lift, h_filtration, h_is_tame, h_is_unramified, h_is_wild, h_is_zero, h_multiply_p,
    h_normalize, h_residue, h_shift_iota, h_simple_form, h_torsion_order_bound, h_truncate_pi,
    inverse_cartier,
)
from charp.errors import IndexOutOfRange, WildInput
from conftest import forms, polys

F3 = FieldContext(3, ["x", "t"])
F2 = FieldContext(2, ["x", "t"])
K3 = FieldContext(3, ["x"])
AT0 = DivisorValuation("t", 0)


def H(ctx, comps, ents=()):
    return HSymbolSum.symbol(WittVector(ctx, [ctx.parse(c) if isinstance(c, str) else c for c in comps]),
                             [ctx.parse(b) if isinstance(b, str) else b for b in ents])


def test_normalize_relations():
    x, t = F3.gens()
    assert h_normalize(H(F3, ["x"], ["t", "t"])).is_empty()
    assert h_normalize(H(F3, ["t^-3"], ["t"])) == h_normalize(H(F3, ["t^-1"], ["t"]))
    assert h_normalize(H(F3, ["0", "x"], ["x", "t"])).is_empty()
    assert h_normalize(H(F3, ["x", "1"], ["t", "t"])).is_empty()


def test_truncation_shift_and_p_multiplication():
    x, t = F3.gens()
    s = H(F3, ["x", "t"], ["x + t"])
    assert h_truncate_pi(s, 1) == H(F3, ["x"], ["x + t"])
    assert h_truncate_pi(h_shift_iota(H(F3, ["x"], ["t"]), 1), 1).is_empty()
    assert h_multiply_p(h_shift_iota(H(F3, ["x"], ["t"]), 1)).is_empty()
    assert h_multiply_p(s) == H(F3, [F3.zero(), x ** 3], ["x + t"])
    assert h_torsion_order_bound(HSymbolSum.zero(F3, 2, 1)) == 0
    with pytest.raises(IndexOutOfRange):
        h_truncate_pi(s, 2)


@given(forms(F3, 1, 2), forms(F3, 2, 1))
@settings(max_examples=50)
def test_exact_and_artin_schreier_forms_vanish(eta, psi):
    w = form_d(eta) + inverse_cartier(psi) - psi
    s = HSymbolSum.from_form(w)
    v = h_is_zero(s)
    assert v.is_zero
    assert check(s, v)


@given(polys(K3, 4, nonzero=True), st.integers(1, 4))
@settings(max_examples=40)
def test_residue_detects_nonzero_classes(c, k):
    # deg c coprime to p means c is not of the form g^p - g
    c = c * K3.gen("x") ** (1 if (c.num.degrees()[0] + 1) % 3 else 2)
    lifted = c.to_context(F3)
    s = HSymbolSum.symbol(WittVector(F3, [lifted]), [F3.gen("t") ** k if k % 3 else F3.gen("t")])
    assert h_residue(s, AT0) == h_normalize(h_residue(s, AT0))
    v = h_is_zero(s)
    assert v.is_nonzero and check(s, v)


def test_residue_examples():
    assert h_residue(H(F3, ["x"], ["t"]), AT0) == H(K3, ["x"])
    assert h_residue(H(F3, ["x"], ["x + 1 + t"]), AT0).is_empty()
    with pytest.raises(WildInput):
        h_residue(H(F3, ["x/t"], ["x"]), AT0)
    with pytest.raises(IndexOutOfRange):
        h_residue(H(F3, ["x"]), AT0)


def test_constant_lift_splits_the_residue():
    c = H(K3, ["x", "x + 1"], ["x"])
    lift = h_constant_lift(c, AT0, F3)
    assert h_residue(lift, AT0).is_empty()
    with_t = HSymbolSum(F3, 2, 2, [(cf, w, (F3.gen("t"),) + e) for cf, w, e in lift.items()])
    assert h_residue(with_t, AT0) == h_normalize(c)


def test_tame_and_wild():
    s = H(F3, ["x/t^2"], ["x"])
    assert h_is_tame(s, AT0).status == "Wild" and h_is_wild(s, AT0) is True
    rep = h_filtration(s, AT0)
    assert rep.level == 2 and rep.wild
    assert h_is_tame(H(F3, ["x"], ["t"]), AT0).status == "Tame"
    # t^-3 x dlog x is Artin-Schreier equivalent to t^-1 x^(1/3)-free data: still wild but lower
    assert h_filtration(H(F3, ["x^3/t^3"], ["x"]), AT0).level == 1
    assert h_is_unramified(H(F3, ["x"], ["t"]), AT0).status == "Ramified"
    assert h_is_unramified(H(F3, ["x"], ["x + 1"]), AT0).status == "Unramified"


def test_length_two_examples():
    x, t = F2.gens()
    s = H(F2, ["x", "0"], ["t"])
    v = h_is_zero(s)
    assert v.is_nonzero and check(s, v)
    assert h_torsion_order_bound(s) == 2
    assert h_torsion_order_bound(h_shift_iota(H(F2, ["x"], ["t"]), 1)) == 1
    assert h_residue(s, AT0) == H(FieldContext(2, ["x"]), ["x", "0"])


def test_simple_form_recomposes():
    s = H(F3, ["x/t^4 + 1/t^3 + x^2/t"], ["x"]) + H(F3, ["1/t^2"], ["t"])
    sf = h_simple_form(s, AT0)
    assert all(b is None for m, a, b in sf.terms if m % 3)
    assert h_is_zero(sf.recompose() - s).is_zero


def test_times_k():
    x, t = F3.gens()
    s = H(F3, ["x"]) * KSymbolSum.symbol([t], 3)
    assert s == H(F3, ["x"], ["t"])
