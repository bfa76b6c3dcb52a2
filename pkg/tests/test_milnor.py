import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from charp import (
    DivisorValuation, FieldContext, KSymbolSum, check, k_dlog, k_is_zero, k_normalize, k_residue,
    k_specialize, rf_reduce, rf_valuation,
)
from charp.applications import char2_discriminant
from charp.errors import ModulusNotP, RamifiedInput, ZeroArgument
from conftest import ratfuncs

F = FieldContext(3, ["y", "t"])
y, t = F.gens()
AT0 = DivisorValuation("t", 0)


def tame_symbol_oracle(f, g, v, m):
    """{(-1)^(v(f)v(g)) g^v(f) / f^v(g)} reduced; sends {pi, u} to {u-bar}."""
    a, b = rf_valuation(f, v), rf_valuation(g, v)
    u = (-1) ** (a * b) * g ** a / f ** b
    res = v.residue_context(f.ctx)
    return KSymbolSum(res, m, 1, [(1, [rf_reduce(u, v)])])


@given(ratfuncs(F, 2, nonzero=True), ratfuncs(F, 2, nonzero=True),
       st.sampled_from([3, 9, 4]), st.sampled_from([0, 1, None]))
@settings(max_examples=60)
def test_residue_matches_tame_symbol(f, g, m, c):
    v = DivisorValuation("t", c)
    s = KSymbolSum.symbol([f, g], m)
    diff = k_residue(s, v) - tame_symbol_oracle(f, g, v, m)
    verdict = k_is_zero(diff)
    assert verdict.is_zero, (str(f), str(g), str(diff))
    assert check(diff, verdict)


@given(ratfuncs(F, 2, nonzero=True), st.sampled_from([3, 9, 4]))
@settings(max_examples=40)
def test_degree_one_residue_is_valuation(f, m):
    res = k_residue(KSymbolSum.symbol([f], m), AT0)
    assert res == KSymbolSum.constant(FieldContext(3, ["y"]), m, rf_valuation(f, AT0))


@given(ratfuncs(F, 2, nonzero=True))
@settings(max_examples=40)
def test_steinberg_relation(a):
    if a == 1:
        return
    s = KSymbolSum.symbol([a, 1 - a], 3)
    assert k_dlog(s).is_zero()
    v = k_is_zero(s)
    assert v.is_zero and check(s, v)


@given(ratfuncs(F, 2, nonzero=True), ratfuncs(F, 2, nonzero=True), ratfuncs(F, 2, nonzero=True))
@settings(max_examples=40)
def test_multilinearity_and_antisymmetry(a, b, c):
    m = 9
    lhs = KSymbolSum.symbol([a * b, c], m)
    rhs = KSymbolSum.symbol([a, c], m) + KSymbolSum.symbol([b, c], m)
    assert k_is_zero(lhs - rhs).is_zero
    assert k_is_zero(KSymbolSum.symbol([a, b], m) + KSymbolSum.symbol([b, a], m)).is_zero
    assert k_normalize(KSymbolSum.symbol([a, a], 3)) == k_normalize(KSymbolSum.symbol([a, -F.one()], 3))


def test_nonzero_certificates_recheck():
    for s in (KSymbolSum.symbol([y], 9), KSymbolSum.symbol([y, t], 3), KSymbolSum.symbol([y + 1, t], 4),
              KSymbolSum.symbol([y], 9) * 3):
        v = k_is_zero(s)
        assert v.is_nonzero and check(s, v)


def test_examples():
    assert k_is_zero(KSymbolSum.symbol([y ** 3], 3)).is_zero
    assert k_is_zero(KSymbolSum.symbol([F.const(2)], 9)).is_zero  # -1 is 2-torsion, 9 odd
    assert k_is_zero(KSymbolSum.symbol([F.const(2)], 4)).is_nonzero  # -1 not a square in F_3
    assert k_specialize(KSymbolSum.symbol([y + t, y + 1], 9), AT0) == \
        k_normalize(KSymbolSum.symbol([FieldContext(3, ["y"]).parse("y"), FieldContext(3, ["y"]).parse("y+1")], 9))
    with pytest.raises(RamifiedInput):
        k_specialize(KSymbolSum.symbol([t, y], 9), AT0)
    with pytest.raises(ModulusNotP):
        k_dlog(KSymbolSum.symbol([y], 9))
    with pytest.raises(ZeroArgument):
        KSymbolSum.symbol([F.zero()], 3)


@pytest.mark.parametrize("r,expected", [(1, 0), (2, 0), (3, 4), (4, 12), (5, 12)])
def test_discriminant_residue_is_twelve(r, expected):
    ctx = FieldContext(2, ["a2", "a3", "a4", "a6", "a1"])
    a1 = ctx.gen("a1")
    D = char2_discriminant(ctx)
    res = k_residue(KSymbolSum.symbol([a1 ** 12 / D], 2 ** r), DivisorValuation("a1", 0))
    assert res == KSymbolSum.constant(ctx.drop("a1"), 2 ** r, expected)
