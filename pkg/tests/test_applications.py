import json

import pytest
import sympy

from charp import DivisorValuation, FieldContext, HSymbolSum, KSymbolSum, WittVector, h_filtration
from charp.applications import (
    JGroupElement, alpha_class, bzp_descent_check, char2_context, char2_coordinates,
    char2_discriminant, identities_over_z, j_group_check, mu_map, verify_battery,
    weierstrass_quantities,
)
from charp.errors import A1Zero, ModulusMismatch, WrongCharacteristic, ZeroDiscriminant

A = sympy.symbols("a1 a2 a3 a4 a6")


def sympy_weierstrass():
    a1, a2, a3, a4, a6 = A
    b2 = a1 ** 2 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 ** 2 + 4 * a6
    b8 = a1 ** 2 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 ** 2 - a4 ** 2
    disc = -b2 ** 2 * b8 - 8 * b4 ** 3 - 27 * b6 ** 2 + 9 * b2 * b4 * b6
    return b2, b4, b6, disc


def same_mod_p(ours, expr, p):
    ctx = ours.ctx
    P = sympy.Poly(sympy.expand(expr), *A, modulus=p)
    names = ["a1", "a2", "a3", "a4", "a6"]
    total = ctx.zero()
    for mono, c in P.terms():
        term = ctx.const(int(c) % p)
        for n, k in zip(names, mono):
            term = term * ctx.gen(n) ** k
        total = total + term
    return total == ours


def test_identities_hold_over_z():
    assert identities_over_z()


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_discriminant_matches_sympy_expansion(p):
    ctx = FieldContext(p, ["a1", "a2", "a3", "a4", "a6"])
    data = weierstrass_quantities(*ctx.gens())
    assert same_mod_p(data.disc, sympy_weierstrass()[3], p)


def test_char2_discriminant_closed_form():
    # the displayed char-2 polynomial, typed in independently
    a1, a2, a3, a4, a6 = A
    closed = (a1 ** 4 * a2 * a3 ** 2 + a1 ** 3 * a3 ** 3 + a3 ** 4 + a1 ** 5 * a3 * a4
              + a1 ** 4 * a4 ** 2 + a1 ** 6 * a6)
    disc = sympy_weierstrass()[3]
    assert sympy.Poly(sympy.expand(disc - closed), *A, modulus=2).is_zero
    ctx = char2_context()
    gen = weierstrass_quantities(*(ctx.gen(n) for n in ("a1", "a2", "a3", "a4", "a6")))
    assert gen.disc == char2_discriminant(ctx)


def test_char3_discriminant_and_j():
    b2, b4, b6, disc = sympy_weierstrass()
    P = sympy.Poly(sympy.expand(disc - (-b2 ** 3 * b6 + b2 ** 2 * b4 ** 2 + b4 ** 3)), *A, modulus=3)
    assert P.is_zero
    ctx = FieldContext(3, ["a1", "a2", "a3", "a4", "a6"])
    d = weierstrass_quantities(*ctx.gens())
    assert d.j == d.b2 ** 6 / d.disc
    assert d.disc == -(d.b2 ** 3) * d.b6 + d.b2 ** 2 * d.b4 ** 2 + d.b4 ** 3


def test_zero_discriminant():
    ctx = FieldContext(5, ["u"])
    z = ctx.zero()
    with pytest.raises(ZeroDiscriminant):
        weierstrass_quantities(z, z, z, z, z).j


def test_char2_coordinates():
    ctx = char2_context()
    a1, a2, a3 = (ctx.gen(n) for n in ("a1", "a2", "a3"))
    d = weierstrass_quantities(a1, a2, a3, ctx.gen("a4"), ctx.gen("a6"))
    a2p, a6p = char2_coordinates(d)
    assert a2p == (a1 * a2 + a3) / a1 ** 3
    assert a6p * a1 ** 12 == d.disc
    z = ctx.zero()
    a2p0, _ = char2_coordinates(weierstrass_quantities(a1, z, z, ctx.gen("a4"), ctx.gen("a6")))
    assert a2p0.is_zero()
    with pytest.raises(A1Zero):
        char2_coordinates(weierstrass_quantities(z, a2, a3, ctx.one(), ctx.one()))
    F3 = FieldContext(3, ["a1"])
    with pytest.raises(WrongCharacteristic):
        char2_coordinates(weierstrass_quantities(F3.gen("a1"), 0, 0, 0, 1))


def test_alpha_level_three():
    alpha = alpha_class(1)
    rep = h_filtration(alpha, DivisorValuation("a1", 0))
    assert rep.level == 3 and rep.wild


def test_mu_map():
    ctx = FieldContext(2, ["x"])
    x = ctx.gen("x")
    assert mu_map(KSymbolSum.symbol([x], 2), 3) == HSymbolSum.symbol(WittVector(ctx, [0, 0, 1]), [x])
    assert mu_map(KSymbolSum(ctx, 2, 1), 2).is_empty()
    with pytest.raises(ModulusMismatch):
        mu_map(KSymbolSum.symbol([x], 4), 2)


def test_mu_nonzero_and_norm_case():
    from charp import check, h_is_zero
    ctx = FieldContext(2, ["x"])
    x = ctx.gen("x")
    s = mu_map(KSymbolSum.symbol([x], 2), 1)
    v = h_is_zero(s)
    assert v.is_nonzero and check(s, v)
    # x^2 + x + 1 is a norm from F_4(x), so this class is zero; the engine must not say NonZero
    assert not h_is_zero(mu_map(KSymbolSum.symbol([x ** 2 + x + 1], 2), 1)).is_nonzero


def test_j_group_membership():
    ctx = FieldContext(2, ["x", "y"])
    x, y = ctx.gens()
    assert j_group_check(JGroupElement(HSymbolSum.zero(ctx, 1, 1), KSymbolSum(ctx, 2, 1))).is_zero
    # r = 1: 4w = 0, so membership only asks mu(y) = 0
    w = HSymbolSum.symbol(WittVector(ctx, [x]), [y])
    assert j_group_check(JGroupElement(w, KSymbolSum.symbol([y ** 2], 2))).is_zero
    assert j_group_check(JGroupElement(w, KSymbolSum.symbol([y], 2))).is_nonzero


@pytest.mark.parametrize("p", [2, 3])
def test_descent_examples(p):
    ctx = FieldContext(p, ["x", "t"])
    x, t = ctx.gens()

    def H(a, *b):
        return HSymbolSum.symbol(WittVector(ctx, [a]), list(b))

    assert bzp_descent_check(H(t, x)).is_zero
    assert bzp_descent_check(H(t * x, x + 1)).is_nonzero
    assert bzp_descent_check(H(x, x + 1)).is_zero


@pytest.mark.parametrize("kind,r,p", [("char2", 1, None), ("char3", 1, None), ("charp", 1, 5),
                                      ("mod-ell", 1, 3)])
def test_battery_report_document(kind, r, p):
    rep = verify_battery(kind, r=r, p=p)
    assert rep.passed, [c.check_id for c in rep.failures]
    doc = json.loads(rep.dumps())
    assert set(doc["checks"][0]) == {"check_id", "anchor", "expected", "computed", "status"}
    assert len({c["check_id"] for c in doc["checks"]}) == len(doc["checks"])


def test_charp_without_prime_samples_both():
    reps = verify_battery("charp", r=1)
    assert [rep.characteristic for rep in reps] == [5, 7]
