"""Certificates must fail to check when they are applied to the wrong input or altered."""

import copy

import pytest

from charp import (
    CertificateError, DiffForm, FieldContext, HSymbolSum, KSymbolSum, Verdict, WittVector, check,
    form_d, h_is_zero, inverse_cartier, k_is_zero,
)
from charp.polar import zero_test

F = FieldContext(3, ["x", "t"])
x, t = F.gens()


def sym(a, *b):
    return HSymbolSum.symbol(WittVector(F, [a]), list(b))


def test_zero_form_witness_replays_and_tampering_fails():
    psi = DiffForm.dx(F, ["x"]).scale(t)
    w = form_d(DiffForm.function(x / t)) + inverse_cartier(psi) - psi
    v = zero_test(w)
    assert v.is_zero and check(w, v)
    bad = copy.copy(v)
    bad.certificate = dict(v.certificate, zeta=DiffForm.zero(F, 1))
    with pytest.raises(CertificateError):
        check(w, bad)


@pytest.mark.parametrize("s", [sym(x, t), sym(x / t ** 2, x), sym(x, x + 1, t) + sym(1 / t, t, x)])
def test_nonzero_certificates_do_not_transfer(s):
    v = h_is_zero(s)
    assert v.is_nonzero and check(s, v)
    with pytest.raises(CertificateError):
        check(s * 2, v)


def test_zero_chain_does_not_prove_other_sums():
    s = sym(1 / t, t) + sym(t ** -3, x) - sym(t ** -1, x)
    v = h_is_zero(s)
    assert v.is_zero and check(s, v)
    with pytest.raises(CertificateError):
        check(s + sym(x, t), v)


def test_claimed_zero_for_nonzero_symbol_fails():
    s = sym(x, t)
    fake = Verdict("Zero", "forged", {"chain": []})
    with pytest.raises(CertificateError):
        check(s, fake)


def test_ksym_certificates():
    G = FieldContext(3, ["y"])
    y = G.gen("y")
    s = KSymbolSum.symbol([y], 9)
    v = k_is_zero(s)
    assert v.is_nonzero and check(s, v)
    z = KSymbolSum.symbol([y ** 9], 9)
    vz = k_is_zero(z)
    assert vz.is_zero and check(z, vz)
    with pytest.raises(CertificateError):
        check(s, vz)
    with pytest.raises(CertificateError):
        check(z, v)


def test_unknown_is_accepted_without_claims():
    assert check(sym(x, t), Verdict("Unknown"))
