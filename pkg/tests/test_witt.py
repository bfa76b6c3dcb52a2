import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from charp import (
    FieldContext, WittVector, witt_add, witt_frobenius, witt_mul, witt_pmul, witt_shift_iota,
    witt_sub, witt_truncate_pi, witt_verschiebung,
)
from charp.errors import IndexOutOfRange, LengthMismatch
from charp.witt import WittTables, integral_tables
from conftest import constant_witt, int_to_witt, witt_to_int, witt_vectors


def test_first_universal_polynomials_match_sympy():
    """S_1 and P_1 from the closed formulas, computed in sympy."""
    for p in (2, 3, 5):
        X0, X1, Y0, Y1 = sympy.symbols("X0 X1 Y0 Y1")
        S1 = sympy.expand(X1 + Y1 + (X0 ** p + Y0 ** p - (X0 + Y0) ** p) / p)
        P1 = sympy.expand(X0 ** p * Y1 + Y0 ** p * X1 + p * X1 * Y1)
        add = integral_tables(p, 2, "add")[1]
        mul = integral_tables(p, 2, "mul")[1]
        names = {"X0": X0, "X1": X1, "Y0": Y0, "Y1": Y1}
        assert sympy.expand(sympy.sympify(str(add).replace("^", "**"), locals=names) - S1) == 0
        assert sympy.expand(sympy.sympify(str(mul).replace("^", "**"), locals=names) - P1) == 0


@pytest.mark.parametrize("p", [2, 3, 5])
@pytest.mark.parametrize("r", [1, 2, 3, 4])
def test_ghost_identities_exact(p, r):
    T = WittTables(p, r)
    assert all(T.check_ghost(k) for k in ("add", "mul", "neg"))


@pytest.mark.parametrize("p,r", [(2, 3), (3, 2), (5, 2), (3, 3)])
def test_constant_vectors_match_integers_mod_p_power(p, r):
    """W_r(F_p) is Z/p^r; compare every pair against the integer model."""
    F = FieldContext(p, [])
    m = p ** r
    vecs = [int_to_witt(F, r, n) for n in range(m)]
    assert all(witt_to_int(v) == n for n, v in enumerate(vecs))
    for a in range(0, m, max(1, m // 9)):
        for b in range(m):
            A, B = vecs[a], vecs[b]
            assert witt_to_int(witt_add(A, B)) == (a + b) % m
            assert witt_to_int(witt_mul(A, B)) == (a * b) % m
            assert witt_to_int(witt_sub(A, B)) == (a - b) % m


@given(st.data())
@settings(max_examples=60)
def test_ring_laws_with_function_components(data):
    p = data.draw(st.sampled_from([2, 3]))
    r = data.draw(st.integers(1, 3))
    F = FieldContext(p, ["x", "y"])
    a, b, c = (data.draw(witt_vectors(F, r, 1, rational=r < 3)) for _ in range(3))
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a
    assert a - a == WittVector.zero(F, r)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * WittVector.one(F, r) == a
    assert p * a == witt_verschiebung(witt_frobenius(a)) == witt_pmul(a)


@given(st.data())
@settings(max_examples=30)
def test_specialization_is_a_homomorphism(data):
    """Evaluating x at a constant commutes with the Witt operations."""
    p = data.draw(st.sampled_from([2, 3]))
    r = data.draw(st.integers(1, 3))
    F = FieldContext(p, ["x"])
    K = FieldContext(p, [])
    c = data.draw(st.integers(0, p - 1))
    a, b = (data.draw(witt_vectors(F, r, 2)) for _ in range(2))

    def at(w):
        return WittVector(K, [f.subs({"x": c}, K) for f in w.comps])

    assert witt_to_int(at(a + b)) == (witt_to_int(at(a)) + witt_to_int(at(b))) % p ** r
    assert witt_to_int(at(a * b)) == (witt_to_int(at(a)) * witt_to_int(at(b))) % p ** r


@given(constant_witt(FieldContext(5, []), 4), constant_witt(FieldContext(5, []), 4))
@settings(max_examples=20)
def test_length_four_at_p5(a, b):
    m = 5 ** 4
    assert witt_to_int(a * b) == witt_to_int(a) * witt_to_int(b) % m
    assert witt_to_int(a + b) == (witt_to_int(a) + witt_to_int(b)) % m


def test_teichmuller_is_multiplicative():
    F = FieldContext(3, ["x", "y"])
    x, y = F.gens()
    tx, ty = WittVector.teichmuller(x, 3), WittVector.teichmuller(y, 3)
    assert tx * ty == WittVector.teichmuller(x * y, 3)


def test_truncation_and_shift():
    F = FieldContext(2, ["x"])
    x = F.gen("x")
    a = WittVector(F, [x, x + 1, 1 / x])
    assert witt_truncate_pi(1, a) == WittVector(F, [x, x + 1])
    assert witt_shift_iota(2, WittVector(F, [x, 1]), 3) == WittVector(F, [0 * x, x, F.one()])
    assert witt_truncate_pi(1, witt_shift_iota(1, WittVector(F, [x]), 2)).is_zero()
    with pytest.raises(IndexOutOfRange):
        witt_truncate_pi(3, a)
    with pytest.raises(LengthMismatch):
        witt_shift_iota(2, a, 4)
    with pytest.raises(IndexOutOfRange):
        WittTables(2, 9)


def test_pmul_pushes_components_off_the_end():
    F = FieldContext(3, ["x"])
    x = F.gen("x")
    assert witt_pmul(WittVector(F, [0 * x, 0 * x, x])).is_zero()
    assert witt_pmul(WittVector(F, [x, 1 + x])) == WittVector(F, [0 * x, x ** 3])


def test_two_in_w2_f2_is_vector_0_1():
    F = FieldContext(2, [])
    one = WittVector.one(F, 2)
    assert one + one == WittVector(F, [F.zero(), F.one()])
    # 4 = 0 in W_2(F_2) = Z/4
    assert (one + one) + (one + one) == WittVector.zero(F, 2)


def test_table_cache_roundtrip(tmp_path, monkeypatch):
    from charp import witt
    monkeypatch.setenv("CHARP_TABLE_CACHE", str(tmp_path))
    witt._terms_mod_p.cache_clear()
    fresh = witt._terms_mod_p(3, 2, "mul")
    assert (tmp_path / "witt-mul-p3-r2.json").exists()
    witt._terms_mod_p.cache_clear()
    assert witt._terms_mod_p(3, 2, "mul") == fresh
    witt._terms_mod_p.cache_clear()
