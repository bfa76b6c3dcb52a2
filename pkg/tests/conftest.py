"""Shared hypothesis strategies and helpers."""

from __future__ import annotations

import os

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from charp import DiffForm, FieldContext, RatFunc, WittVector

settings.register_profile(
    "repo", deadline=None, derandomize=True, print_blob=True,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "repo"))


@pytest.fixture(autouse=True, scope="session")
def _table_cache(tmp_path_factory):
    # keep the Witt-table disk cache out of the user's directories
    os.environ.setdefault("CHARP_TABLE_CACHE", str(tmp_path_factory.mktemp("witt-tables")))


@st.composite
def polys(draw, ctx: FieldContext, max_deg: int = 2, max_terms: int = 3, nonzero: bool = False):
    n = draw(st.integers(1 if nonzero else 0, max_terms))
    terms = {}
    for _ in range(n):
        e = tuple(draw(st.integers(0, max_deg)) for _ in range(ctx.nvars))
        terms[e] = draw(st.integers(1, ctx.p - 1))
    f = RatFunc(ctx, ctx.poly(terms))
    if nonzero and f.is_zero():
        f = ctx.one()
    return f


@st.composite
def ratfuncs(draw, ctx: FieldContext, max_deg: int = 2, nonzero: bool = False, rational: bool = True):
    num = draw(polys(ctx, max_deg, nonzero=nonzero))
    if not rational or not draw(st.booleans()):
        return num
    den = draw(polys(ctx, max_deg, nonzero=True))
    return num / den


@st.composite
def witt_vectors(draw, ctx: FieldContext, r: int, max_deg: int = 1, rational: bool = False):
    return WittVector(ctx, [draw(ratfuncs(ctx, max_deg, rational=rational)) for _ in range(r)])


@st.composite
def constant_witt(draw, ctx: FieldContext, r: int):
    return WittVector(ctx, [ctx.const(draw(st.integers(0, ctx.p - 1))) for _ in range(r)])


@st.composite
def forms(draw, ctx: FieldContext, n: int, max_deg: int = 2, rational: bool = True):
    from itertools import combinations
    coeffs = {}
    for I in combinations(range(ctx.nvars), n):
        if draw(st.booleans()):
            coeffs[I] = draw(ratfuncs(ctx, max_deg, rational=rational))
    return DiffForm(ctx, n, coeffs)


def witt_to_int(a: WittVector) -> int:
    """Independent model of W_r(F_p) as Z/p^r: sum_i p^i * teich(a_i)."""
    p, r = a.p, a.r
    m = p ** r
    total = 0
    for i, c in enumerate(a.comps):
        v = c.constant_value()
        # Teichmueller lift of v in Z/p^r; on F_p, Frobenius is the identity
        total += p ** i * pow(v, p ** (r - 1), m)
    return total % m


def int_to_witt(ctx: FieldContext, r: int, n: int) -> WittVector:
    """Inverse of witt_to_int, by successive Teichmueller digits."""
    p = ctx.p
    m = p ** r
    n %= m
    comps = []
    for i in range(r):
        d = (n // p ** i) % p
        comps.append(ctx.const(d))
        n = (n - p ** i * pow(d, p ** (r - 1), m)) % m
    return WittVector(ctx, comps)


# -- acceptance reporting: one line per criterion, printed at the end of the run

ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[n])
