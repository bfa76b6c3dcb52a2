"""Truncated Witt vectors W_r(F) over a rational function field.

Addition, negation and multiplication use the universal polynomials,
obtained from the ghost components over Z and reduced mod p once per (p, r).
"""

from __future__ import annotations

import json
import os
from functools import lru_cache
from pathlib import Path
from typing import Sequence

import flint

from .errors import ContextMismatch, IndexOutOfRange, LengthMismatch
from .field import FieldContext, RatFunc

MAX_LENGTH = 8


def _names(r: int) -> tuple[str, ...]:
    return tuple(f"X{i}" for i in range(r)) + tuple(f"Y{i}" for i in range(r))


def ghost(values: Sequence, n: int, p: int):
    """w_n = sum_{i<=n} p^i X_i^(p^(n-i)) for any ring elements."""
    total = 0
    for i in range(n + 1):
        total = total + p ** i * values[i] ** (p ** (n - i))
    return total


def integral_tables(p: int, r: int, kind: str) -> list:
    """Universal polynomials over Z as fmpz_mpoly in X0..X(r-1), Y0..Y(r-1).

    ``kind`` is 'add', 'mul' or 'neg' (negation only uses the X variables).
    """
    C = flint.fmpz_mpoly_ctx.get(_names(r), ordering="lex")
    g = C.gens()
    X, Y = g[:r], g[r:]
    zero = C.from_dict({})
    out = []
    for n in range(r):
        if kind == "add":
            t = ghost(X, n, p) + ghost(Y, n, p)
        elif kind == "mul":
            t = ghost(X, n, p) * ghost(Y, n, p)
        elif kind == "neg":
            t = zero - ghost(X, n, p)
        else:
            raise ValueError(kind)
        for i in range(n):
            t -= p ** i * out[i] ** (p ** (n - i))
        out.append(t / p ** n)
    return out


def _cache_dir() -> Path | None:
    d = os.environ.get("CHARP_TABLE_CACHE")
    return Path(d) if d else None


@lru_cache(maxsize=None)
def _terms_mod_p(p: int, r: int, kind: str) -> tuple:
    """Table as tuples of (exponent, coefficient mod p) lists, disk-cached."""
    cache = _cache_dir()
    path = cache / f"witt-{kind}-p{p}-r{r}.json" if cache else None
    if path is not None and path.exists():
        data = json.loads(path.read_text())
        return tuple(tuple((tuple(e), c) for e, c in poly) for poly in data)
    polys = integral_tables(p, r, kind)
    data = []
    for poly in polys:
        terms = []
        for e, c in zip(poly.monoms(), poly.coeffs()):
            c = int(c) % p
            if c:
                terms.append((tuple(int(k) for k in e), c))
        data.append(tuple(terms))
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(json.dumps([[[list(e), c] for e, c in poly] for poly in data]))
        os.replace(tmp, path)
    return tuple(data)


class WittTables:
    """Universal polynomials mod p for a fixed (p, r), as nmod polynomials."""

    _interned: dict = {}

    def __new__(cls, p: int, r: int):
        key = (p, r)
        if key in cls._interned:
            return cls._interned[key]
        if not 1 <= r <= MAX_LENGTH:
            raise IndexOutOfRange(f"Witt length must lie in [1, {MAX_LENGTH}]")
        obj = super().__new__(cls)
        obj.p, obj.r = p, r
        obj.ctx = flint.nmod_mpoly_ctx.get(_names(r), ordering="lex", modulus=p)
        obj._polys = {}
        cls._interned[key] = obj
        return obj

    def polys(self, kind: str) -> list:
        if kind not in self._polys:
            self._polys[kind] = [self.ctx.from_dict(dict(t)) for t in _terms_mod_p(self.p, self.r, kind)]
        return self._polys[kind]

    def check_ghost(self, kind: str) -> bool:
        """Exact ghost identity over Z for the cached table."""
        p, r = self.p, self.r
        polys = integral_tables(p, r, kind)
        C = polys[0].context()
        g = C.gens()
        X, Y = g[:r], g[r:]
        for n in range(r):
            lhs = ghost(polys, n, p)
            if kind == "add":
                rhs = ghost(X, n, p) + ghost(Y, n, p)
            elif kind == "mul":
                rhs = ghost(X, n, p) * ghost(Y, n, p)
            else:
                rhs = C.from_dict({}) - ghost(X, n, p)
            if lhs != rhs:
                return False
            # the cached mod-p table must be the reduction of the integral one
            red = {tuple(int(k) for k in e): int(c) % p
                   for e, c in zip(polys[n].monoms(), polys[n].coeffs()) if int(c) % p}
            if red != dict(_terms_mod_p(p, r, kind)[n]):
                return False
        return True


def _scaled(components: Sequence[RatFunc], D, p: int):
    """Polynomials A_i with a_i = A_i / D^(p^i)."""
    out = []
    for i, a in enumerate(components):
        if a.is_zero():
            out.append(a.num)
            continue
        k = p ** i
        # a = num/den with den | D
        q = D / a.den
        out.append(a.num * q * D ** (k - 1) if k > 1 else a.num * q)
    return out


def _lcm_den(components: Sequence[RatFunc]):
    D = None
    for a in components:
        d = a.den
        if D is None:
            D = d
        elif not d.is_one() and d != D:
            D = D * (d / D.gcd(d))
    return D


class WittVector:
    """A length-r Witt vector with RatFunc components."""

    __slots__ = ("ctx", "comps")

    def __init__(self, ctx: FieldContext, comps: Sequence):
        comps = tuple(ctx(c) if not isinstance(c, RatFunc) else c for c in comps)
        if not comps:
            raise IndexOutOfRange("Witt vectors need length >= 1")
        if len(comps) > MAX_LENGTH:
            raise IndexOutOfRange(f"Witt length capped at {MAX_LENGTH}")
        for c in comps:
            if c.ctx is not ctx:
                raise ContextMismatch("component from another context")
        self.ctx = ctx
        self.comps = comps

    @classmethod
    def zero(cls, ctx: FieldContext, r: int) -> "WittVector":
        return cls(ctx, [ctx.zero()] * r)

    @classmethod
    def one(cls, ctx: FieldContext, r: int) -> "WittVector":
        return cls(ctx, [ctx.one()] + [ctx.zero()] * (r - 1))

    @classmethod
    def teichmuller(cls, a: RatFunc, r: int) -> "WittVector":
        return cls(a.ctx, [a] + [a.ctx.zero()] * (r - 1))

    @property
    def r(self) -> int:
        return len(self.comps)

    @property
    def p(self) -> int:
        return self.ctx.p

    def __len__(self):
        return len(self.comps)

    def __getitem__(self, i):
        return self.comps[i]

    def __iter__(self):
        return iter(self.comps)

    def __eq__(self, other):
        if not isinstance(other, WittVector):
            return NotImplemented
        return self.ctx is other.ctx and self.comps == other.comps

    def __hash__(self):
        return hash(self.comps)

    def __repr__(self):
        return f"WittVector({self})"

    def __str__(self):
        return "[" + ", ".join(str(c) for c in self.comps) + "]"

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.comps)

    def _check(self, other: "WittVector"):
        if not isinstance(other, WittVector):
            raise TypeError("expected a WittVector")
        if other.r != self.r:
            raise LengthMismatch(f"lengths {self.r} and {other.r}")
        if other.ctx is not self.ctx:
            raise ContextMismatch("Witt vectors over different fields")

    def __add__(self, other):
        return witt_add(self, other)

    def __neg__(self):
        return witt_neg(self)

    def __sub__(self, other):
        return witt_add(self, witt_neg(other))

    def __mul__(self, other):
        if isinstance(other, int):
            return witt_scale(other, self)
        return witt_mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, int):
            return witt_scale(other, self)
        return NotImplemented

    def to_context(self, ctx: FieldContext) -> "WittVector":
        return WittVector(ctx, [c.to_context(ctx) for c in self.comps])


def _evaluate(polys, tables: WittTables, ctx: FieldContext, args, scale_exps):
    """Evaluate table polynomials at polynomial arguments, dividing by D^(p^n)."""
    out = []
    for n, poly in enumerate(polys):
        if poly.is_zero():
            out.append(ctx.zero())
            continue
        val = poly.compose(*args, ctx=ctx.poly_ctx)
        out.append(RatFunc(ctx, val, scale_exps(n)))
    return out


def witt_add(a: WittVector, b: WittVector) -> WittVector:
    a._check(b)
    if a.is_zero():
        return b
    if b.is_zero():
        return a
    ctx, p, r = a.ctx, a.p, a.r
    T = WittTables(p, r)
    D = _lcm_den(a.comps + b.comps)
    args = _scaled(a.comps, D, p) + _scaled(b.comps, D, p)
    comps = _evaluate(T.polys("add"), T, ctx, args, lambda n: D ** (p ** n))
    return WittVector(ctx, comps)


def witt_neg(a: WittVector) -> WittVector:
    p = a.p
    if p != 2:
        return WittVector(a.ctx, [-c for c in a.comps])
    if a.is_zero():
        return a
    ctx, r = a.ctx, a.r
    T = WittTables(p, r)
    D = _lcm_den(a.comps)
    zero = ctx.poly_ctx.from_dict({})
    args = _scaled(a.comps, D, p) + [zero] * r
    comps = _evaluate(T.polys("neg"), T, ctx, args, lambda n: D ** (p ** n))
    return WittVector(ctx, comps)


def witt_sub(a: WittVector, b: WittVector) -> WittVector:
    return witt_add(a, witt_neg(b))


def witt_mul(a: WittVector, b: WittVector) -> WittVector:
    a._check(b)
    ctx, p, r = a.ctx, a.p, a.r
    if a.is_zero() or b.is_zero():
        return WittVector.zero(ctx, r)
    T = WittTables(p, r)
    Da = _lcm_den(a.comps)
    Db = _lcm_den(b.comps)
    args = _scaled(a.comps, Da, p) + _scaled(b.comps, Db, p)
    DD = Da * Db
    comps = _evaluate(T.polys("mul"), T, ctx, args, lambda n: DD ** (p ** n))
    return WittVector(ctx, comps)


def witt_scale(k: int, a: WittVector) -> WittVector:
    """k*a for an integer k, using p*a = V(F(a)) for the p-part."""
    if k < 0:
        return witt_scale(-k, witt_neg(a))
    p = a.p
    result = WittVector.zero(a.ctx, a.r)
    base = a
    # k = sum d_i p^i: k*a = sum d_i (p^i a)
    while k and not base.is_zero():
        k, d = divmod(k, p)
        if d:
            term = base
            for _ in range(d - 1):
                term = witt_add(term, base)
            result = witt_add(result, term)
        base = witt_pmul(base)
    return result


def witt_frobenius(a: WittVector) -> WittVector:
    return WittVector(a.ctx, [c.frobenius() for c in a.comps])


def witt_verschiebung(a: WittVector) -> WittVector:
    """V(a) = (0, a_1, ..., a_{r-1}) within fixed length r."""
    return WittVector(a.ctx, (a.ctx.zero(),) + a.comps[:-1])


def witt_shift_iota(s: int, a: WittVector, r: int) -> WittVector:
    """Embed a length-s vector as (0, ..., 0, a_1, ..., a_s) of length r."""
    if a.r != s:
        raise LengthMismatch(f"expected a length-{s} vector")
    if not 1 <= s < r:
        raise IndexOutOfRange(f"need 1 <= s < r, got s={s}, r={r}")
    return WittVector(a.ctx, (a.ctx.zero(),) * (r - s) + a.comps)


def witt_truncate_pi(s: int, a: WittVector) -> WittVector:
    """Keep the first r - s components."""
    if not 1 <= s < a.r:
        raise IndexOutOfRange(f"need 1 <= s < r, got s={s}, r={a.r}")
    return WittVector(a.ctx, a.comps[: a.r - s])


def witt_pmul(a: WittVector) -> WittVector:
    """p*a = (0, a_1^p, ..., a_{r-1}^p)."""
    return WittVector(a.ctx, (a.ctx.zero(),) + tuple(c.frobenius() for c in a.comps[:-1]))


def decompose_teichmuller(a: WittVector) -> list[WittVector]:
    """Return [V^k tau(b_k)] whose Witt sum is a, from a = sum_k V^k tau(a_{k+1})."""
    r = a.r
    z = a.ctx.zero()
    out = []
    for k, c in enumerate(a.comps):
        if not c.is_zero():
            out.append(WittVector(a.ctx, [z] * k + [c] + [z] * (r - k - 1)))
    return out
