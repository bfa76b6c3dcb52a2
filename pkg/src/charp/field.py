"""Rational function fields F_p(x_1, ..., x_m) on top of flint polynomials.

A ``FieldContext`` fixes the prime and the ordered variable list.  Elements
are ``RatFunc`` values kept in canonical form: reduced fraction, monic
denominator under lex order.  Equal values have identical representations,
so ``==`` and ``hash`` are structural.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping

import flint

from .errors import (
    CharpError,
    ContextMismatch,
    DivisionByZero,
    NegativeValuation,
    ParseError,
    UndeclaredVariable,
    ZeroInput,
)
from .grammar import Node, parse

_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9_]*$")


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


class FieldContext:
    """The field F_p(variables).  Instances are interned by (p, variables)."""

    _interned: dict = {}

    def __new__(cls, p: int, variables: Iterable[str] = ()):
        variables = tuple(variables)
        key = (p, variables)
        obj = cls._interned.get(key)
        if obj is not None:
            return obj
        if not isinstance(p, int) or not _is_prime(p):
            raise CharpError(f"{p} is not a prime")
        if len(set(variables)) != len(variables):
            raise CharpError("variable names must be distinct")
        for v in variables:
            if not _IDENT.match(v):
                raise CharpError(f"bad variable name {v!r}")
        obj = super().__new__(cls)
        obj.p = p
        obj.variables = variables
        obj.nvars = len(variables)
        obj.poly_ctx = flint.nmod_mpoly_ctx.get(variables, ordering="lex", modulus=p)
        obj._index = {v: i for i, v in enumerate(variables)}
        cls._interned[key] = obj
        return obj

    def __reduce__(self):
        return (FieldContext, (self.p, self.variables))

    def __repr__(self):
        names = ",".join(self.variables)
        return f"FieldContext({self.p}, [{names}])"

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UndeclaredVariable(f"variable {name!r} is not declared") from None

    def has(self, name: str) -> bool:
        return name in self._index

    def poly(self, terms: Mapping[tuple, int]):
        return self.poly_ctx.from_dict({e: c % self.p for e, c in terms.items() if c % self.p})

    def const(self, c: int) -> "RatFunc":
        return RatFunc(self, self.poly({(0,) * self.nvars: c}))

    def zero(self) -> "RatFunc":
        return self.const(0)

    def one(self) -> "RatFunc":
        return self.const(1)

    def gen(self, name: str) -> "RatFunc":
        i = self.index(name)
        e = [0] * self.nvars
        e[i] = 1
        return RatFunc(self, self.poly({tuple(e): 1}), _reduced=True)

    def gens(self) -> tuple["RatFunc", ...]:
        return tuple(self.gen(v) for v in self.variables)

    def drop(self, name: str) -> "FieldContext":
        """The context with ``name`` removed (a residue field)."""
        self.index(name)
        return FieldContext(self.p, tuple(v for v in self.variables if v != name))

    def extend(self, names: Iterable[str]) -> "FieldContext":
        extra = [n for n in names if n not in self._index]
        return FieldContext(self.p, self.variables + tuple(extra))

    def reorder_last(self, name: str) -> "FieldContext":
        """Same field with ``name`` moved to the distinguished last slot."""
        self.index(name)
        rest = tuple(v for v in self.variables if v != name)
        return FieldContext(self.p, rest + (name,))

    def parse(self, text: str, bindings: Mapping[str, "RatFunc"] | None = None) -> "RatFunc":
        return rf_normalize(parse(text), self, bindings)

    def __call__(self, value) -> "RatFunc":
        """Coerce an int, a string or a RatFunc of a smaller context."""
        if isinstance(value, RatFunc):
            return value.to_context(self)
        if isinstance(value, int):
            return self.const(value)
        if isinstance(value, str):
            return self.parse(value)
        raise TypeError(f"cannot coerce {type(value).__name__} to RatFunc")


def _transfer_poly(poly, src: FieldContext, dst: FieldContext):
    if src is dst:
        return poly
    idx = []
    for name in src.variables:
        idx.append(dst._index.get(name, -1))
    out = {}
    for e, c in _poly_terms(poly):
        ne = [0] * dst.nvars
        for i, k in enumerate(e):
            if k:
                j = idx[i]
                if j < 0:
                    raise ContextMismatch(
                        f"variable {src.variables[i]!r} does not exist in {dst!r}")
                ne[j] = k
        out[tuple(ne)] = int(c)
    return dst.poly_ctx.from_dict(out)


def _poly_terms(poly):
    return zip((tuple(int(k) for k in e) for e in poly.monoms()), (int(c) for c in poly.coeffs()))


class RatFunc:
    """An element num/den of a rational function field, in canonical form."""

    __slots__ = ("ctx", "num", "den", "_hash")

    def __init__(self, ctx: FieldContext, num, den=None, *, _reduced: bool = False):
        pc = ctx.poly_ctx
        if den is None:
            den = pc.from_dict({(0,) * ctx.nvars: 1})
            _reduced = True
        if den.is_zero():
            raise DivisionByZero("division by the zero function")
        if num.is_zero():
            num = pc.from_dict({})
            den = pc.from_dict({(0,) * ctx.nvars: 1})
        else:
            if not _reduced and not den.is_constant():
                g = num.gcd(den)
                if not g.is_constant():
                    num = num / g
                    den = den / g
            lc = int(den.leading_coefficient())
            if lc != 1:
                inv = pow(lc, -1, ctx.p)
                num = num * inv
                den = den * inv
        self.ctx = ctx
        self.num = num
        self.den = den
        self._hash = None

    # -- basic protocol

    def __eq__(self, other):
        if isinstance(other, int):
            return self.is_constant() and self.constant_value() == other % self.ctx.p
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self.ctx is other.ctx and self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ctx.p, self.ctx.variables, str(self.num), str(self.den)))
        return self._hash

    def __repr__(self):
        return f"RatFunc({self})"

    def __str__(self):
        n = str(self.num)
        if self.den.is_one():
            return n
        d = str(self.den)
        if not _atomic(n):
            n = f"({n})"
        if not _atomic(d) or "*" in d:
            d = f"({d})"
        return f"{n}/{d}"

    def __bool__(self):
        return not self.num.is_zero()

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.den.is_one() and self.num.is_one()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def is_polynomial(self) -> bool:
        return self.den.is_one()

    def constant_value(self) -> int:
        if not self.is_constant():
            raise ValueError("not a constant")
        if self.num.is_zero():
            return 0
        return int(self.num.leading_coefficient())

    def used_variables(self) -> tuple[str, ...]:
        dn = self.num.degrees()
        dd = self.den.degrees()
        return tuple(v for i, v in enumerate(self.ctx.variables) if dn[i] or dd[i])

    def degrees_in(self, name: str) -> tuple[int, int]:
        i = self.ctx.index(name)
        dn = int(self.num.degrees()[i]) if not self.num.is_zero() else -1
        return dn, int(self.den.degrees()[i])

    def size(self) -> int:
        return len(self.num) + len(self.den)

    # -- arithmetic

    def _coerce(self, other) -> "RatFunc":
        if isinstance(other, RatFunc):
            if other.ctx is not self.ctx:
                raise ContextMismatch(f"{self.ctx!r} vs {other.ctx!r}")
            return other
        if isinstance(other, int):
            return self.ctx.const(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o.num.is_zero():
            return self
        if self.num.is_zero():
            return o
        if self.den == o.den:
            return RatFunc(self.ctx, self.num + o.num, self.den)
        if o.den.is_one():
            return RatFunc(self.ctx, self.num + o.num * self.den, self.den, _reduced=True)
        if self.den.is_one():
            return RatFunc(self.ctx, o.num + self.num * o.den, o.den, _reduced=True)
        g = self.den.gcd(o.den)
        if g.is_constant():
            return RatFunc(self.ctx, self.num * o.den + o.num * self.den, self.den * o.den,
                           _reduced=True)
        a = o.den / g
        b = self.den / g
        return RatFunc(self.ctx, self.num * a + o.num * b, self.den * a)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(self.ctx, -self.num, self.den, _reduced=True)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.num.is_zero() or o.num.is_zero():
            return self.ctx.zero()
        n1, d1, n2, d2 = self.num, self.den, o.num, o.den
        if not d2.is_constant():
            g = n1.gcd(d2)
            if not g.is_constant():
                n1, d2 = n1 / g, d2 / g
        if not d1.is_constant():
            g = n2.gcd(d1)
            if not g.is_constant():
                n2, d1 = n2 / g, d1 / g
        return RatFunc(self.ctx, n1 * n2, d1 * d2, _reduced=True)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.num.is_zero():
            raise DivisionByZero("inverse of the zero function")
        return RatFunc(self.ctx, self.den, self.num, _reduced=True)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        if k == 0:
            return self.ctx.one()
        if k % self.ctx.p == 0:
            return self.frobenius() ** (k // self.ctx.p)
        return RatFunc(self.ctx, self.num ** k, self.den ** k, _reduced=True)

    def frobenius(self) -> "RatFunc":
        """f^p, computed by scaling exponents (coefficients lie in F_p)."""
        p = self.ctx.p
        pc = self.ctx.poly_ctx

        def fr(poly):
            return pc.from_dict({tuple(k * p for k in e): c for e, c in _poly_terms(poly)})

        return RatFunc(self.ctx, fr(self.num), fr(self.den), _reduced=True)

    def pth_root(self) -> "RatFunc | None":
        """g with g^p = self, or None when self is not a p-th power."""
        p = self.ctx.p
        pc = self.ctx.poly_ctx

        def root(poly):
            out = {}
            for e, c in _poly_terms(poly):
                if any(k % p for k in e):
                    return None
                out[tuple(k // p for k in e)] = c
            return pc.from_dict(out)

        n = root(self.num)
        if n is None:
            return None
        d = root(self.den)
        if d is None:
            return None
        return RatFunc(self.ctx, n, d, _reduced=True)

    def derivative(self, name: str) -> "RatFunc":
        i = self.ctx.index(name)
        dn = self.num.derivative(i)
        if self.den.is_constant():
            return RatFunc(self.ctx, dn, self.den, _reduced=True)
        dd = self.den.derivative(i)
        return RatFunc(self.ctx, dn * self.den - self.num * dd, self.den * self.den)

    # -- context changes and substitution

    def to_context(self, ctx: FieldContext) -> "RatFunc":
        """Reinterpret in ``ctx``; every used variable must exist there."""
        if ctx is self.ctx:
            return self
        if ctx.p != self.ctx.p:
            raise ContextMismatch("different characteristics")
        return RatFunc(ctx, _transfer_poly(self.num, self.ctx, ctx),
                       _transfer_poly(self.den, self.ctx, ctx), _reduced=True)

    def subs(self, mapping: Mapping[str, "RatFunc | int"],
             target: FieldContext | None = None) -> "RatFunc":
        """Simultaneous substitution of variables by rational functions.

        Variables not in ``mapping`` are sent to the variable of the same
        name in ``target`` (default: own context).
        """
        target = target or self.ctx
        vals = {}
        for name, val in mapping.items():
            self.ctx.index(name)
            vals[name] = val.to_context(target) if isinstance(val, RatFunc) else target(val)
        a, b = _eval_poly(self.num, self.ctx, vals, target)
        c, d = _eval_poly(self.den, self.ctx, vals, target)
        return RatFunc(target, a * d, b * c)


def _atomic(s: str) -> bool:
    return all(ch not in s for ch in "+- ")


def _eval_poly(poly, src: FieldContext, vals: Mapping[str, RatFunc], target: FieldContext):
    """Evaluate a polynomial at ``vals``; return (P, Q) with value P/Q."""
    pc = target.poly_ctx
    one = pc.from_dict({(0,) * target.nvars: 1})
    if poly.is_zero():
        return pc.from_dict({}), one
    degs = [int(k) for k in poly.degrees()]
    sub = []  # per source variable: (num, den, degree) or index in target
    for i, name in enumerate(src.variables):
        if not degs[i]:
            sub.append(None)
        elif name in vals:
            v = vals[name]
            sub.append((v.num, v.den, degs[i]))
        else:
            if not target.has(name):
                raise UndeclaredVariable(f"variable {name!r} has no image")
            sub.append(target.index(name))
    cache = {}

    def power(i, which, k):
        key = (i, which, k)
        r = cache.get(key)
        if r is None:
            base = sub[i][which]
            r = base ** k
            cache[key] = r
        return r

    total = pc.from_dict({})
    for e, c in _poly_terms(poly):
        mono = [0] * target.nvars
        term = None
        for i, k in enumerate(e):
            s = sub[i]
            if s is None:
                continue
            if isinstance(s, int):
                mono[s] += k
                continue
            n, d, deg = s
            f = power(i, 0, k) if k else None
            if not d.is_one() and deg - k:
                g = power(i, 1, deg - k)
                f = g if f is None else f * g
            if f is not None:
                term = f if term is None else term * f
        m = pc.from_dict({tuple(mono): c})
        total += m if term is None else m * term
    q = one
    for i, s in enumerate(sub):
        if isinstance(s, tuple) and not s[1].is_one():
            q *= power(i, 1, s[2])
    return total, q


# -- expression trees

def rf_normalize(tree: Node | str, ctx: FieldContext,
                 bindings: Mapping[str, RatFunc] | None = None) -> RatFunc:
    """Evaluate an arithmetic syntax tree to canonical form."""
    if isinstance(tree, str):
        tree = parse(tree)
    bindings = bindings or {}

    def ev(nd: Node) -> RatFunc:
        k = nd.kind
        if k == "int":
            return ctx.const(nd.args[0])
        if k == "var":
            name = nd.args[0]
            if name in bindings:
                val = bindings[name]
                if not isinstance(val, RatFunc):
                    raise ParseError(f"binding {name!r} is not a function", nd.pos)
                return val.to_context(ctx)
            if not ctx.has(name):
                raise UndeclaredVariable(f"variable {name!r} is not declared")
            return ctx.gen(name)
        if k == "neg":
            return -ev(nd.args[0])
        if k == "add":
            return ev(nd.args[0]) + ev(nd.args[1])
        if k == "sub":
            return ev(nd.args[0]) - ev(nd.args[1])
        if k == "mul":
            return ev(nd.args[0]) * ev(nd.args[1])
        if k == "div":
            den = ev(nd.args[1])
            if den.is_zero():
                raise DivisionByZero(f"division by zero at position {nd.pos}")
            return ev(nd.args[0]) / den
        if k == "pow":
            base = ev(nd.args[0])
            if nd.args[1] < 0 and base.is_zero():
                raise DivisionByZero(f"negative power of zero at position {nd.pos}")
            return base ** nd.args[1]
        raise ParseError(f"expected a rational function, found {k}", nd.pos)

    return ev(tree)


# -- valuations

@dataclass(frozen=True)
class DivisorValuation:
    """Valuation at {var = center}, or at infinity in ``var`` when center is None."""

    var: str
    center: int | None = 0

    @classmethod
    def parse(cls, text: str, p: int | None = None) -> "DivisorValuation":
        s = text.strip()
        if s.startswith("at "):
            s = s[3:].strip()
        m = re.fullmatch(r"inf\(\s*([A-Za-z][A-Za-z0-9_]*)\s*\)", s)
        if m:
            return cls(m.group(1), None)
        m = re.fullmatch(r"([A-Za-z][A-Za-z0-9_]*)\s*=\s*(-?\d+)", s)
        if m:
            c = int(m.group(2))
            if p is not None:
                c %= p
            return cls(m.group(1), c)
        raise ParseError(f"bad valuation spec {text!r}; use VAR=CONST or inf(VAR)", 0, text)

    def __str__(self):
        return f"inf({self.var})" if self.center is None else f"{self.var}={self.center}"

    def residue_context(self, ctx: FieldContext) -> FieldContext:
        return ctx.drop(self.var)

    def uniformizer(self, ctx: FieldContext) -> RatFunc:
        t = ctx.gen(self.var)
        if self.center is None:
            return t.inverse()
        return t - self.center

    def chart(self, ctx: FieldContext) -> tuple[dict, dict]:
        """Substitutions moving this place to var=0 and back."""
        t = ctx.gen(self.var)
        if self.center is None:
            return {self.var: t.inverse()}, {self.var: t.inverse()}
        if self.center % ctx.p == 0:
            return {}, {}
        return {self.var: t + self.center}, {self.var: t - self.center}


def _ord0(poly, i: int) -> int:
    return int(min(e[i] for e in poly.monoms()))


def _shift(poly, ctx: FieldContext, i: int, c: int):
    if c % ctx.p == 0:
        return poly
    gens = list(ctx.poly_ctx.gens())
    gens[i] = gens[i] + c
    return poly.compose(*gens)


def rf_valuation(f: RatFunc, v: DivisorValuation) -> int:
    if f.is_zero():
        raise ZeroInput("valuation of zero")
    i = f.ctx.index(v.var)
    if v.center is None:
        return int(f.den.degrees()[i]) - int(f.num.degrees()[i])
    return _ord0(_shift(f.num, f.ctx, i, v.center), i) - _ord0(_shift(f.den, f.ctx, i, v.center), i)


def _coeffs_in(poly, ctx: FieldContext, i: int) -> dict[int, object]:
    """Split a polynomial by powers of variable i (the variable removed)."""
    buckets: dict[int, dict] = {}
    for e, c in _poly_terms(poly):
        k = e[i]
        e2 = list(e)
        e2[i] = 0
        buckets.setdefault(k, {})[tuple(e2)] = c
    return {k: ctx.poly_ctx.from_dict(d) for k, d in buckets.items()}


def rf_reduce(f: RatFunc, v: DivisorValuation) -> RatFunc:
    """Image of a v-integral function in the residue field."""
    ctx = f.ctx
    res = v.residue_context(ctx)
    if f.is_zero():
        return res.zero()
    val = rf_valuation(f, v)
    if val < 0:
        raise NegativeValuation(f"valuation {val} < 0 at {v}")
    if val > 0:
        return res.zero()
    i = ctx.index(v.var)
    if v.center is None:
        cn = _coeffs_in(f.num, ctx, i)
        cd = _coeffs_in(f.den, ctx, i)
        n = cn[max(cn)]
        d = cd[max(cd)]
    else:
        gens = list(ctx.poly_ctx.gens())
        gens[i] = ctx.poly({(0,) * ctx.nvars: v.center})
        n = f.num.compose(*gens)
        d = f.den.compose(*gens)
    return RatFunc(res, _transfer_poly(n, ctx, res), _transfer_poly(d, ctx, res))


def split_uniformizer(f: RatFunc, v: DivisorValuation) -> tuple[int, RatFunc]:
    """Write f = pi^k * u with u a v-unit; return (k, u)."""
    k = rf_valuation(f, v)
    if k == 0:
        return 0, f
    return k, f * v.uniformizer(f.ctx) ** (-k)


def rf_laurent(f: RatFunc, name: str, upto: int) -> tuple[int | None, list[RatFunc]]:
    """Laurent coefficients of f at name=0, truncated below ``upto``.

    Returns (v, [c_v, ..., c_{upto-1}]) with f = sum c_j name^j + O(name^upto);
    the c_j live in the same context and do not involve ``name``.
    """
    ctx = f.ctx
    if f.is_zero():
        return None, []
    i = ctx.index(name)
    cn = _coeffs_in(f.num, ctx, i)
    cd = _coeffs_in(f.den, ctx, i)
    a = min(cd)
    b = min(cn)
    v = b - a
    count = upto - v
    if count <= 0:
        return v, []
    zero = ctx.poly_ctx.from_dict({})
    n = [cn.get(b + j, zero) for j in range(count)]
    d = [cd.get(a + j, zero) for j in range(count)]
    d0 = d[0]
    # q_j = Q_j / d0^(j+1),  Q_j = n_j d0^j - sum_{i=1..j} d_i Q_{j-i} d0^(i-1)
    pw = [ctx.poly({(0,) * ctx.nvars: 1})]
    for _ in range(count):
        pw.append(pw[-1] * d0)
    Q = []
    out = []
    for j in range(count):
        acc = n[j] * pw[j]
        for s in range(1, j + 1):
            if not d[s].is_zero():
                acc -= d[s] * Q[j - s] * pw[s - 1]
        Q.append(acc)
        out.append(RatFunc(ctx, acc, pw[j + 1]))
    return v, out


# -- Frobenius decomposition and Artin-Schreier

def rf_frobenius_decompose(f: RatFunc) -> dict[tuple[int, ...], RatFunc]:
    """Write f = sum_e g_e^p x^e with e in [0, p)^m; return {e: g_e}."""
    ctx = f.ctx
    p = ctx.p
    if f.is_zero():
        return {}
    num = f.num * f.den ** (p - 1) if not f.den.is_one() else f.num
    buckets: dict[tuple, dict] = {}
    for e, c in _poly_terms(num):
        r = tuple(k % p for k in e)
        q = tuple(k // p for k in e)
        buckets.setdefault(r, {})[q] = c
    out = {}
    for r, d in buckets.items():
        g = RatFunc(ctx, ctx.poly_ctx.from_dict(d), f.den)
        if not g.is_zero():
            out[r] = g
    return out


def frobenius_recompose(ctx: FieldContext, parts: Mapping[tuple, RatFunc]) -> RatFunc:
    total = ctx.zero()
    for e, g in parts.items():
        total = total + g.frobenius() * RatFunc(ctx, ctx.poly({tuple(e): 1}), _reduced=True)
    return total


def _lt_key(e):
    return (sum(e), e)


def solve_artin_schreier(f: RatFunc, scope: Iterable[str] | None = None) -> RatFunc | None:
    """Return g with g^p - g = f, or None when no rational solution exists.

    A solution g = N/E in lowest terms forces den(f) = E^p, and then
    N^p - N E^(p-1) = num(f).  That polynomial equation is solved by
    leading-term elimination in degree-lex order; the only ambiguity
    (adding constants to g) shows up as a leading term equal to LT(E)^p,
    which never occurs for solvable input once the solution is normalized.
    """
    ctx = f.ctx
    p = ctx.p
    if f.is_zero():
        return ctx.zero()
    if scope is not None:
        scope = set(scope)
        if any(v not in scope for v in f.used_variables()):
            return None
    E = RatFunc(ctx, f.den, _reduced=True).pth_root()
    if E is None:
        return None
    E = E.num
    e_terms = dict(_poly_terms(E))
    le = max(e_terms, key=_lt_key)
    le_p = tuple(k * p for k in le)
    lce = e_terms[le]
    Ep1 = dict(_poly_terms(E ** (p - 1)))
    A = dict(_poly_terms(f.num))
    N: dict[tuple, int] = {}

    def add_into(target, terms, scale, shift):
        for e, c in terms.items():
            key = tuple(a + b for a, b in zip(e, shift))
            val = (target.get(key, 0) + scale * c) % p
            if val:
                target[key] = val
            else:
                target.pop(key, None)

    guard = 0
    while A:
        guard += 1
        if guard > 10 ** 6:
            return None
        M = max(A, key=_lt_key)
        lc = A[M]
        if M == le_p:
            return None
        if _lt_key(M) > _lt_key(le_p):
            if any(k % p for k in M):
                return None
            m = tuple(k // p for k in M)
            c = lc
        else:
            m = tuple(a - b * (p - 1) for a, b in zip(M, le))
            if any(k < 0 for k in m):
                return None
            c = (-lc * pow(lce, -(p - 1), p)) % p
        N[m] = (N.get(m, 0) + c) % p
        # A -= c*(m^p - m*E^(p-1))
        add_into(A, {tuple(k * p for k in m): 1}, -c, (0,) * ctx.nvars)
        add_into(A, Ep1, c, m)
    g = RatFunc(ctx, ctx.poly(N), E)
    return g


def as_image(g: RatFunc) -> RatFunc:
    """The Artin-Schreier map g -> g^p - g."""
    return g.frobenius() - g


@lru_cache(maxsize=None)
def _prime_field_log_table(p: int):
    # generator and discrete logs for F_p^*
    if p == 2:
        return 1, {1: 0}
    phi = p - 1
    fac = set()
    n = phi
    d = 2
    while d * d <= n:
        while n % d == 0:
            fac.add(d)
            n //= d
        d += 1
    if n > 1:
        fac.add(n)
    for g in range(2, p):
        if all(pow(g, phi // q, p) != 1 for q in fac):
            break
    logs = {}
    x = 1
    for k in range(phi):
        logs[x] = k
        x = x * g % p
    return g, logs


def prime_field_generator(p: int) -> int:
    return _prime_field_log_table(p)[0]


def prime_field_log(c: int, p: int) -> int:
    c %= p
    if c == 0:
        raise ZeroInput("log of zero")
    return _prime_field_log_table(p)[1][c]
