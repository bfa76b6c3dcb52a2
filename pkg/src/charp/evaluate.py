"""Evaluate syntax trees of the shared grammar to typed values.

Values are RatFunc, WittVector, DiffForm, HSymbolSum or KSymbolSum.  Integer
literals stay Python integers until they meet a field element, so that
``3*[x | y}`` multiplies by 3 in Z/p^r rather than by 3 in F_p.
"""

from __future__ import annotations

from typing import Mapping

from .errors import CharpError, DivisionByZero, ParseError, UndeclaredVariable
from .field import FieldContext, RatFunc
from .forms import DiffForm, form_d
from .grammar import Node, parse
from .hsym import HSymbolSum, h_times_k
from .milnor import KSymbolSum
from .witt import WittVector, witt_mul

KINDS = ("function", "witt", "form", "hsym", "ksym")


class EvaluationError(CharpError):
    pass


def _name(v) -> str:
    return {int: "integer", RatFunc: "function", WittVector: "Witt vector", DiffForm: "form",
            HSymbolSum: "H-symbol", KSymbolSum: "K-symbol"}.get(type(v), type(v).__name__)


class Evaluator:
    def __init__(self, ctx: FieldContext, r: int = 1, modulus: int | None = None,
                 bindings: Mapping[str, object] | None = None):
        self.ctx = ctx
        self.r = r
        self.modulus = modulus or ctx.p ** r
        self.bindings = dict(bindings or {})

    def bind(self, name: str, value):
        self.bindings[name] = value

    # coercions

    def fn(self, v, pos=0) -> RatFunc:
        if isinstance(v, int):
            return self.ctx.const(v)
        if isinstance(v, RatFunc):
            return v
        if isinstance(v, DiffForm) and v.n == 0:
            return v.coeffs.get((), self.ctx.zero())
        raise ParseError(f"expected a function, found a {_name(v)}", pos)

    def form(self, v, pos=0) -> DiffForm:
        if isinstance(v, DiffForm):
            return v
        return DiffForm.function(self.fn(v, pos))

    def coerce(self, v, kind: str | None, pos=0):
        """Turn v into the requested kind; 0 and integers adapt to any kind."""
        if kind is None or kind == "any":
            return self.fn(v) if isinstance(v, int) else v
        if kind == "function":
            return self.fn(v, pos)
        if kind == "form":
            return self.form(v, pos)
        if kind == "witt":
            if isinstance(v, WittVector):
                return v
            return WittVector.teichmuller(self.fn(v, pos), self.r)
        if kind == "hsym":
            if isinstance(v, HSymbolSum):
                return v
            if isinstance(v, DiffForm) and self.r == 1:
                return HSymbolSum.from_form(v)
            f = self.fn(v, pos)
            if f.is_zero():
                return HSymbolSum.zero(self.ctx, self.r, 0)
            return HSymbolSum.symbol(WittVector.teichmuller(f, self.r), ())
        if kind == "ksym":
            if isinstance(v, KSymbolSum):
                return v
            if isinstance(v, int):
                return KSymbolSum(self.ctx, self.modulus, 0, {(): v})
            raise ParseError(f"expected a K-symbol, found a {_name(v)}", pos)
        raise ValueError(f"unknown kind {kind!r}")

    # evaluation

    def __call__(self, tree: Node | str, kind: str | None = None):
        if isinstance(tree, str):
            tree = parse(tree)
        return self.coerce(self.ev(tree), kind, tree.pos)

    def ev(self, nd: Node):
        k = nd.kind
        a = nd.args
        if k == "int":
            return a[0]
        if k == "var":
            name = a[0]
            if name in self.bindings:
                val = self.bindings[name]
                return val.to_context(self.ctx) if hasattr(val, "to_context") else val
            if not self.ctx.has(name):
                raise UndeclaredVariable(f"variable {name!r} is not declared (position {nd.pos})")
            return self.ctx.gen(name)
        if k == "neg":
            v = self.ev(a[0])
            return -v
        if k in ("add", "sub"):
            x, y = self.ev(a[0]), self.ev(a[1])
            x, y = self._unify(x, y, nd.pos)
            return x + y if k == "add" else x - y
        if k == "mul":
            return self._mul(self.ev(a[0]), self.ev(a[1]), nd.pos)
        if k == "div":
            x, y = self.ev(a[0]), self.fn(self.ev(a[1]), nd.pos)
            if y.is_zero():
                raise DivisionByZero(f"division by zero at position {nd.pos}")
            if isinstance(x, DiffForm):
                return x / y
            return self.fn(x, nd.pos) / y
        if k == "pow":
            base, e = self.ev(a[0]), a[1]
            if isinstance(base, int) and e >= 0:
                return base ** e
            base = self.fn(base, nd.pos)
            if e < 0 and base.is_zero():
                raise DivisionByZero(f"negative power of zero at position {nd.pos}")
            return base ** e
        if k == "wedge":
            return self.form(self.ev(a[0]), nd.pos).wedge(self.form(self.ev(a[1]), nd.pos))
        if k == "d":
            return form_d(self.form(self.ev(a[0]), nd.pos))
        if k == "witt":
            return WittVector(self.ctx, [self.fn(self.ev(c), c.pos) for c in a[0]])
        if k == "hsym":
            w = WittVector(self.ctx, [self.fn(self.ev(c), c.pos) for c in a[0]])
            ents = [self._entry(c) for c in a[1]]
            return HSymbolSum.symbol(w, ents)
        if k == "ksym":
            ents = [self._entry(c) for c in a[0]]
            return KSymbolSum(self.ctx, a[1] or self.modulus, len(ents), [(1, ents)])
        raise ParseError(f"unsupported construct {k}", nd.pos)

    def _entry(self, c: Node) -> RatFunc:
        f = self.fn(self.ev(c), c.pos)
        if f.is_zero():
            raise EvaluationError(f"symbol entry at position {c.pos} is zero")
        return f

    def _unify(self, x, y, pos):
        if type(x) is type(y):
            return x, y
        order = (int, RatFunc, DiffForm)
        if type(x) in order and type(y) in order:
            if DiffForm in (type(x), type(y)):
                return self.form(x, pos), self.form(y, pos)
            return self.fn(x, pos), self.fn(y, pos)
        # a literal 0 adapts to the other operand
        for kind, cls in (("hsym", HSymbolSum), ("ksym", KSymbolSum), ("witt", WittVector)):
            if isinstance(x, cls) and isinstance(y, int) and y == 0:
                return x, self._zero_like(x)
            if isinstance(y, cls) and isinstance(x, int) and x == 0:
                return self._zero_like(y), y
        raise ParseError(f"cannot add a {_name(x)} and a {_name(y)}", pos)

    def _zero_like(self, v):
        if isinstance(v, HSymbolSum):
            return HSymbolSum.zero(v.ctx, v.r, v.n)
        if isinstance(v, KSymbolSum):
            return KSymbolSum(v.ctx, v.m, v.n)
        return WittVector.zero(v.ctx, v.r)

    def _mul(self, x, y, pos):
        if isinstance(x, int) and isinstance(y, int):
            return x * y
        if isinstance(y, int) and isinstance(x, (HSymbolSum, KSymbolSum)):
            return x * y
        if isinstance(x, int) and isinstance(y, (HSymbolSum, KSymbolSum)):
            return y * x
        if isinstance(x, HSymbolSum) and isinstance(y, KSymbolSum):
            return h_times_k(x, y)
        if isinstance(x, KSymbolSum) and isinstance(y, KSymbolSum):
            return x.product(y)
        if isinstance(x, WittVector) and isinstance(y, WittVector):
            return witt_mul(x, y)
        if isinstance(x, DiffForm) or isinstance(y, DiffForm):
            if isinstance(x, DiffForm) and isinstance(y, DiffForm):
                return x.wedge(y)
            f, w = (y, x) if isinstance(x, DiffForm) else (x, y)
            return w.scale(self.fn(f, pos))
        return self.fn(x, pos) * self.fn(y, pos)


def evaluate(text: str | Node, ctx: FieldContext, kind: str | None = None, r: int = 1,
             modulus: int | None = None, bindings: Mapping[str, object] | None = None):
    """One-shot evaluation; see Evaluator."""
    return Evaluator(ctx, r, modulus, bindings)(text, kind)
