"""Kähler differential forms over F_p(x_1, ..., x_m).

A form is stored in the basis dx_I, I an increasing index tuple.  The
Cartier machinery works in the logarithmic p-basis instead: every form is
uniquely  sum_{I,e} g_{I,e}^p x^e dlog x_I  with exponents e in [0, p)^m,
and d acts on the (I, e) piece by wedging with theta_e = sum_i e_i dlog x_i.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Mapping, Sequence

from .errors import ContextMismatch, DegreeMismatch, InternalLimit, NotClosed, ZeroArgument
from .field import FieldContext, RatFunc, rf_frobenius_decompose

Index = tuple[int, ...]


def _perm_sign(seq) -> int:
    inv = sum(1 for a in range(len(seq)) for b in range(a + 1, len(seq)) if seq[a] > seq[b])
    return -1 if inv % 2 else 1


def _merge(a: Index, b: Index) -> tuple[int, Index | None]:
    """Sign and sorted index for dx_a ^ dx_b (None when they overlap)."""
    if set(a) & set(b):
        return 0, None
    seq = tuple(a) + tuple(b)
    return _perm_sign(seq), tuple(sorted(seq))


class DiffForm:
    """A degree-n differential form: {index tuple: coefficient}."""

    __slots__ = ("ctx", "n", "coeffs", "_hash")

    def __init__(self, ctx: FieldContext, n: int, coeffs: Mapping[Index, RatFunc] | None = None):
        self.ctx = ctx
        self.n = n
        clean = {}
        for I, c in (coeffs or {}).items():
            if len(I) != n:
                raise ValueError(f"index {I} in a degree-{n} form")
            if not c.is_zero():
                clean[tuple(I)] = c
        self.coeffs = dict(sorted(clean.items()))
        self._hash = None

    # construction helpers

    @classmethod
    def zero(cls, ctx: FieldContext, n: int) -> "DiffForm":
        return cls(ctx, n, {})

    @classmethod
    def function(cls, f: RatFunc) -> "DiffForm":
        return cls(f.ctx, 0, {(): f})

    @classmethod
    def dx(cls, ctx: FieldContext, names: Sequence[str]) -> "DiffForm":
        idx = [ctx.index(v) for v in names]
        form = cls(ctx, 0, {(): ctx.one()})
        for i in idx:
            form = form.wedge(cls(ctx, 1, {(i,): ctx.one()}))
        return form

    @classmethod
    def dlog_basis(cls, ctx: FieldContext, I: Index, coeff: RatFunc | None = None) -> "DiffForm":
        """coeff * dlog x_I."""
        c = coeff if coeff is not None else ctx.one()
        xs = ctx.one()
        for i in I:
            xs = xs * ctx.gen(ctx.variables[i])
        return cls(ctx, len(I), {tuple(I): c / xs})

    # protocol

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return self.is_zero()
        if not isinstance(other, DiffForm):
            return NotImplemented
        return self.ctx is other.ctx and self.n == other.n and self.coeffs == other.coeffs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, tuple(self.coeffs.items())))
        return self._hash

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __repr__(self):
        return f"DiffForm({self})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for I, c in self.coeffs.items():
            if not I:
                parts.append(f"({c})")
                continue
            basis = "^".join(f"d({self.ctx.variables[i]})" for i in I)
            parts.append(basis if c.is_one() else f"({c})*{basis}")
        return " + ".join(parts)

    def terms(self) -> list[tuple[list[str], str]]:
        """Serializable (variable names, coefficient) list."""
        return [([self.ctx.variables[i] for i in I], str(c)) for I, c in self.coeffs.items()]

    def coefficient(self, names: Sequence[str]) -> RatFunc:
        idx = tuple(self.ctx.index(v) for v in names)
        return self.coeffs.get(tuple(sorted(idx)), self.ctx.zero()) * _perm_sign(idx)

    # arithmetic

    def _check(self, other: "DiffForm"):
        if not isinstance(other, DiffForm):
            raise TypeError("expected a DiffForm")
        if other.ctx is not self.ctx:
            raise ContextMismatch("forms over different fields")
        if other.n != self.n:
            raise DegreeMismatch(f"cannot add forms of degrees {self.n} and {other.n}")

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        self._check(other)
        out = dict(self.coeffs)
        for I, c in other.coeffs.items():
            out[I] = out[I] + c if I in out else c
        return DiffForm(self.ctx, self.n, out)

    __radd__ = __add__

    def __neg__(self):
        return DiffForm(self.ctx, self.n, {I: -c for I, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, f: RatFunc | int) -> "DiffForm":
        if isinstance(f, int):
            f = self.ctx.const(f)
        if f.is_zero():
            return DiffForm.zero(self.ctx, self.n)
        return DiffForm(self.ctx, self.n, {I: c * f for I, c in self.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, (int, RatFunc)):
            return self.scale(other)
        if isinstance(other, DiffForm):
            return self.wedge(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, RatFunc)):
            return self.scale(other)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, int):
            other = self.ctx.const(other)
        if isinstance(other, RatFunc):
            return self.scale(other.inverse())
        return NotImplemented

    def wedge(self, other: "DiffForm") -> "DiffForm":
        if other.ctx is not self.ctx:
            raise ContextMismatch("forms over different fields")
        out: dict[Index, RatFunc] = {}
        for I, a in self.coeffs.items():
            for J, b in other.coeffs.items():
                s, K = _merge(I, J)
                if not s:
                    continue
                v = a * b if s > 0 else -(a * b)
                out[K] = out[K] + v if K in out else v
        return DiffForm(self.ctx, self.n + other.n, out)

    __xor__ = wedge

    def to_context(self, ctx: FieldContext) -> "DiffForm":
        if ctx is self.ctx:
            return self
        out = {}
        for I, c in self.coeffs.items():
            J = tuple(ctx.index(self.ctx.variables[i]) for i in I)
            out[tuple(sorted(J))] = c.to_context(ctx) * _perm_sign(J)
        return DiffForm(ctx, self.n, out)

    def used_variables(self) -> set[str]:
        out = set()
        for I, c in self.coeffs.items():
            out.update(self.ctx.variables[i] for i in I)
            out.update(c.used_variables())
        return out

    def size(self) -> int:
        return sum(c.size() for c in self.coeffs.values())


# -- core operators

def form_d(w: DiffForm) -> DiffForm:
    ctx = w.ctx
    out: dict[Index, RatFunc] = {}
    for I, f in w.coeffs.items():
        for j in f.used_variables():
            i = ctx.index(j)
            if i in I:
                continue
            s, K = _merge((i,), I)
            v = f.derivative(j)
            if v.is_zero():
                continue
            v = v if s > 0 else -v
            out[K] = out[K] + v if K in out else v
    return DiffForm(ctx, w.n + 1, out)


def df(f: RatFunc) -> DiffForm:
    return form_d(DiffForm.function(f))


def form_dlog(a: RatFunc, *bs: RatFunc) -> DiffForm:
    """a * db_1/b_1 ^ ... ^ db_n/b_n."""
    form = DiffForm.function(a)
    for b in bs:
        if b.is_zero():
            raise ZeroArgument("dlog of the zero function")
        form = form.wedge(df(b) / b)
    return form


def inverse_cartier(w: DiffForm) -> DiffForm:
    """Phi(f dx_I) = f^p x_I^(p-1) dx_I."""
    ctx = w.ctx
    p = ctx.p
    out = {}
    for I, f in w.coeffs.items():
        xs = ctx.one()
        for i in I:
            xs = xs * ctx.gen(ctx.variables[i])
        out[I] = f.frobenius() * xs ** (p - 1)
    return DiffForm(ctx, w.n, out)


def log_decompose(w: DiffForm) -> dict[tuple[Index, tuple[int, ...]], RatFunc]:
    """{(I, e): g} with w = sum g^p x^e dlog x_I, e in [0, p)^m."""
    ctx = w.ctx
    out = {}
    for I, f in w.coeffs.items():
        xs = ctx.one()
        for i in I:
            xs = xs * ctx.gen(ctx.variables[i])
        for e, g in rf_frobenius_decompose(f * xs).items():
            out[(I, e)] = g
    return out


def log_recompose(ctx: FieldContext, n: int, parts: Mapping) -> DiffForm:
    total = DiffForm.zero(ctx, n)
    for (I, e), g in parts.items():
        mono = RatFunc(ctx, ctx.poly({tuple(e): 1}), _reduced=True)
        total = total + DiffForm.dlog_basis(ctx, I, g.frobenius() * mono)
    return total


def is_closed(w: DiffForm) -> bool:
    return form_d(w).is_zero()


def cartier(w: DiffForm) -> DiffForm:
    """Cartier operator on closed forms."""
    if not is_closed(w):
        raise NotClosed("the Cartier operator needs a closed form")
    return _cartier_unchecked(w)


def _cartier_unchecked(w: DiffForm) -> DiffForm:
    ctx = w.ctx
    zero_e = (0,) * ctx.nvars
    total = DiffForm.zero(ctx, w.n)
    for (I, e), g in log_decompose(w).items():
        if e == zero_e:
            total = total + DiffForm.dlog_basis(ctx, I, g)
    return total


def _kappa_piece(ctx: FieldContext, I: Index, e: tuple[int, ...], coeff: RatFunc):
    """Homotopy kappa on coeff * x^e dlog x_I (coeff a p-th power)."""
    p = ctx.p
    i0 = next(i for i, k in enumerate(e) if k)
    if i0 not in I:
        return None
    pos = I.index(i0)
    J = I[:pos] + I[pos + 1:]
    c = pow(e[i0], -1, p) * (-1 if pos % 2 else 1)
    mono = RatFunc(ctx, ctx.poly({tuple(e): 1}), _reduced=True)
    return DiffForm.dlog_basis(ctx, J, coeff * mono * c)


def antiderivative(w: DiffForm) -> DiffForm:
    """eta with d(eta) = w for a closed form whose Cartier image is 0.

    Only the e != 0 pieces are used; callers check exactness first.
    """
    ctx = w.ctx
    zero_e = (0,) * ctx.nvars
    if w.n == 0:
        raise NotClosed("a 0-form has no antiderivative")
    total = DiffForm.zero(ctx, w.n - 1)
    for (I, e), g in log_decompose(w).items():
        if e == zero_e:
            continue
        piece = _kappa_piece(ctx, I, e, g.frobenius())
        if piece is not None:
            total = total + piece
    return total


def split_exact(w: DiffForm) -> tuple[DiffForm, DiffForm]:
    """For closed w return (psi, xi) with w = Phi(psi) + d(xi), psi = C(w)."""
    psi = cartier(w)
    xi = antiderivative(w - inverse_cartier(psi))
    return psi, xi


def is_exact(w: DiffForm) -> bool:
    return is_closed(w) and cartier(w).is_zero()


def is_logarithmic(w: DiffForm) -> bool:
    if w.is_zero():
        return True
    if not is_closed(w):
        return False
    return cartier(w) == w


@dataclass
class ClosedFormClassification:
    verdict: str  # 'NotClosed', 'Exact', 'LogDecomposition'
    pairs: list[tuple[RatFunc, DiffForm]] = field(default_factory=list)
    exact_part: DiffForm | None = None
    stable: DiffForm | None = None
    iterations: int = 0

    def log_part(self, ctx: FieldContext, n: int) -> DiffForm:
        total = DiffForm.zero(ctx, n)
        for a, psi in self.pairs:
            total = total + psi.scale(a.frobenius())
        return total


CARTIER_ITERATION_CAP = 64


def classify_closed(w: DiffForm) -> ClosedFormClassification:
    """NotClosed / Exact / LogDecomposition of a form.

    For LogDecomposition, ``pairs`` lists (a_j, dlog x_I) with
    w - sum a_j^p dlog x_I of Cartier image 0 (that difference is
    ``exact_part``); ``stable`` is the Cartier-fixed form reached by
    iterating C while the iterates stay closed, or None.
    """
    if not is_closed(w):
        return ClosedFormClassification("NotClosed")
    c = cartier(w)
    if c.is_zero():
        return ClosedFormClassification("Exact", exact_part=w, iterations=1)
    pairs = []
    for I, g in c.coeffs.items():
        xs = w.ctx.one()
        for i in I:
            xs = xs * w.ctx.gen(w.ctx.variables[i])
        pairs.append((g * xs, DiffForm.dlog_basis(w.ctx, I)))
    out = ClosedFormClassification("LogDecomposition", pairs=pairs)
    out.exact_part = w - out.log_part(w.ctx, w.n)
    cur, nxt = w, c
    seen = {w}
    k = 1
    while True:
        if nxt == cur:
            out.stable = cur
            break
        if nxt in seen or not is_closed(nxt):
            break
        if k >= CARTIER_ITERATION_CAP:
            raise InternalLimit("Cartier iteration did not stabilize")
        seen.add(nxt)
        cur, nxt = nxt, _cartier_unchecked(nxt)
        k += 1
    out.iterations = k
    return out


def form_pullback(w: DiffForm, mapping: Mapping[str, RatFunc], target: FieldContext | None = None) -> DiffForm:
    """Pull back along the substitution x -> mapping[x] (others kept by name)."""
    target = target or w.ctx
    images = {}
    for i, name in enumerate(w.ctx.variables):
        if name in mapping:
            images[i] = df(mapping[name].to_context(target))
        elif target.has(name):
            images[i] = DiffForm(target, 1, {(target.index(name),): target.one()})
        else:
            images[i] = None
    total = DiffForm.zero(target, w.n)
    for I, c in w.coeffs.items():
        term = DiffForm.function(c.subs(mapping, target))
        for i in I:
            img = images[i]
            if img is None:
                raise ContextMismatch(f"no image for d({w.ctx.variables[i]})")
            term = term.wedge(img)
        total = total + term
    return total


def random_form(ctx: FieldContext, n: int, rng, max_deg: int = 3, terms: int = 2,
                rational: bool = True) -> DiffForm:
    """A random degree-n form; used by tests and demos."""
    out = {}
    for I in combinations(range(ctx.nvars), n):
        if rng.random() < 0.4 and n:
            continue
        out[I] = random_ratfunc(ctx, rng, max_deg, terms, rational)
    return DiffForm(ctx, n, out)


def random_ratfunc(ctx: FieldContext, rng, max_deg: int = 3, terms: int = 3,
                   rational: bool = True) -> RatFunc:
    def poly():
        d = {}
        for _ in range(rng.randint(1, terms)):
            e = tuple(rng.randint(0, max_deg) if rng.random() < 0.6 else 0 for _ in range(ctx.nvars))
            d[e] = rng.randrange(1, ctx.p) if ctx.p > 2 else 1
        return ctx.poly(d)

    num = poly()
    if rational and rng.random() < 0.5:
        den = poly()
        if den.is_zero():
            den = ctx.poly({(0,) * ctx.nvars: 1})
        return RatFunc(ctx, num, den)
    return RatFunc(ctx, num)
