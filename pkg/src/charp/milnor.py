"""Milnor K-symbols modulo m over F_p(x_1, ..., x_m).

The normal form expands entries into monic irreducible factors and a fixed
generator g of F_p^*.  It is a representative, not a decision procedure;
``k_is_zero`` gives three-valued answers with certificates.
"""

from __future__ import annotations

from itertools import product
from math import gcd
from typing import Iterable, Mapping, Sequence

from . import verdict as V
from .errors import (
    ContextMismatch, DegreeMismatch, ModulusMismatch, ModulusNotP, RamifiedInput, ResourceLimit,
    ZeroArgument,
)
from .field import (
    DivisorValuation,
    FieldContext,
    RatFunc,
    prime_field_generator,
    prime_field_log,
    rf_reduce,
    split_uniformizer,
)
from .forms import DiffForm, form_dlog

MAX_TERMS = 10_000

Entries = tuple[RatFunc, ...]


def _v_p(c: int, p: int) -> int:
    k = 0
    while c % p == 0:
        c //= p
        k += 1
    return k


class KSymbolSum:
    """sum c_i {b_i1, ..., b_in} in K^n_M(F) / m."""

    __slots__ = ("ctx", "m", "n", "terms")

    def __init__(self, ctx: FieldContext, m: int, n: int,
                 terms: Mapping[Entries, int] | Iterable[tuple[int, Sequence]] = ()):
        if m < 2:
            raise ModulusMismatch("modulus must be at least 2")
        self.ctx, self.m, self.n = ctx, m, n
        acc: dict[Entries, int] = {}
        items = terms.items() if isinstance(terms, Mapping) else ((tuple(e), c) for c, e in terms)
        for entries, c in items:
            entries = tuple(ctx(b) if not isinstance(b, RatFunc) else b for b in entries)
            if len(entries) != n:
                raise DegreeMismatch(f"symbol of length {len(entries)} in a degree-{n} sum")
            for b in entries:
                if b.ctx is not ctx:
                    raise ContextMismatch("entry from another context")
                if b.is_zero():
                    raise ZeroArgument("symbol entry is the zero function")
            acc[entries] = (acc.get(entries, 0) + c) % m
        self.terms = {e: c for e, c in acc.items() if c}
        if len(self.terms) > MAX_TERMS:
            raise ResourceLimit(f"symbol sum exceeds {MAX_TERMS} terms")

    @classmethod
    def symbol(cls, entries: Sequence, m: int, coeff: int = 1, ctx: FieldContext | None = None):
        if ctx is None:
            ctx = entries[0].ctx
        return cls(ctx, m, len(entries), [(coeff, entries)])

    @classmethod
    def constant(cls, ctx: FieldContext, m: int, c: int) -> "KSymbolSum":
        return cls(ctx, m, 0, {(): c})

    def is_empty(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, KSymbolSum):
            return NotImplemented
        return (self.ctx is other.ctx and self.m == other.m and self.n == other.n
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.m, self.n, tuple(sorted((str(e), c) for e, c in self.terms.items()))))

    def _check(self, other):
        if not isinstance(other, KSymbolSum):
            raise TypeError("expected a KSymbolSum")
        if other.ctx is not self.ctx or other.m != self.m or other.n != self.n:
            raise ContextMismatch("symbol sums with different context, modulus or degree")

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        self._check(other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            t[e] = t.get(e, 0) + c
        return KSymbolSum(self.ctx, self.m, self.n, t)

    __radd__ = __add__

    def __neg__(self):
        return KSymbolSum(self.ctx, self.m, self.n, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, k):
        if isinstance(k, int):
            return KSymbolSum(self.ctx, self.m, self.n, {e: c * k for e, c in self.terms.items()})
        if isinstance(k, KSymbolSum):
            return self.product(k)
        return NotImplemented

    __rmul__ = __mul__

    def product(self, other: "KSymbolSum") -> "KSymbolSum":
        """Graded product {a} . {b} = {a, b}."""
        if other.ctx is not self.ctx or other.m != self.m:
            raise ContextMismatch("product of symbol sums over different data")
        t: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                t[e1 + e2] = t.get(e1 + e2, 0) + c1 * c2
        return KSymbolSum(self.ctx, self.m, self.n + other.n, t)

    def to_context(self, ctx: FieldContext) -> "KSymbolSum":
        return KSymbolSum(ctx, self.m, self.n,
                          {tuple(b.to_context(ctx) for b in e): c for e, c in self.terms.items()})

    def subs(self, mapping, target: FieldContext | None = None) -> "KSymbolSum":
        target = target or self.ctx
        return KSymbolSum(target, self.m, self.n,
                          {tuple(b.subs(mapping, target) for b in e): c for e, c in self.terms.items()})

    def __str__(self):
        if self.n == 0:
            return str(self.terms.get((), 0))
        if not self.terms:
            return "0"
        parts = []
        for e, c in sorted(self.terms.items(), key=lambda kv: [str(b) for b in kv[0]]):
            sym = "{" + ", ".join(str(b) for b in e) + "}@" + str(self.m)
            parts.append(sym if c == 1 else f"{c}*{sym}")
        return " + ".join(parts)

    def __repr__(self):
        return f"KSymbolSum({self})"

    def to_json(self):
        return {"modulus": self.m, "degree": self.n,
                "terms": [{"coefficient": c, "entries": [str(b) for b in e]}
                          for e, c in sorted(self.terms.items(), key=lambda kv: [str(b) for b in kv[0]])]}


# -- factorization of entries

def factor_entry(f: RatFunc) -> tuple[int, list[tuple[RatFunc, int]]]:
    """f = c * prod g_k^e_k with g_k monic irreducible polynomials."""
    ctx = f.ctx
    p = ctx.p
    const = 1
    out: dict[RatFunc, int] = {}
    for poly, sign in ((f.num, 1), (f.den, -1)):
        if poly.is_constant():
            c = int(poly.leading_coefficient())
            const = const * (c if sign > 0 else pow(c, -1, p)) % p
            continue
        c0, facs = poly.factor()
        c0 = int(c0)
        const = const * (c0 if sign > 0 else pow(c0, -1, p)) % p
        for g, e in facs:
            lc = int(g.leading_coefficient())
            g = RatFunc(ctx, g, _reduced=True)  # monic by construction below
            if lc != 1:
                inv = pow(lc, -1, p)
                g = RatFunc(ctx, g.num * inv, _reduced=True)
                const = const * pow(lc, int(e) * sign, p) % p
            out[g] = out.get(g, 0) + int(e) * sign
    return const, [(g, e) for g, e in sorted(out.items(), key=lambda kv: str(kv[0])) if e]


def _is_steinberg(entries: Entries) -> bool:
    n = len(entries)
    for i in range(n):
        if entries[i].is_one():
            return True
        for j in range(i + 1, n):
            s = entries[i] + entries[j]
            if s.is_one() or s.is_zero():
                return True
    return False


def _sort_sign(atoms: list) -> tuple[int, list]:
    keyed = [(_atom_key(a), a) for a in atoms]
    sign = 1
    # bubble sort to track the permutation sign
    for i in range(len(keyed)):
        for j in range(len(keyed) - 1 - i):
            if keyed[j][0] > keyed[j + 1][0]:
                keyed[j], keyed[j + 1] = keyed[j + 1], keyed[j]
                sign = -sign
    return sign, [a for _, a in keyed]


def _atom_key(a: RatFunc):
    if a.is_constant():
        return (0, "")
    return (1, len(str(a)), str(a))


def k_normalize(s: KSymbolSum) -> KSymbolSum:
    """Rewrite to the expanded normal form (a representative only)."""
    ctx, m, n, p = s.ctx, s.m, s.n, s.ctx.p
    coprime = gcd(m, p) == 1
    g = prime_field_generator(p)
    G = ctx.const(g)
    cmod = gcd(p - 1, m) if coprime else 1
    out: dict[Entries, int] = {}

    def emit(coef: int, atoms: list):
        # atoms: RatFunc monic irreducibles or the generator constant G
        work = list(atoms)
        while True:
            consts = sum(1 for a in work if a.is_constant())
            if consts and not coprime:
                return
            if consts >= 2:
                return
            sign, work = _sort_sign(work)
            coef *= sign
            dup = next((i for i in range(len(work) - 1) if work[i] == work[i + 1]
                        and not work[i].is_constant()), None)
            if dup is None:
                break
            # {f, f} = {f, -1}
            if p == 2 or not coprime:
                return
            coef *= (p - 1) // 2
            work[dup + 1] = G
        mod = cmod if any(a.is_constant() for a in work) else m
        if mod == 1:
            return
        key = tuple(work)
        out[key] = (out.get(key, 0) + coef) % mod

    for entries, coef in s.terms.items():
        if _is_steinberg(entries):
            continue
        slots = []
        for b in entries:
            c, facs = factor_entry(b)
            opts = [(e, f) for f, e in facs]
            if c != 1 and coprime:
                opts.append((prime_field_log(c, p), G))
            slots.append(opts)
        if any(not o for o in slots):
            continue
        count = 1
        for o in slots:
            count *= len(o)
        if count > MAX_TERMS:
            raise ResourceLimit("multilinear expansion too large")
        for choice in product(*slots):
            w = coef
            for e, _ in choice:
                w *= e
            if w % m:
                emit(w, [a for _, a in choice])
    res = KSymbolSum(ctx, m, n, {})
    res.terms = {k: c for k, c in sorted(out.items(), key=lambda kv: [_atom_key(a) for a in kv[0]]) if c}
    if len(res.terms) > MAX_TERMS:
        raise ResourceLimit(f"symbol sum exceeds {MAX_TERMS} terms")
    return res


# -- residues and specialization

def _split_terms(s: KSymbolSum, v: DivisorValuation):
    """Yield (coef, pi_positions, reduced-unit entries) for each expanded term.

    Entries are written pi^k u; products of pi in several slots use
    {pi, pi} = {pi, -1}, so at most one pi remains.  Unit entries are
    reduced to the residue field.
    """
    ctx = s.ctx
    res = v.residue_context(ctx)
    minus_one = res.const(-1)
    for entries, coef in s.terms.items():
        split = [split_uniformizer(b, v) for b in entries]
        slots = []
        for k, u in split:
            opts = [("u", 1, rf_reduce(u, v))]
            if k:
                opts.append(("pi", k, None))
            slots.append(opts)
        for choice in product(*slots):
            w = coef
            for _, k, _ in choice:
                w *= k
            if w % s.m == 0:
                continue
            pis = [i for i, c in enumerate(choice) if c[0] == "pi"]
            ents = [c[2] for c in choice]
            for i in pis[1:]:
                ents[i] = minus_one
            yield w, (pis[0] if pis else None), ents


def k_residue(s: KSymbolSum, v: DivisorValuation) -> KSymbolSum:
    """Tame residue at v: degree n-1 over the residue field."""
    res = v.residue_context(s.ctx)
    if s.n == 0:
        return KSymbolSum(res, s.m, 0, {})
    acc: dict = {}
    for w, pos, ents in _split_terms(s, v):
        if pos is None:
            continue
        rest = tuple(ents[:pos] + ents[pos + 1:])
        if any(b.is_zero() for b in rest):
            raise ZeroArgument("reduced entry vanished")
        sign = -1 if pos % 2 else 1
        acc[rest] = acc.get(rest, 0) + sign * w
    return k_normalize(KSymbolSum(res, s.m, s.n - 1, acc))


def k_specialize(s: KSymbolSum, v: DivisorValuation) -> KSymbolSum:
    """Reduce unit entries; RamifiedInput if any uniformizer part survives normalization."""
    res = v.residue_context(s.ctx)
    s = k_normalize(s)
    acc: dict = {}
    for w, pos, ents in _split_terms(s, v):
        if pos is not None:
            raise RamifiedInput(f"symbol has a uniformizer part at {v}")
        acc[tuple(ents)] = acc.get(tuple(ents), 0) + w
    return k_normalize(KSymbolSum(res, s.m, s.n, acc))


def k_specialize_pi(s: KSymbolSum, v: DivisorValuation) -> KSymbolSum:
    """s_pi(x) = residue of {-pi} . x, defined for every x."""
    minus_pi = -v.uniformizer(s.ctx)
    front = KSymbolSum(s.ctx, s.m, 1, {(minus_pi,): 1})
    return k_residue(front.product(s), v)


def k_dlog(s: KSymbolSum) -> DiffForm:
    if s.m != s.ctx.p:
        raise ModulusNotP(f"dlog needs modulus p = {s.ctx.p}, got {s.m}")
    total = DiffForm.zero(s.ctx, s.n)
    for e, c in s.terms.items():
        total = total + form_dlog(s.ctx.const(c), *e)
    return total


def _prime_power(m: int, p: int) -> int | None:
    r = 0
    while m % p == 0:
        m //= p
        r += 1
    return r if m == 1 else None


def k_is_zero(s: KSymbolSum) -> V.Verdict:
    p = s.ctx.p
    norm = k_normalize(s)
    if norm.is_empty():
        return V.zero("normalizes to the empty sum", kind="empty", normal_form=norm)
    r = _prime_power(s.m, p)
    if r is not None:
        s0 = min(_v_p(c, p) for c in norm.terms.values())
        if s0 >= r:
            return V.zero("all coefficients divisible by the modulus", kind="divisible", normal_form=norm)
        reduced = KSymbolSum(norm.ctx, p, norm.n,
                             {e: (c // p ** s0) % p for e, c in norm.terms.items()})
        form = k_dlog(reduced)
        if not form.is_zero():
            return V.nonzero("nonzero dlog after dividing by p^s", kind="dlog", s=s0,
                             normal_form=norm, divided=reduced, dlog=form)
        if r == 1:
            return V.zero("dlog vanishes (injective for modulus p)", kind="dlog", normal_form=norm)
        return V.unknown("no p-divisibility witness found", s=s0)
    if gcd(s.m, p) == 1:
        return _coprime_zero_test(norm)
    return V.unknown("mixed modulus")


def _coprime_zero_test(s: KSymbolSum, depth: int = 0) -> V.Verdict:
    """Residue recursion along the last variable (Milnor's split sequence)."""
    s = k_normalize(s)
    if s.is_empty():
        return V.zero("normalizes to the empty sum", kind="empty", normal_form=s)
    ctx = s.ctx
    used = set()
    for e in s.terms:
        for b in e:
            used.update(b.used_variables())
    if not used:
        # over F_p: K^0 = Z/m, K^1 = F_p^*/m, K^{>=2} = 0
        if s.n >= 2:
            return V.zero("K^n of a finite field vanishes for n >= 2", kind="base", normal_form=s)
        return V.nonzero("nonzero class over the prime field", kind="base", normal_form=s)
    for t in reversed(ctx.variables):
        if t not in used:
            continue
        centers = set()
        ok = True
        for e in s.terms:
            for b in e:
                if b.is_constant() or t not in b.used_variables():
                    continue
                # entries are monic irreducible; need b = t - c
                if b.degrees_in(t) != (1, 0) or len(b.used_variables()) != 1:
                    ok = False
                    break
                c = (ctx.gen(t) - b)
                centers.add(c.constant_value())
            if not ok:
                break
        if not ok:
            continue
        witnesses = []
        for c in sorted(centers):
            v = DivisorValuation(t, c)
            res = k_residue(s, v)
            sub = _coprime_zero_test(res, depth + 1)
            witnesses.append((v, res, sub))
            if sub.is_nonzero:
                return V.nonzero("nonzero residue", kind="residue", normal_form=s, place=v, residue=res, sub=sub)
            if sub.is_unknown:
                return V.unknown("residue undecided", place=v)
        # all finite residues vanish: s is constant in t
        vinf = DivisorValuation(t, None)
        const = k_specialize_pi(s, vinf)
        sub = _coprime_zero_test(const, depth + 1)
        if sub.is_nonzero:
            return V.nonzero("nonzero constant part", kind="constant", normal_form=s, variable=t,
                             constant=const, sub=sub)
        if sub.is_zero:
            return V.zero("all residues and the constant part vanish", kind="split", normal_form=s,
                          variable=t, residues=witnesses, constant=const, sub=sub)
        return sub
    return V.unknown("entries with non-rational places")
