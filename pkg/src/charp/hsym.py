"""Symbol sums in H^{n+1}_{p^r}(F) and their ramification.

A term c*[w | b_1, ..., b_n} pairs a length-r Witt vector with n nonzero
entries.  For r = 1 everything reduces to differential forms (see
``charp.polar``).  For r > 1 the procedures use literal relations only:

* normalization rewrites the sum with explicit relation instances and
  logs every step, so a Zero answer can be replayed term by term;
* when every first Witt component vanishes, the sum is iota of a shorter
  sum and we recurse (iota is injective);
* otherwise the first components form the truncation to r = 1, whose
  nonvanishing proves nonvanishing.

Anything else comes back Unknown.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from . import verdict as V
from .errors import (
    ContextMismatch,
    DegreeMismatch,
    IndexOutOfRange,
    LengthMismatch,
    ResourceLimit,
    UnsupportedInput,
    WildInput,
    ZeroArgument,
)
from .field import (
    DivisorValuation,
    FieldContext,
    RatFunc,
    rf_reduce,
    rf_valuation,
    solve_artin_schreier,
    split_uniformizer,
)
from .forms import DiffForm, form_dlog
from .milnor import KSymbolSum, factor_entry
from .polar import (
    FiltrationReport,
    Place,
    as_correction,
    filtration,
    local_analysis,
    place_of,
    residue_form,
    simple_form,
    zero_test,
)
from .witt import WittVector, witt_frobenius, witt_pmul, witt_scale

MAX_TERMS = 10_000
MAX_ROUNDS = 16

Entries = tuple[RatFunc, ...]
Term = tuple[int, WittVector, Entries]


class HSymbolSum:
    """sum_i c_i [w_i | b_i1, ..., b_in} in H^{n+1}_{p^r}(F)."""

    __slots__ = ("ctx", "r", "n", "terms")

    def __init__(self, ctx: FieldContext, r: int, n: int,
                 terms: Mapping | Iterable[Term] = ()):
        self.ctx, self.r, self.n = ctx, r, n
        mod = ctx.p ** r
        acc: dict = {}
        items = terms.items() if isinstance(terms, Mapping) else (((w, e), c) for c, w, e in terms)
        for (w, entries), c in items:
            entries = tuple(ctx(b) if not isinstance(b, RatFunc) else b for b in entries)
            if not isinstance(w, WittVector):
                w = WittVector(ctx, w)
            if w.r != r:
                raise LengthMismatch(f"Witt vector of length {w.r} in a length-{r} sum")
            if w.ctx is not ctx:
                raise ContextMismatch("Witt vector from another context")
            if len(entries) != n:
                raise DegreeMismatch(f"symbol with {len(entries)} entries in a degree-{n} sum")
            for b in entries:
                if b.ctx is not ctx:
                    raise ContextMismatch("entry from another context")
                if b.is_zero():
                    raise ZeroArgument("symbol entry is the zero function")
            key = (w, entries)
            acc[key] = (acc.get(key, 0) + c) % mod
        self.terms = {k: c for k, c in acc.items() if c and not k[0].is_zero()}
        if len(self.terms) > MAX_TERMS:
            raise ResourceLimit(f"symbol sum exceeds {MAX_TERMS} terms")

    @classmethod
    def symbol(cls, w: WittVector | Sequence, entries: Sequence = (), coeff: int = 1,
               ctx: FieldContext | None = None) -> "HSymbolSum":
        if ctx is None:
            ctx = w.ctx if isinstance(w, WittVector) else w[0].ctx
        if not isinstance(w, WittVector):
            w = WittVector(ctx, w)
        return cls(ctx, w.r, len(entries), [(coeff, w, tuple(entries))])

    @classmethod
    def zero(cls, ctx: FieldContext, r: int, n: int) -> "HSymbolSum":
        return cls(ctx, r, n)

    @classmethod
    def from_form(cls, w: DiffForm) -> "HSymbolSum":
        """f dx_I = (f x_I) dlog x_I, read as r = 1 symbols."""
        ctx = w.ctx
        terms = []
        for I, f in w.coeffs.items():
            xs = tuple(ctx.gen(ctx.variables[i]) for i in I)
            a = f
            for x in xs:
                a = a * x
            terms.append((1, WittVector(ctx, [a]), xs))
        return cls(ctx, 1, w.n, terms)

    # -- container protocol

    def items(self) -> list[Term]:
        return [(c, w, e) for (w, e), c in self.terms.items()]

    def is_empty(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, HSymbolSum):
            return NotImplemented
        return (self.ctx is other.ctx and self.r == other.r and self.n == other.n
                and self.terms == other.terms)

    def __hash__(self):
        return hash(str(self))

    def _check(self, other):
        if not isinstance(other, HSymbolSum):
            raise TypeError("expected an HSymbolSum")
        if other.ctx is not self.ctx:
            raise ContextMismatch("symbol sums over different fields")
        if other.r != self.r:
            raise LengthMismatch(f"Witt lengths {self.r} and {other.r}")
        if other.n != self.n:
            raise DegreeMismatch(f"cannot add sums of degrees {self.n} and {other.n}")

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        self._check(other)
        t = dict(self.terms)
        for k, c in other.terms.items():
            t[k] = t.get(k, 0) + c
        return HSymbolSum(self.ctx, self.r, self.n, t)

    __radd__ = __add__

    def __neg__(self):
        return HSymbolSum(self.ctx, self.r, self.n, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, k):
        if isinstance(k, int):
            return HSymbolSum(self.ctx, self.r, self.n, {t: c * k for t, c in self.terms.items()})
        if isinstance(k, KSymbolSum):
            return h_times_k(self, k)
        return NotImplemented

    __rmul__ = __mul__

    def to_context(self, ctx: FieldContext) -> "HSymbolSum":
        return HSymbolSum(ctx, self.r, self.n,
                          [(c, w.to_context(ctx), tuple(b.to_context(ctx) for b in e))
                           for c, w, e in self.items()])

    def subs(self, mapping, target: FieldContext | None = None) -> "HSymbolSum":
        """Pull back along the field map given by substituting variables."""
        target = target or self.ctx

        def f(a):
            return a.subs(mapping, target)
        return HSymbolSum(target, self.r, self.n,
                          [(c, WittVector(target, [f(a) for a in w]), tuple(f(b) for b in e))
                           for c, w, e in self.items()])

    def to_form(self) -> DiffForm:
        """sum c * w_1 dlog b_1 ^ ... ^ dlog b_n (only for r = 1)."""
        if self.r != 1:
            raise LengthMismatch("only length-1 sums are differential forms")
        total = DiffForm.zero(self.ctx, self.n)
        for c, w, e in self.items():
            total = total + form_dlog(w[0] * c, *e)
        return total

    def first_components(self) -> "HSymbolSum":
        """The truncation to r = 1."""
        return HSymbolSum(self.ctx, 1, self.n,
                          [(c, WittVector(self.ctx, [w[0]]), e) for c, w, e in self.items()])

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (w, e), c in sorted(self.terms.items(), key=_term_key):
            sym = "[" + ", ".join(str(a) for a in w) + " |" + (" " if e else "") \
                + ", ".join(str(b) for b in e) + "}"
            parts.append(sym if c == 1 else f"{c}*{sym}")
        return " + ".join(parts)

    def __repr__(self):
        return f"HSymbolSum({self})"

    def to_json(self):
        return {"length": self.r, "degree": self.n,
                "terms": [{"coefficient": c, "witt": [str(a) for a in w], "entries": [str(b) for b in e]}
                          for (w, e), c in sorted(self.terms.items(), key=_term_key)]}


def _term_key(kv):
    (w, e), _ = kv
    return ([str(b) for b in e], [str(a) for a in w])


def h_times_k(s: HSymbolSum, k: KSymbolSum) -> HSymbolSum:
    """[w | b} . {c} = [w | b, c}; the K-modulus must be a multiple of p^r."""
    if k.ctx is not s.ctx:
        raise ContextMismatch("product over different fields")
    mod = s.ctx.p ** s.r
    if k.m % mod:
        raise ContextMismatch(f"K-modulus {k.m} is not a multiple of {mod}")
    terms = []
    for c, w, e in s.items():
        for e2, c2 in k.terms.items():
            terms.append((c * c2, w, e + e2))
    return HSymbolSum(s.ctx, s.r, s.n + k.n, terms)


# -- Witt-level maps

def h_truncate_pi(s: HSymbolSum, k: int = 1) -> HSymbolSum:
    """Keep the first r - k Witt components (kernel: image of iota_k)."""
    if not 1 <= k < s.r:
        raise IndexOutOfRange(f"need 1 <= k < r, got k={k}, r={s.r}")
    return HSymbolSum(s.ctx, s.r - k, s.n,
                      [(c, WittVector(s.ctx, w.comps[: s.r - k]), e) for c, w, e in s.items()])


def h_shift_iota(s: HSymbolSum, k: int = 1) -> HSymbolSum:
    """Prepend k zero Witt components: H_{p^r} -> H_{p^(r+k)}."""
    if k < 1:
        raise IndexOutOfRange("shift must be at least 1")
    z = (s.ctx.zero(),) * k
    return HSymbolSum(s.ctx, s.r + k, s.n,
                      [(c, WittVector(s.ctx, z + w.comps), e) for c, w, e in s.items()])


def h_multiply_p(s: HSymbolSum) -> HSymbolSum:
    return HSymbolSum(s.ctx, s.r, s.n, [(c, witt_pmul(w), e) for c, w, e in s.items()])


def _leading_zeros(s: HSymbolSum) -> int:
    """Largest k < r with every Witt vector starting with k zeros."""
    k = 0
    while k < s.r - 1 and all(w[k].is_zero() for _, w, _ in s.items()):
        k += 1
    return k


def _unshift(s: HSymbolSum, k: int) -> HSymbolSum:
    return HSymbolSum(s.ctx, s.r - k, s.n,
                      [(c, WittVector(s.ctx, w.comps[k:]), e) for c, w, e in s.items()])


# -- normalization with a replayable log

@dataclass
class Step:
    """One relation instance: ``removed`` terms are replaced by ``added`` terms."""

    kind: str
    removed: list
    added: list
    data: dict = field(default_factory=dict)

    def to_json(self):
        def t(term):
            c, w, e = term
            return {"coefficient": c, "witt": [str(a) for a in w], "entries": [str(b) for b in e]}
        return {"kind": self.kind, "removed": [t(x) for x in self.removed],
                "added": [t(x) for x in self.added],
                "data": {k: str(v) for k, v in self.data.items()}}


def _sort_entries(e: Entries) -> tuple[int, Entries]:
    keyed = sorted(range(len(e)), key=lambda i: str(e[i]))
    # sign of the permutation
    sign, seen = 1, [False] * len(e)
    for i in range(len(e)):
        if seen[i]:
            continue
        j, cyc = i, 0
        while not seen[j]:
            seen[j] = True
            j = keyed[j]
            cyc += 1
        if cyc % 2 == 0:
            sign = -sign
    return sign, tuple(e[i] for i in keyed)


def _killing_relation(w: WittVector, e: Entries) -> tuple[str, dict] | None:
    """A relation that makes [w | e} vanish outright, if one applies literally."""
    for i, b in enumerate(e):
        if b.is_constant():
            return "constant-entry", {"slot": i}
    for i in range(len(e)):
        for j in range(i + 1, len(e)):
            if e[i] == e[j]:
                return "repeat", {"slots": (i, j)}
            if (e[i] + e[j]).is_one() or (e[i] + e[j]).is_zero():
                return "steinberg", {"slots": (i, j)}
    nz = [k for k, a in enumerate(w) if not a.is_zero()]
    if len(nz) == 1 and w[nz[0]] in e:
        return "diagonal", {"position": nz[0]}
    return None


def _pth_root_vector(w: WittVector) -> WittVector | None:
    roots = []
    for a in w:
        rt = a.pth_root()
        if rt is None:
            return None
        roots.append(rt)
    return WittVector(w.ctx, roots)


class _Log:
    def __init__(self):
        self.steps: list[Step] = []

    def add(self, kind, removed, added, **data):
        self.steps.append(Step(kind, list(removed), list(added), data))


def _pass_kill(terms: list[Term], log: _Log) -> list[Term]:
    out = []
    for c, w, e in terms:
        rel = _killing_relation(w, e)
        if rel is not None:
            log.add(rel[0], [(c, w, e)], [], **rel[1])
        else:
            out.append((c, w, e))
    return out


def _pass_expand(terms: list[Term], log: _Log) -> list[Term]:
    """Split entries into irreducible factors (constant factors drop)."""
    out = []
    for c, w, e in terms:
        todo = [(c, e)]
        for slot in range(len(e)):
            nxt = []
            for cc, ee in todo:
                const, facs = factor_entry(ee[slot])
                if len(facs) == 1 and facs[0][1] == 1 and const == 1:
                    nxt.append((cc, ee))
                    continue
                pieces = [(cc * k, ee[:slot] + (g,) + ee[slot + 1:]) for g, k in facs]
                log.add("expand", [(cc, w, ee)], [(k, w, x) for k, x in pieces],
                        slot=slot, constant=const, exponents={g: k for g, k in facs})
                nxt.extend(pieces)
            todo = nxt
        out.extend((cc, w, ee) for cc, ee in todo)
    return out


def _pass_sort(terms: list[Term], log: _Log) -> list[Term]:
    out = []
    for c, w, e in terms:
        sign, e2 = _sort_entries(e)
        if e2 != e:
            log.add("sort", [(c, w, e)], [(sign * c, w, e2)])
        out.append((sign * c, w, e2))
    return out


def _pass_merge(terms: list[Term], mod: int, log: _Log) -> list[Term]:
    groups: dict = {}
    for c, w, e in terms:
        groups.setdefault(e, []).append((c, w, e))
    out = []
    for e, grp in groups.items():
        if len(grp) == 1 and grp[0][0] % mod == 1:
            out.append(grp[0])
            continue
        total = None
        for c, w, _ in grp:
            piece = witt_scale(c % mod, w)
            total = piece if total is None else total + piece
        log.add("merge", grp, [(1, total, e)] if not total.is_zero() else [])
        if not total.is_zero():
            out.append((1, total, e))
    return out


def _pass_witt(terms: list[Term], log: _Log) -> list[Term]:
    """p-th roots and Artin-Schreier moves on the first component."""
    out = []
    for c, w, e in terms:
        while True:
            rt = _pth_root_vector(w)
            if rt is None or rt == w:
                break
            log.add("frobenius", [(c, w, e)], [(c, rt, e)])
            w = rt
        if not w[0].is_zero():
            g = solve_artin_schreier(w[0])
            if g is not None:
                tg = WittVector.teichmuller(g, w.r)
                w2 = w - (witt_frobenius(tg) - tg)
                log.add("as-move", [(c, w, e)], [(c, w2, e)] if not w2.is_zero() else [], g=g)
                w = w2
        if not w.is_zero():
            out.append((c, w, e))
    return out


def normalize_logged(s: HSymbolSum, expand: bool = True) -> tuple[HSymbolSum, list[Step]]:
    log = _Log()
    mod = s.ctx.p ** s.r
    terms = s.items()
    seen = None
    for _ in range(MAX_ROUNDS):
        terms = _pass_kill(terms, log)
        if expand:
            terms = _pass_expand(terms, log)
        terms = _pass_sort(terms, log)
        terms = _pass_kill(terms, log)
        terms = _pass_merge(terms, mod, log)
        terms = _pass_witt(terms, log)
        terms = _pass_kill(terms, log)
        key = str(HSymbolSum(s.ctx, s.r, s.n, terms))
        if key == seen:
            break
        seen = key
    return HSymbolSum(s.ctx, s.r, s.n, terms), log.steps


def h_normalize(s: HSymbolSum) -> HSymbolSum:
    """Canonical representative built from explicit relation instances."""
    return normalize_logged(s)[0]


# -- zero test

def _chain_verdict(s: HSymbolSum, depth: int = 0) -> V.Verdict:
    norm, steps = normalize_logged(s)
    chain: list = [("normalize", steps)]
    if norm.is_empty():
        return V.zero("relations reduce the sum to 0", kind="chain", chain=chain, final=None)
    if norm.r == 1:
        form = norm.to_form()
        sub = zero_test(form)
        if sub.is_zero:
            return V.zero(sub.reason, kind="chain", chain=chain, final=form,
                          eta=sub.certificate.get("eta"), zeta=sub.certificate.get("zeta"))
        if sub.is_nonzero:
            return V.nonzero(sub.reason, kind="form", chain=chain, form=form, sub=sub)
        return V.unknown(sub.reason, sub=sub)
    k = _leading_zeros(norm)
    if k:
        inner = _chain_verdict(_unshift(norm, k), depth + 1)
        cert = dict(inner.certificate)
        cert["chain"] = chain + [("iota", k)] + cert.get("chain", [])
        return V.Verdict(inner.status, inner.reason, cert)
    first = norm.first_components()
    sub = _chain_verdict(first, depth + 1)
    if sub.is_nonzero:
        return V.nonzero("truncation to r = 1 is nonzero", kind="truncation", chain=chain,
                         normal_form=norm, sub=sub)
    return V.unknown("first components vanish in H_p but no literal lift was found",
                     normal_form=str(norm), first=sub.status)


def h_is_zero(s: HSymbolSum) -> V.Verdict:
    return _chain_verdict(s)


def h_torsion_order_bound(s: HSymbolSum) -> int | None:
    """Smallest k with p^k * s = 0, or None if some smaller k is undecided.

    p^k s = 0 exactly when s lies in the image of iota_k, i.e. when its
    truncation to the first r - k components vanishes.
    """
    for k in range(s.r):
        v = h_is_zero(_first(s, s.r - k))
        if v.is_zero:
            return k
        if v.is_unknown:
            return None
    return s.r


def _first(s: HSymbolSum, length: int) -> HSymbolSum:
    if length == s.r:
        return s
    return HSymbolSum(s.ctx, length, s.n,
                      [(c, WittVector(s.ctx, w.comps[:length]), e) for c, w, e in s.items()])


# -- ramification at a divisor valuation

TAME = "Tame"
WILD = "Wild"
UNRAMIFIED = "Unramified"
RAMIFIED = "Ramified"


def _integral(s: HSymbolSum, v: DivisorValuation) -> bool:
    return all(a.is_zero() or rf_valuation(a, v) >= 0 for _, w, _ in s.items() for a in w)


def _parts(s: HSymbolSum) -> list[tuple[int, HSymbolSum]]:
    """Split s as a sum of iota_k(x_k), each x_k normalized separately.

    Terms are grouped by their number k of leading zero components before
    normalizing, so that merging Witt parts never mixes different k.
    """
    groups: dict[int, list] = {}
    for c, w, e in s.items():
        k = 0
        while w[k].is_zero():
            k += 1
        groups.setdefault(k, []).append((c, WittVector(s.ctx, w.comps[k:]), e))
    out: dict[int, HSymbolSum] = {}
    for k in sorted(groups):
        inner = h_normalize(HSymbolSum(s.ctx, s.r - k, s.n, groups[k]))
        if inner.is_empty():
            continue
        pieces = _parts(inner) if _leading_zeros(inner) else [(0, inner)]
        for k2, x in pieces:
            out[k + k2] = out[k + k2] + x if k + k2 in out else x
    return sorted(out.items(), key=lambda kv: kv[0])


def _reduce_for(s: HSymbolSum, v: DivisorValuation):
    """s = iota_k(inner) when all terms share the same shift; else (0, normal form)."""
    parts = _parts(s)
    if len(parts) == 1:
        return parts[0]
    return 0, h_normalize(s)


def _part_status(inner: HSymbolSum, v: DivisorValuation) -> V.Verdict:
    if _integral(inner, v):
        return V.Verdict(TAME, "Witt components are integral", {})
    place = place_of(v, inner.ctx)
    if inner.r == 1:
        la = local_analysis(inner.to_form(), place)
        if la.level:
            return V.Verdict(WILD, f"wild of level {la.level}", {"level": la.level, "graded": la.graded})
        return V.Verdict(TAME, "no wild polar part", {"eta": la.eta, "zeta": la.zeta})
    la = local_analysis(inner.first_components().to_form(), place)
    if la.level:
        return V.Verdict(WILD, "truncation to r = 1 is wild", {"level": la.level, "graded": la.graded})
    return V.Verdict(V.UNKNOWN, "truncation is tame but no integral representative was found", {})


def h_is_tame(s: HSymbolSum, v: DivisorValuation) -> V.Verdict:
    """Tame / Wild / Unknown, deciding each iota-group separately.

    A sum of tame groups is tame, and tame plus one wild group is wild.
    """
    parts = [(k, inner, _part_status(inner, v)) for k, inner in _parts(s)]
    bad = [(k, st) for k, _, st in parts if st.status != TAME]
    if not bad:
        return V.Verdict(TAME, "every group is tame", {"groups": [k for k, _, _ in parts]})
    if len(bad) == 1 and bad[0][1].status == WILD:
        k, st = bad[0]
        return V.Verdict(WILD, st.reason, dict(st.certificate, shift=k))
    if parts[0][0] == 0 and parts[0][2].status == WILD and parts[0][1].r == s.r:
        # the unshifted group controls the truncation to r = 1
        la = local_analysis(parts[0][1].first_components().to_form(), place_of(v, s.ctx))
        if la.level:
            return V.Verdict(WILD, "truncation to r = 1 is wild", {"shift": 0, "level": la.level})
    return V.Verdict(V.UNKNOWN, "several groups fail to be tame", {})


def h_is_wild(s: HSymbolSum, v: DivisorValuation) -> bool | None:
    """True / False / None (undecided)."""
    t = h_is_tame(s, v)
    return {WILD: True, TAME: False}.get(t.status)


def _residue_integral(s: HSymbolSum, v: DivisorValuation) -> HSymbolSum:
    """Symbol formula: [w | pi, u_2, ...} -> [w-bar | u_2-bar, ...} for integral w."""
    res = v.residue_context(s.ctx)
    out = []
    for c, w, e in s.items():
        wbar = WittVector(res, [rf_reduce(a, v) for a in w])
        if wbar.is_zero():
            continue
        split = [split_uniformizer(b, v) for b in e]
        # expand multilinearly; a choice with pi in two slots carries
        # {pi, pi} = {pi, -1}, a constant entry, and vanishes
        for i, (k, _) in enumerate(split):
            if not k:
                continue
            rest = tuple(rf_reduce(u, v) for j, (_, u) in enumerate(split) if j != i)
            sign = -1 if i % 2 else 1
            out.append((sign * k * c, wbar, rest))
    return HSymbolSum(res, s.r, s.n - 1, out)


def _residue_part(inner: HSymbolSum, v: DivisorValuation, status: V.Verdict) -> HSymbolSum:
    if _integral(inner, v):
        return _residue_integral(inner, v)
    place = place_of(v, inner.ctx)
    form = inner.to_form()
    w1 = form - as_correction(status.certificate["eta"], status.certificate["zeta"])
    return HSymbolSum.from_form(residue_form(w1, place))


def h_residue(s: HSymbolSum, v: DivisorValuation) -> HSymbolSum:
    """Tame residue at v, of degree n - 1 over the residue field."""
    if s.n == 0:
        raise IndexOutOfRange("residue needs at least one entry")
    res = v.residue_context(s.ctx)
    total = HSymbolSum(res, s.r, s.n - 1)
    parts = _parts(s)
    statuses = [_part_status(inner, v) for _, inner in parts]
    if any(st.status != TAME for st in statuses):
        t = h_is_tame(s, v)
        if t.status == WILD:
            raise WildInput(f"class is wild at {v}: {t.reason}")
        raise UnsupportedInput("cannot find an integral representative for this length")
    for (k, inner), st in zip(parts, statuses):
        out = _residue_part(inner, v, st)
        total = total + (h_shift_iota(out, k) if k else out)
    return h_normalize(total)


def h_constant_lift(c: HSymbolSum, v: DivisorValuation, ctx: FieldContext) -> HSymbolSum:
    """Embed a class over the residue field back into F (constants stay constants)."""
    if c.ctx is not v.residue_context(ctx):
        raise ContextMismatch("class does not live over the residue field of v")
    return c.to_context(ctx)


def h_is_unramified(s: HSymbolSum, v: DivisorValuation) -> V.Verdict:
    t = h_is_tame(s, v)
    if t.status == WILD:
        return V.Verdict(RAMIFIED, "wild", {"tame": t})
    if t.status != TAME:
        return V.Verdict(V.UNKNOWN, t.reason, {"tame": t})
    if s.n == 0:
        return V.Verdict(UNRAMIFIED, "tame classes of degree 1 are unramified", {"tame": t})
    res = h_residue(s, v)
    z = h_is_zero(res)
    if z.is_zero:
        return V.Verdict(UNRAMIFIED, "tame with zero residue", {"residue": res, "zero": z})
    if z.is_nonzero:
        return V.Verdict(RAMIFIED, "nonzero tame residue", {"residue": res, "nonzero": z})
    return V.Verdict(V.UNKNOWN, "residue undecided", {"residue": res})


def h_filtration(s: HSymbolSum, v: DivisorValuation) -> FiltrationReport:
    """Level of the polar part at v.

    Tame groups contribute level 0; for a single non-tame group iota_k(x)
    with x of length 1 the level of x is reported.
    """
    parts = [(k, inner, _part_status(inner, v)) for k, inner in _parts(s)]
    bad = [(k, inner) for k, inner, st in parts if st.status != TAME]
    if not bad:
        return FiltrationReport(str(v), 0, None, False)
    if len(bad) != 1 or bad[0][1].r != 1:
        raise UnsupportedInput("filtration for r > 1 needs tame or iota-shifted length-1 groups")
    rep = filtration(bad[0][1].to_form(), place_of(v, s.ctx))
    rep.valuation = str(v)
    return rep


@dataclass
class HSimpleForm:
    """s = sum_i t^-i (phi_i + dlog t ^ phi'_i) + tame remainder, shifted by iota_k."""

    valuation: str
    shift: int
    terms: list  # (i, phi_i, phi'_i) residue-field forms
    remainder: HSymbolSum
    place: Place
    ctx: FieldContext

    def polar_form(self) -> DiffForm:
        u = self.place.uniformizer(self.ctx)
        dlogu = form_dlog(self.ctx.one(), u)
        n = self.remainder.n
        total = DiffForm.zero(self.ctx, n)
        for m, phi, phi2 in self.terms:
            piece = phi.to_context(self.ctx)
            if phi2 is not None:
                piece = piece + dlogu.wedge(phi2.to_context(self.ctx))
            total = total + piece.scale(u ** (-m))
        return total

    def recompose(self) -> HSymbolSum:
        polar = HSymbolSum.from_form(self.polar_form())
        total = polar + self.remainder
        return h_shift_iota(total, self.shift) if self.shift else total

    def to_json(self):
        return {"valuation": self.valuation, "shift": self.shift,
                "terms": [{"level": m, "phi": str(a), "phi_prime": None if b is None else str(b)}
                          for m, a, b in self.terms],
                "remainder": str(self.remainder)}


def h_simple_form(s: HSymbolSum, v: DivisorValuation) -> HSimpleForm:
    k, inner = _reduce_for(s, v)
    if inner.r != 1 and not (inner.is_empty() or _integral(inner, v)):
        raise UnsupportedInput("simple form for r > 1 needs an integral or iota-shifted class")
    place = place_of(v, s.ctx)
    if inner.is_empty() or inner.r != 1:
        return HSimpleForm(str(v), k, [], inner, place, s.ctx)
    sf = simple_form(inner.to_form(), place)
    return HSimpleForm(str(v), k, sf.terms, HSymbolSum.from_form(sf.remainder), place, s.ctx)
