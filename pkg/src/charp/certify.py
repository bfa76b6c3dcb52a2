"""Re-check verdict certificates without re-running the deciding procedure.

The checker recomputes what a certificate claims from first principles:

* Zero (forms): omega == d(eta) + Phi(zeta) - zeta.
* Zero (symbols): the logged relation chain is replayed one instance at a
  time, each instance validated on its own, ending in the empty sum or in
  a form with a replayable witness.
* wild: the pole order and the top graded piece are read off with
  valuations (no series expansion), after subtracting the recorded
  corrections, and the graded class is tested for nonvanishing.
* residue / specialization: the corrected form is checked to be regular
  at the place and its residue (or constant part) compared, recursively.
* as-obstruction: the Artin-Schreier equation is re-solved with the
  variables in reverse order.
"""

from __future__ import annotations

from . import verdict as V
from .field import FieldContext, RatFunc, solve_artin_schreier
from .forms import DiffForm, form_d, form_dlog, inverse_cartier
from .polar import Place, polar_levels_by_valuation, pull
from .witt import WittVector, witt_frobenius, witt_scale


class CertificateError(AssertionError):
    pass


def _require(cond, what):
    if not cond:
        raise CertificateError(what)


def _replay(eta, zeta) -> DiffForm:
    out = inverse_cartier(zeta) - zeta
    if eta is not None:
        out = out + form_d(eta)
    return out


def _same(a: DiffForm, b: DiffForm) -> bool:
    """Equality after moving both to the union of their variables."""
    names = list(a.ctx.variables) + [x for x in b.ctx.variables if x not in a.ctx.variables]
    ctx = FieldContext(a.ctx.p, names)
    return a.to_context(ctx) == b.to_context(ctx)


# -- r = 1 form verdicts

def check_form(w: DiffForm, v: V.Verdict) -> bool:
    """True if the certificate proves the verdict for w; raise CertificateError otherwise."""
    cert = v.certificate
    if v.is_unknown:
        return True
    if v.is_zero:
        _require("zeta" in cert, "zero certificate without a witness")
        _require(_same(w, _replay(cert.get("eta"), cert["zeta"])), "witness does not replay")
        return True
    kind = cert.get("kind")
    if kind == "base":
        _require(w.n == 0 and not w.used_variables(), "base certificate for a non-constant")
        val = w.coeffs.get((), None)
        _require(val is not None and not val.is_zero(), "constant is zero")
        return True
    if kind == "as-obstruction":
        _require(w.n == 0, "Artin-Schreier certificate in positive degree")
        f = w.coeffs[()]
        _require(_same(w, cert["form"]), "certificate is about another function")
        rev = FieldContext(w.ctx.p, list(reversed(w.ctx.variables)))
        _require(solve_artin_schreier(f.to_context(rev)) is None,
                 "reversed-order solver finds a solution")
        return True
    form = cert["form"]
    _require(_same(w, form), "certificate is about another form")
    ctx = form.ctx
    if kind == "wild":
        return _check_wild(form, cert)
    if kind == "residue":
        pl: Place = cert["place"]
        w1 = form - _replay(cert["eta"], cert["zeta"])
        beta = _tame_residue(w1, pl)
        _require(beta == cert["beta"], "residue does not match")
        return check_form(beta, cert["sub"]) and cert["sub"].is_nonzero
    if kind == "specialization":
        t = cert["variable"]
        w2 = form - _replay(cert["eta"], cert["zeta"])
        for pl, beta, sub in cert["residues"]:
            _require(sub.is_zero and check_form(beta, sub), "a residue is not certified zero")
            w2 = w2 - form_dlog(ctx.one(), pl.uniformizer(ctx)).wedge(beta.to_context(ctx))
        _require(t not in w2.used_variables(), "remainder depends on the tower variable")
        a0 = cert["constant"]
        _require(_same(w2, a0), "constant part does not match")
        return check_form(a0, cert["sub"]) and cert["sub"].is_nonzero
    raise CertificateError(f"unknown certificate kind {kind!r}")


def _local(w: DiffForm, pl: Place):
    ctx = w.ctx
    return pull(w, pl.to_local(ctx)), ctx.drop(pl.var)


def _check_wild(form: DiffForm, cert) -> bool:
    pl: Place = cert["place"]
    m = cert["level"]
    p = form.ctx.p
    w1 = form - _replay(cert["eta_above"], cert["zeta_above"])
    loc, kctx = _local(w1, pl)
    order, phi, phi2 = polar_levels_by_valuation(loc, pl.var, kctx, m)
    _require(order == m and m > 0, f"pole order {order}, expected {m}")
    if m % p:
        gamma = phi
        if phi2 is not None and not phi2.is_zero():
            gamma = phi + form_d(phi2).scale(pow(m % p, -1, p))
        _require(not gamma.is_zero(), "graded piece vanishes")
    else:
        closed = form_d(phi).is_zero() and (phi2 is None or form_d(phi2).is_zero())
        _require(not closed, "graded piece is closed")
    return True


def _tame_residue(w: DiffForm, pl: Place) -> DiffForm:
    loc, kctx = _local(w, pl)
    order, _, phi2 = polar_levels_by_valuation(loc, pl.var, kctx, 0)
    _require(order == 0, "corrected form still has a pole at the place")
    return phi2


# -- symbol verdicts

def _witt_equal_sum(parts, total: WittVector | None, mod: int) -> bool:
    acc = None
    for c, w, _ in parts:
        piece = witt_scale(c % mod, w)
        acc = piece if acc is None else acc + piece
    if total is None:
        return acc is None or acc.is_zero()
    return acc == total


def _perm_sign(src, dst) -> int:
    keys = [str(b) for b in src]
    target = [str(b) for b in dst]
    _require(sorted(keys) == sorted(target) and len(set(keys)) == len(keys), "not a permutation")
    perm = [keys.index(k) for k in target]
    sign = 1
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


def _check_step(step, mod: int):
    kind, rem, add = step.kind, step.removed, step.added
    if kind in ("constant-entry", "repeat", "steinberg", "diagonal"):
        _require(len(rem) == 1 and not add, f"{kind}: malformed")
        _, w, e = rem[0]
        if kind == "constant-entry":
            _require(any(b.is_constant() for b in e), "no constant entry")
        elif kind == "repeat":
            _require(len({str(b) for b in e}) < len(e), "no repeated entry")
        elif kind == "steinberg":
            ok = any((e[i] + e[j]).is_one() or (e[i] + e[j]).is_zero()
                     for i in range(len(e)) for j in range(i + 1, len(e)))
            _require(ok, "no Steinberg pair")
        else:
            nz = [a for a in w if not a.is_zero()]
            _require(len(nz) == 1 and nz[0] in e, "not a diagonal symbol")
        return
    if kind == "expand":
        (c, w, e), = rem
        slot = step.data["slot"]
        prod = e[0].ctx.const(step.data["constant"])
        for c2, w2, e2 in add:
            _require(w2 == w and e2[:slot] + e2[slot + 1:] == e[:slot] + e[slot + 1:], "expand: other slots moved")
            k = step.data["exponents"][e2[slot]]
            _require((c * k - c2) % mod == 0, "expand: coefficient")
            prod = prod * e2[slot] ** k
        _require(prod == e[slot], "expand: factors do not multiply back")
        return
    if kind == "sort":
        (c, w, e), = rem
        (c2, w2, e2), = add
        _require(w2 == w and (c2 - _perm_sign(e, e2) * c) % mod == 0, "sort: sign")
        return
    if kind == "merge":
        es = {tuple(str(b) for b in e) for _, _, e in rem}
        _require(len(es) == 1, "merge across different entries")
        if add:
            (c2, total, e2), = add
            _require(c2 == 1 and tuple(str(b) for b in e2) in es, "merge: entries")
            _require(_witt_equal_sum(rem, total, mod), "merge: Witt sum")
        else:
            _require(_witt_equal_sum(rem, None, mod), "merge: sum is not zero")
        return
    if kind == "frobenius":
        (c, w, e), = rem
        (c2, w2, e2), = add
        _require(c == c2 and e == e2 and witt_frobenius(w2) == w, "frobenius: not a p-th power")
        return
    if kind == "as-move":
        (c, w, e), = rem
        g = step.data["g"]
        tg = WittVector.teichmuller(g, w.r)
        expected = w - (witt_frobenius(tg) - tg)
        if add:
            (c2, w2, e2), = add
            _require(c == c2 and e == e2 and w2 == expected, "as-move: wrong vector")
        else:
            _require(expected.is_zero(), "as-move: remainder is not zero")
        return
    raise CertificateError(f"unknown step {kind!r}")


def replay_chain(s, chain):
    """Apply a logged chain to the terms of s; return (ctx, r, n, multiset)."""
    ctx, r, n = s.ctx, s.r, s.n
    p = ctx.p
    cur = {k: c for k, c in s.terms.items()}
    for entry in chain:
        if entry[0] == "iota":
            k = entry[1]
            _require(all(w[i].is_zero() for (w, _), c in cur.items() if c % p ** r for i in range(k)),
                     "iota: leading components are not zero")
            r -= k
            nxt: dict = {}
            for (w, e), c in cur.items():
                if c % p ** (r + k):
                    key = (WittVector(ctx, w.comps[k:]), e)
                    nxt[key] = nxt.get(key, 0) + c
            cur = nxt
            continue
        mod = p ** r
        for step in entry[1]:
            _check_step(step, mod)
            for c, w, e in step.removed:
                cur[(w, e)] = cur.get((w, e), 0) - c
            for c, w, e in step.added:
                cur[(w, e)] = cur.get((w, e), 0) + c
            cur = {k: c for k, c in cur.items() if c % mod}
    mod = p ** r
    return ctx, r, n, {k: c % mod for k, c in cur.items() if c % mod and not k[0].is_zero()}


def _as_form(ctx, n, terms) -> DiffForm:
    total = DiffForm.zero(ctx, n)
    for (w, e), c in terms.items():
        total = total + form_dlog(w[0] * c, *e)
    return total


def check_hsym(s, v: V.Verdict) -> bool:
    from .hsym import HSymbolSum

    if v.is_unknown:
        return True
    cert = v.certificate
    ctx, r, n, terms = replay_chain(s, cert.get("chain", []))
    kind = cert.get("kind")
    if v.is_zero:
        if cert.get("final") is None:
            _require(not terms, "chain does not end in the empty sum")
            return True
        _require(r == 1, "final form for a sum of length > 1")
        form = _as_form(ctx, n, terms)
        _require(form == cert["final"], "final form does not match the chain")
        _require(form == _replay(cert.get("eta"), cert["zeta"]), "witness does not replay")
        return True
    if kind == "form":
        _require(r == 1, "form certificate for length > 1")
        form = _as_form(ctx, n, terms)
        _require(form == cert["form"], "form does not match the chain")
        return check_form(form, cert["sub"])
    if kind == "truncation":
        first = HSymbolSum(ctx, 1, n, [(c, WittVector(ctx, [w[0]]), e) for (w, e), c in terms.items()])
        sub = cert["sub"]
        _require(sub.is_nonzero, "truncation not certified nonzero")
        return check_hsym(first, sub)
    raise CertificateError(f"unknown certificate kind {kind!r}")


# -- Milnor K-symbol verdicts

def check_ksym(s, v: V.Verdict) -> bool:
    """Re-check a k_is_zero certificate by recomputing each claimed quantity."""
    from math import gcd

    from .field import DivisorValuation
    from .milnor import KSymbolSum, _v_p, k_dlog, k_normalize, k_residue, k_specialize_pi

    if v.is_unknown:
        return True
    cert = v.certificate
    kind = cert.get("kind")
    norm = k_normalize(s)
    _require(norm == cert.get("normal_form"), "normal form does not match")
    p, m = s.ctx.p, s.m
    if kind == "empty":
        _require(v.is_zero and norm.is_empty(), "sum does not normalize to zero")
        return True
    if kind in ("divisible", "dlog"):
        r = 0
        mm = m
        while mm % p == 0:
            mm //= p
            r += 1
        _require(mm == 1, "p-power certificate for another modulus")
        s0 = min(_v_p(c, p) for c in norm.terms.values())
        if kind == "divisible":
            _require(v.is_zero and s0 >= r, "coefficients are not divisible by the modulus")
            return True
        reduced = KSymbolSum(norm.ctx, p, norm.n, {e: (c // p ** s0) % p for e, c in norm.terms.items()})
        form = k_dlog(reduced)
        if v.is_zero:
            _require(r == 1 and form.is_zero(), "dlog does not vanish")
        else:
            _require(not form.is_zero() and form == cert["dlog"], "dlog vanishes")
        return True
    _require(gcd(m, p) == 1, "residue certificate for a p-power modulus")
    if kind == "base":
        _require(not any(b.used_variables() for e in norm.terms for b in e), "not over the prime field")
        if v.is_zero:
            _require(norm.n >= 2, "K^0 and K^1 of the prime field are not zero")
        else:
            _require(norm.n < 2 and not norm.is_empty(), "prime-field class is zero")
        return True
    if kind == "residue":
        pl = cert["place"]
        res = k_residue(norm, pl)
        _require(res == cert["residue"], "residue does not match")
        _require(v.is_nonzero and cert["sub"].is_nonzero, "residue not certified nonzero")
        return check_ksym(res, cert["sub"])
    t = cert["variable"]
    const = k_specialize_pi(norm, DivisorValuation(t, None))
    _require(const == cert["constant"], "constant part does not match")
    if kind == "constant":
        _require(v.is_nonzero and cert["sub"].is_nonzero, "constant part not certified nonzero")
        return check_ksym(const, cert["sub"])
    if kind == "split":
        centers = set()
        for pl, res, sub in cert["residues"]:
            _require(k_residue(norm, pl) == res and sub.is_zero, "a residue is not certified zero")
            check_ksym(res, sub)
            centers.add(pl.center)
        gen = s.ctx.gen(t)
        for e in norm.terms:
            for b in e:
                if t in b.used_variables():
                    _require(b.degrees_in(t) == (1, 0) and len(b.used_variables()) == 1
                             and (gen - b).constant_value() in centers, "an entry's place was skipped")
        _require(cert["sub"].is_zero, "constant part not certified zero")
        return check_ksym(const, cert["sub"])
    raise CertificateError(f"unknown certificate kind {kind!r}")


def check(obj, v: V.Verdict) -> bool:
    from .hsym import HSymbolSum

    from .milnor import KSymbolSum

    if isinstance(obj, KSymbolSum):
        return check_ksym(obj, v)
    if isinstance(obj, HSymbolSum):
        return check_hsym(obj, v)
    if isinstance(obj, DiffForm):
        return check_form(obj, v)
    if isinstance(obj, RatFunc):
        return check_form(DiffForm.function(obj), v)
    raise TypeError(f"cannot check a certificate for {type(obj).__name__}")
