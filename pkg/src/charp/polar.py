"""Mod-p classes as differential forms: local polar reduction and zero test.

For r = 1 the symbol [a | b_1, ..., b_n} is the form a dlog b_1 ^ ... ^ dlog b_n
and H^{n+1}_p(F) is Omega^n modulo  d(Omega^{n-1}) + (Phi - 1)(Omega^n).
Every Zero answer comes with forms (eta, zeta) such that

    omega = d(eta) + Phi(zeta) - zeta

which anyone can replay.  NonZero answers cite a wild graded class, a
nonzero residue, or a nonzero constant part, each re-checkable in
``charp.certify``.

Places are rational: t = c with c in the constant field k (all variables
except t), or t = infinity.  A place is moved to t = 0 by pulling back
along t -> t + c or t -> 1/t; there a form is written as
A + dlog t ^ B with A, B free of dt, and the polar part is
sum_{m>=1} t^-m (phi_m + dlog t ^ phi'_m) with phi_m, phi'_m forms over k.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import verdict as V
from .errors import InternalLimit
from .field import (
    DivisorValuation,
    FieldContext,
    RatFunc,
    rf_laurent,
    rf_reduce,
    rf_valuation,
    solve_artin_schreier,
)
from .forms import (
    DiffForm, cartier, form_d, form_dlog, form_pullback, inverse_cartier, is_closed, split_exact,
)

MAX_DEPTH = 64


# -- places and charts

@dataclass(frozen=True)
class Place:
    """t = center (center a function of the other variables) or t = infinity."""

    var: str
    center: RatFunc | None  # None means infinity; lives in the ambient context

    def __str__(self):
        return f"inf({self.var})" if self.center is None else f"{self.var}={self.center}"

    def to_local(self, ctx: FieldContext) -> dict:
        t = ctx.gen(self.var)
        if self.center is None:
            return {self.var: t.inverse()}
        if self.center.is_zero():
            return {}
        return {self.var: t + self.center.to_context(ctx)}

    def from_local(self, ctx: FieldContext) -> dict:
        t = ctx.gen(self.var)
        if self.center is None:
            return {self.var: t.inverse()}
        if self.center.is_zero():
            return {}
        return {self.var: t - self.center.to_context(ctx)}

    def uniformizer(self, ctx: FieldContext) -> RatFunc:
        t = ctx.gen(self.var)
        if self.center is None:
            return t.inverse()
        return t - self.center.to_context(ctx)

    def to_json(self):
        return {"variable": self.var, "center": None if self.center is None else str(self.center)}


def place_of(v: DivisorValuation, ctx: FieldContext) -> Place:
    if v.center is None:
        return Place(v.var, None)
    return Place(v.var, ctx.const(v.center))


def pull(w: DiffForm, mapping: dict) -> DiffForm:
    if not mapping:
        return w
    return form_pullback(w, mapping)


# -- splitting a local form

def _sub_index(ctx: FieldContext, kctx: FieldContext, I) -> tuple:
    return tuple(kctx.index(ctx.variables[i]) for i in I)


def split_dt(w: DiffForm, t: str, kctx: FieldContext):
    """Write w = A + dlog t ^ B.  Return (A, B) as {J: coeff} over k-indices."""
    ctx = w.ctx
    it = ctx.index(t)
    u = ctx.gen(t)
    A, B = {}, {}
    for I, c in w.coeffs.items():
        if it in I:
            pos = I.index(it)
            J = _sub_index(ctx, kctx, I[:pos] + I[pos + 1:])
            val = c * u
            B[J] = -val if pos % 2 else val
        else:
            A[_sub_index(ctx, kctx, I)] = c
    return A, B


def polar_levels(w: DiffForm, t: str, kctx: FieldContext) -> dict[int, list]:
    """{m: [phi_m, phi'_m]} for the polar part at t = 0 (forms over k)."""
    A, B = split_dt(w, t, kctx)
    n = w.n
    levels: dict[int, list] = {}

    def put(m, slot, J, c):
        if m not in levels:
            levels[m] = [DiffForm.zero(kctx, n), DiffForm.zero(kctx, n - 1) if n else None]
        levels[m][slot] = levels[m][slot] + DiffForm(kctx, len(J), {J: c.to_context(kctx)})

    for slot, part in ((0, A), (1, B)):
        for J, c in part.items():
            v, coeffs = rf_laurent(c, t, 0)
            if v is None:
                continue
            for j, cj in enumerate(coeffs):
                if not cj.is_zero():
                    put(-(v + j), slot, J, cj)
    return {m: lv for m, lv in levels.items() if not (lv[0].is_zero() and (lv[1] is None or lv[1].is_zero()))}


def polar_levels_by_valuation(w: DiffForm, t: str, kctx: FieldContext, m: int):
    """Pole order and level-m coefficients read off with valuations only.

    Returns (max pole order, phi_m, phi'_m); the certificate checker uses
    this instead of the series expansion.
    """
    A, B = split_dt(w, t, kctx)
    v0 = DivisorValuation(t, 0)
    u = w.ctx.gen(t)
    order = 0
    phi = DiffForm.zero(kctx, w.n)
    phi2 = DiffForm.zero(kctx, w.n - 1) if w.n else None
    for slot, part in ((0, A), (1, B)):
        for J, c in part.items():
            val = rf_valuation(c, v0)
            order = max(order, -val)
            if val != -m:
                continue
            piece = DiffForm(kctx, len(J), {J: rf_reduce(c * u ** m, v0).to_context(kctx)})
            if slot == 0:
                phi = phi + piece
            else:
                phi2 = phi2 + piece
    return order, phi, phi2


# -- reduction of a polar part

@dataclass
class PolarReduction:
    """Outcome of the top-down reduction of one polar part (local coordinates)."""

    eta: DiffForm | None  # degree n-1, None when n = 0
    zeta: DiffForm
    terms: list = field(default_factory=list)  # (m, phi, phi') surviving classes
    wild_level: int = 0
    wild_class: tuple | None = None
    eta_above: DiffForm | None = None  # corrections applied above the wild level
    zeta_above: DiffForm | None = None


def _inv(m: int, p: int) -> int:
    return pow(m % p, -1, p)


def _lift(form: DiffForm | None, ctx: FieldContext):
    return None if form is None else form.to_context(ctx)


def reduce_polar(levels: dict, ctx: FieldContext, t: str, n: int, stop_at_wild: bool) -> PolarReduction:
    p = ctx.p
    u = ctx.gen(t)
    dlogu = form_dlog(ctx.one(), u)
    eta = DiffForm.zero(ctx, n - 1) if n else None
    zeta = DiffForm.zero(ctx, n)
    red = PolarReduction(eta, zeta)
    levels = {m: list(v) for m, v in levels.items()}
    guard = 0
    while levels:
        guard += 1
        if guard > 10_000:
            raise InternalLimit("polar reduction did not terminate")
        m = max(levels)
        phi, phi2 = levels.pop(m)
        if phi.is_zero() and (phi2 is None or phi2.is_zero()):
            continue
        um = u ** (-m)
        if m % p:
            gamma = phi
            if phi2 is not None and not phi2.is_zero():
                gamma = phi + form_d(phi2).scale(_inv(m, p))
                red.eta = red.eta + _lift(phi2, ctx).scale(um * (-_inv(m, p)))
            if not gamma.is_zero():
                if not red.wild_level:
                    red.wild_level, red.wild_class = m, (gamma, None)
                    red.eta_above, red.zeta_above = red.eta, red.zeta
                red.terms.append((m, gamma, None))
                if stop_at_wild:
                    return red
            continue
        closed = form_d(phi).is_zero() and (phi2 is None or form_d(phi2).is_zero())
        if not closed:
            if not red.wild_level:
                red.wild_level, red.wild_class = m, (phi, phi2)
                red.eta_above, red.zeta_above = red.eta, red.zeta
            red.terms.append((m, phi, phi2))
            if stop_at_wild:
                return red
            continue
        um_p = u ** (-(m // p))
        if n == 0:
            psi = cartier(phi)
            psi2 = None
        else:
            psi, xi = split_exact(phi)
            red.eta = red.eta + _lift(xi, ctx).scale(um)
            psi2 = None
            if phi2 is not None:
                if phi2.n == 0:
                    psi2 = cartier(phi2)
                else:
                    psi2, xi2 = split_exact(phi2)
                    red.eta = red.eta - dlogu.wedge(_lift(xi2, ctx)).scale(um)
        z = _lift(psi, ctx)
        if psi2 is not None:
            z = z + dlogu.wedge(_lift(psi2, ctx))
        red.zeta = red.zeta + z.scale(um_p)
        k = m // p
        if k in levels:
            levels[k][0] = levels[k][0] + psi
            if psi2 is not None:
                levels[k][1] = levels[k][1] + psi2
        else:
            levels[k] = [psi, psi2]
    return red


def as_correction(eta: DiffForm | None, zeta: DiffForm) -> DiffForm:
    """d(eta) + Phi(zeta) - zeta."""
    out = inverse_cartier(zeta) - zeta
    if eta is not None:
        out = out + form_d(eta)
    return out


# -- local analysis at a single place

@dataclass
class LocalAnalysis:
    place: Place
    level: int
    graded: tuple | None
    reduction: PolarReduction
    eta: DiffForm | None  # global coordinates
    zeta: DiffForm


def local_analysis(w: DiffForm, place: Place, stop_at_wild: bool = True) -> LocalAnalysis:
    ctx = w.ctx
    kctx = ctx.drop(place.var)
    loc = pull(w, place.to_local(ctx))
    levels = polar_levels(loc, place.var, kctx)
    red = reduce_polar(levels, ctx, place.var, w.n, stop_at_wild)
    back = place.from_local(ctx)
    eta = pull(red.eta, back) if red.eta is not None else None
    zeta = pull(red.zeta, back)
    return LocalAnalysis(place, red.wild_level, red.wild_class, red, eta, zeta)


def residue_form(w: DiffForm, place: Place) -> DiffForm:
    """B reduced at the place, for a form with no polar part there."""
    ctx = w.ctx
    kctx = ctx.drop(place.var)
    loc = pull(w, place.to_local(ctx))
    _, B = split_dt(loc, place.var, kctx)
    v0 = DivisorValuation(place.var, 0)
    out = DiffForm.zero(kctx, w.n - 1)
    for J, c in B.items():
        out = out + DiffForm(kctx, len(J), {J: rf_reduce(c, v0).to_context(kctx)})
    return out


def unit_part(w: DiffForm, place: Place) -> DiffForm:
    """A reduced at the place (the specialization of a tame representative)."""
    ctx = w.ctx
    kctx = ctx.drop(place.var)
    loc = pull(w, place.to_local(ctx))
    A, _ = split_dt(loc, place.var, kctx)
    v0 = DivisorValuation(place.var, 0)
    out = DiffForm.zero(kctx, w.n)
    for J, c in A.items():
        out = out + DiffForm(kctx, len(J), {J: rf_reduce(c, v0).to_context(kctx)})
    return out


# -- global zero test

def restrict(w: DiffForm) -> DiffForm:
    used = w.used_variables()
    sub = FieldContext(w.ctx.p, [v for v in w.ctx.variables if v in used])
    return w.to_context(sub)


def _linear_centers(w: DiffForm, t: str) -> list[RatFunc] | None:
    """Centers c in k of all denominator factors, or None if some factor is not linear in t."""
    ctx = w.ctx
    it = ctx.index(t)
    centers: dict[str, RatFunc] = {}
    for c in w.coeffs.values():
        if c.den.is_constant():
            continue
        _, facs = c.den.factor()
        for g, _e in facs:
            d = int(g.degrees()[it])
            if d == 0:
                continue
            if d > 1:
                return None
            coeffs = {}
            for e, a in zip(g.monoms(), g.coeffs()):
                k = int(e[it])
                e2 = list(int(x) for x in e)
                e2[it] = 0
                coeffs.setdefault(k, {})[tuple(e2)] = int(a)
            a1 = RatFunc(ctx, ctx.poly_ctx.from_dict(coeffs[1]))
            a0 = RatFunc(ctx, ctx.poly_ctx.from_dict(coeffs.get(0, {})))
            center = -a0 / a1
            centers[str(center)] = center
    return [centers[k] for k in sorted(centers)]


def choose_variable(w: DiffForm):
    for t in reversed(w.ctx.variables):
        cs = _linear_centers(w, t)
        if cs is not None:
            return t, cs
    return None, None


def zero_test(w: DiffForm, depth: int = 0) -> V.Verdict:
    """Decide whether a form is zero in Omega^n / (d Omega^{n-1} + (Phi-1) Omega^n)."""
    if depth > MAX_DEPTH:
        raise InternalLimit("zero test recursion too deep")
    orig_ctx = w.ctx
    n = w.n
    if w.is_zero():
        return V.zero("zero form", eta=DiffForm.zero(orig_ctx, n - 1) if n else None,
                      zeta=DiffForm.zero(orig_ctx, n))
    w = restrict(w)
    ctx = w.ctx
    if n == 0:
        return _lift_verdict(_h1_test(w.coeffs[()]), orig_ctx)
    closed = is_closed(w)
    if closed:
        # w = Phi(C w) + d(xi), so w and C(w) have the same class
        psi, xi = split_exact(w)
        if psi.is_zero():
            return _lift_verdict(V.zero("exact form", eta=xi, zeta=DiffForm.zero(ctx, n)), orig_ctx)
    t, centers = choose_variable(w)
    if t is None:
        if closed and psi != w:
            sub = zero_test(psi, depth + 1)
            if sub.is_zero:
                se, sz = sub.certificate["eta"], sub.certificate["zeta"]
                eta = xi + (se.to_context(ctx) if se is not None else DiffForm.zero(ctx, n - 1))
                zeta = psi + sz.to_context(ctx)
                return _lift_verdict(V.zero("Cartier reduction", eta=eta, zeta=zeta), orig_ctx)
        return V.unknown("a denominator has no rational places in any variable")
    kctx = ctx.drop(t)
    places = [Place(t, c) for c in centers] + [Place(t, None)]
    eta = DiffForm.zero(ctx, n - 1)
    zeta = DiffForm.zero(ctx, n)
    for pl in places:
        la = local_analysis(w, pl, stop_at_wild=True)
        if la.level:
            cert = {
                "kind": "wild",
                "form": w,
                "place": pl,
                "level": la.level,
                "phi": la.graded[0],
                "phi2": la.graded[1],
                "eta_above": pull(la.reduction.eta_above, pl.from_local(ctx)) if la.reduction.eta_above is not None else None,
                "zeta_above": pull(la.reduction.zeta_above, pl.from_local(ctx)),
            }
            return _lift_verdict(V.nonzero(f"wild at {pl}, level {la.level}", **cert), orig_ctx)
        eta = eta + la.eta
        zeta = zeta + la.zeta
    w1 = w - as_correction(eta, zeta)
    betas = []
    w2 = w1
    for c in centers:
        pl = Place(t, c)
        beta = residue_form(w1, pl)
        betas.append((pl, beta))
        if not beta.is_zero():
            w2 = w2 - form_dlog(ctx.one(), pl.uniformizer(ctx)).wedge(beta.to_context(ctx))
    if t in w2.used_variables():
        return V.unknown("remainder still depends on the tower variable")
    a0 = w2.to_context(kctx)
    subs = []
    for pl, beta in betas:
        if beta.is_zero():
            continue
        sub = zero_test(beta, depth + 1)
        if sub.is_nonzero:
            cert = {"kind": "residue", "form": w, "variable": t, "place": pl, "beta": beta,
                    "eta": eta, "zeta": zeta, "sub": sub}
            return _lift_verdict(V.nonzero(f"nonzero residue at {pl}", **cert), orig_ctx)
        if sub.is_unknown:
            return V.unknown(f"residue at {pl} undecided", sub=sub)
        subs.append((pl, beta, sub))
    const = zero_test(a0, depth + 1)
    if const.is_nonzero:
        cert = {"kind": "specialization", "form": w, "variable": t, "eta": eta, "zeta": zeta,
                "residues": [(pl, beta, s) for pl, beta, s in subs], "constant": a0, "sub": const}
        return _lift_verdict(V.nonzero("nonzero constant part", **cert), orig_ctx)
    if const.is_unknown:
        return V.unknown("constant part undecided", sub=const)
    # assemble the global witness
    ce, cz = const.certificate["eta"], const.certificate["zeta"]
    eta = eta + (ce.to_context(ctx) if ce is not None else DiffForm.zero(ctx, n - 1))
    zeta = zeta + cz.to_context(ctx)
    for pl, beta, s in subs:
        dl = form_dlog(ctx.one(), pl.uniformizer(ctx))
        be, bz = s.certificate["eta"], s.certificate["zeta"]
        if be is not None:
            eta = eta - dl.wedge(be.to_context(ctx))
        zeta = zeta + dl.wedge(bz.to_context(ctx))
    if w - as_correction(eta, zeta) != DiffForm.zero(ctx, n):
        raise InternalLimit("assembled witness does not replay")
    return _lift_verdict(V.zero("explicit witness", eta=eta, zeta=zeta), orig_ctx)


def _h1_test(f: RatFunc) -> V.Verdict:
    g = solve_artin_schreier(f)
    if g is not None:
        return V.zero("Artin-Schreier solution", eta=None, zeta=DiffForm.function(g))
    if not f.used_variables():
        return V.nonzero("nonzero constant in F_p / P(F_p)", kind="base", value=f)
    return V.nonzero("no Artin-Schreier solution", kind="as-obstruction", form=DiffForm.function(f))


def _lift_verdict(v: V.Verdict, ctx: FieldContext) -> V.Verdict:
    """Move witness forms of a Zero verdict back to the caller's context."""
    if v.is_zero:
        cert = dict(v.certificate)
        if cert.get("eta") is not None:
            cert["eta"] = cert["eta"].to_context(ctx)
        if cert.get("zeta") is not None:
            cert["zeta"] = cert["zeta"].to_context(ctx)
        return V.Verdict(v.status, v.reason, cert)
    return v


# -- filtration and simple form at a user valuation

@dataclass
class FiltrationReport:
    valuation: str
    level: int
    graded: tuple | None
    wild: bool

    def to_json(self):
        g = None
        if self.graded is not None:
            g = [str(x) if x is not None else None for x in self.graded]
        return {"valuation": self.valuation, "level": self.level, "graded": g, "wild": self.wild}


def filtration(w: DiffForm, place: Place) -> FiltrationReport:
    la = local_analysis(w, place, stop_at_wild=True)
    return FiltrationReport(str(place), la.level, la.graded, la.level > 0)


@dataclass
class SimpleForm:
    place: Place
    terms: list  # (i, phi_i, phi'_i) forms over the residue field
    remainder: DiffForm  # tame form in global coordinates
    eta: DiffForm | None
    zeta: DiffForm

    def recompose(self, ctx: FieldContext) -> DiffForm:
        """sum t^-i (phi_i + dlog t ^ phi'_i) + remainder, in global coordinates."""
        loc_ctx = ctx
        t = self.place.var
        u = loc_ctx.gen(t)
        dlogu = form_dlog(loc_ctx.one(), u)
        total = DiffForm.zero(loc_ctx, self.remainder.n)
        for m, phi, phi2 in self.terms:
            piece = phi.to_context(loc_ctx)
            if phi2 is not None:
                piece = piece + dlogu.wedge(phi2.to_context(loc_ctx))
            total = total + piece.scale(u ** (-m))
        return pull(total, self.place.from_local(loc_ctx)) + self.remainder


def simple_form(w: DiffForm, place: Place) -> SimpleForm:
    ctx = w.ctx
    kctx = ctx.drop(place.var)
    loc = pull(w, place.to_local(ctx))
    levels = polar_levels(loc, place.var, kctx)
    red = reduce_polar(levels, ctx, place.var, w.n, stop_at_wild=False)
    # polar part in local coordinates
    u = ctx.gen(place.var)
    dlogu = form_dlog(ctx.one(), u)
    polar = DiffForm.zero(ctx, w.n)
    for m, (phi, phi2) in levels.items():
        piece = phi.to_context(ctx)
        if phi2 is not None:
            piece = piece + dlogu.wedge(phi2.to_context(ctx))
        polar = polar + piece.scale(u ** (-m))
    back = place.from_local(ctx)
    remainder = w - pull(polar, back)
    eta = pull(red.eta, back) if red.eta is not None else None
    return SimpleForm(place, [(m, a, b) for m, a, b in red.terms], remainder, eta, pull(red.zeta, back))
