"""Command-line front end.

    charp [--prime P] [--r R] [--vars x,y,t] [--let NAME=EXPR ...] [--json] COMMAND ...

Exit status: 0 on success, 1 when a verification or an ``--expect`` check
fails, 2 on usage, parse and input errors.
"""

from __future__ import annotations

import json
import sys

import click

from . import verdict as V
from .applications import verify_battery
from .errors import CharpError
from .evaluate import Evaluator
from .field import DivisorValuation, FieldContext, solve_artin_schreier
from .forms import cartier, classify_closed, form_d, inverse_cartier
from .grammar import free_variables, parse, parse_binding
from .hsym import (
    h_filtration, h_is_tame, h_is_unramified, h_is_zero, h_normalize, h_residue, h_simple_form,
)
from .milnor import k_dlog, k_is_zero, k_normalize, k_residue
from .witt import witt_add, witt_frobenius, witt_mul, witt_pmul, witt_sub

SCHEMA = 1


class Session:
    """Global options plus the lazily built field context."""

    def __init__(self, prime: int, r: int, variables: str | None, lets: tuple[str, ...], as_json: bool):
        self.prime, self.r, self.as_json = prime, r, as_json
        self.variables = [v.strip() for v in variables.split(",") if v.strip()] if variables else None
        self.lets = [parse_binding(b) for b in lets]

    def context(self, exprs=(), valuation: DivisorValuation | None = None) -> FieldContext:
        if self.variables is not None:
            return FieldContext(self.prime, self.variables)
        # infer: free variables in order of first appearance, bound names excluded
        bound = {name for name, _ in self.lets}
        names: list[str] = []
        trees = [node for _, node in self.lets] + [parse(e) for e in exprs]
        for tree in trees:
            for v in _ordered_vars(tree):
                if v not in bound and v not in names:
                    names.append(v)
        if valuation is not None and valuation.var not in names:
            names.append(valuation.var)
        return FieldContext(self.prime, names)

    def evaluator(self, ctx: FieldContext, modulus: int | None = None) -> Evaluator:
        ev = Evaluator(ctx, self.r, modulus)
        for name, node in self.lets:
            ev.bind(name, ev(node))
        return ev

    def emit(self, command: list[str], result, text: str | None = None):
        if self.as_json:
            doc = {"schema": SCHEMA, "command": command, "result": V._jsonable(result)}
            click.echo(json.dumps(doc, indent=2, sort_keys=True))
        else:
            click.echo(text if text is not None else str(result))


def _ordered_vars(tree) -> list[str]:
    out = []

    def walk(nd):
        if nd.kind == "var":
            out.append(nd.args[0])
            return
        for a in nd.args:
            if hasattr(a, "kind"):
                walk(a)
            elif isinstance(a, tuple):
                for x in a:
                    if hasattr(x, "kind"):
                        walk(x)
    walk(tree)
    seen = set(free_variables(tree))
    return [v for i, v in enumerate(out) if v in seen and v not in out[:i]]


def _valuation(text: str | None, p: int) -> DivisorValuation | None:
    return DivisorValuation.parse(text, p) if text else None


def _need(val, what):
    if val is None:
        raise click.UsageError(f"this operation needs {what}")
    return val


def _verdict_text(v: V.Verdict) -> str:
    return v.status


def _check_expect(v: V.Verdict, expect: str | None):
    if expect and v.status != expect:
        click.echo(f"expected {expect}, got {v.status}", err=True)
        raise SystemExit(1)


def _json_flag(f):
    """Accept --json after the subcommand as well."""
    def cb(ctx, _param, value):
        if value:
            ctx.find_object(Session).as_json = True
        return value
    return click.option("--json", "_json", is_flag=True, expose_value=False, callback=cb,
                        help="structured output")(f)


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.option("--prime", "-p", type=int, default=2, show_default=True, help="characteristic")
@click.option("--r", "r", type=int, default=1, show_default=True, help="Witt length (modulus p^r)")
@click.option("--vars", "variables", default=None, help="comma-separated variables; last is distinguished")
@click.option("--let", "lets", multiple=True, help="binding NAME = EXPR, expanded before evaluation")
@click.option("--json", "as_json", is_flag=True, help="structured output")
@click.pass_context
def cli(ctx, prime, r, variables, lets, as_json):
    """Witt vectors, forms, Milnor K-symbols and H-symbols in characteristic p."""
    ctx.obj = Session(prime, r, variables, lets, as_json)


@cli.command()
@click.argument("op", type=click.Choice(["add", "sub", "mul", "frob", "pmul"]))
@click.option("--expr", "exprs", multiple=True, required=True, help="Witt literal [f1, ..., fr]")
@_json_flag
@click.pass_obj
def witt(s: Session, op, exprs):
    """Witt vector arithmetic."""
    ctx = s.context(exprs)
    ev = s.evaluator(ctx)
    vals = [ev(e, "witt") for e in exprs]
    if op in ("add", "sub", "mul"):
        if len(vals) != 2:
            raise click.UsageError(f"{op} needs two --expr values")
        out = {"add": witt_add, "sub": witt_sub, "mul": witt_mul}[op](*vals)
    else:
        if len(vals) != 1:
            raise click.UsageError(f"{op} needs one --expr value")
        out = (witt_frobenius if op == "frob" else witt_pmul)(vals[0])
    s.emit(["witt", op], str(out))


@cli.command()
@click.argument("op", type=click.Choice(["d", "cartier", "inverse-cartier", "classify"]))
@click.option("--expr", required=True, help="form, e.g. x*d(y)^d(x)/y")
@_json_flag
@click.pass_obj
def form(s: Session, op, expr):
    """Differential forms: d, Cartier, inverse Cartier, closed-form classification."""
    ctx = s.context([expr])
    w = s.evaluator(ctx)(expr, "form")
    if op == "classify":
        c = classify_closed(w)
        doc = {"verdict": c.verdict,
               "pairs": [{"a": str(a), "log": str(psi)} for a, psi in c.pairs],
               "exact_part": None if c.exact_part is None else str(c.exact_part),
               "stable": None if c.stable is None else str(c.stable)}
        lines = [c.verdict] + [f"  ({a})^{ctx.p} * {psi}" for a, psi in c.pairs]
        s.emit(["form", op], doc, "\n".join(lines))
        return
    out = {"d": form_d, "cartier": cartier, "inverse-cartier": inverse_cartier}[op](w)
    s.emit(["form", op], str(out))


@cli.command()
@click.argument("op", type=click.Choice(["normalize", "residue", "dlog", "iszero"]))
@click.option("--expr", required=True, help="K-symbol sum, e.g. {x, y}@3 - 2*{x}@3")
@click.option("--at", "at", default=None, help="valuation: VAR=CONST or inf(VAR)")
@click.option("--expect", type=click.Choice([V.ZERO, V.NONZERO, V.UNKNOWN]), default=None)
@_json_flag
@click.pass_obj
def ksym(s: Session, op, expr, at, expect):
    """Milnor K-symbols modulo m."""
    v = _valuation(at, s.prime)
    ctx = s.context([expr], v)
    x = s.evaluator(ctx)(expr, "ksym")
    if op == "normalize":
        s.emit(["ksym", op], k_normalize(x), str(k_normalize(x)))
    elif op == "residue":
        res = k_residue(x, _need(v, "--at"))
        s.emit(["ksym", op], res, str(res))
    elif op == "dlog":
        s.emit(["ksym", op], str(k_dlog(x)))
    else:
        verdict = k_is_zero(x)
        s.emit(["ksym", op], verdict, _verdict_text(verdict))
        _check_expect(verdict, expect)


@cli.command()
@click.argument("op", type=click.Choice(["normalize", "residue", "filtration", "simpleform",
                                         "classify", "iszero"]))
@click.option("--expr", required=True, help="H-symbol sum, e.g. [x, 1 | t, x}")
@click.option("--at", "at", default=None, help="valuation: VAR=CONST or inf(VAR)")
@click.option("--expect", type=click.Choice([V.ZERO, V.NONZERO, V.UNKNOWN]), default=None)
@_json_flag
@click.pass_obj
def hsym(s: Session, op, expr, at, expect):
    """H-symbols [a_1, ..., a_r | b_1, ..., b_n}."""
    v = _valuation(at, s.prime)
    ctx = s.context([expr], v)
    x = s.evaluator(ctx)(expr, "hsym")
    cmd = ["hsym", op]
    if op == "normalize":
        out = h_normalize(x)
        s.emit(cmd, out, str(out))
    elif op == "iszero":
        verdict = h_is_zero(x)
        s.emit(cmd, verdict, _verdict_text(verdict))
        _check_expect(verdict, expect)
    elif op == "residue":
        out = h_residue(x, _need(v, "--at"))
        s.emit(cmd, out, str(out))
    elif op == "filtration":
        rep = h_filtration(x, _need(v, "--at"))
        g = rep.graded
        text = f"level {rep.level}" + ("" if not g else f", graded {g[0]}" +
                                       ("" if g[1] is None else f" ; {g[1]}"))
        s.emit(cmd, rep, text)
    elif op == "simpleform":
        sf = h_simple_form(x, _need(v, "--at"))
        lines = [f"level {m}: {a}" + ("" if b is None else f" + dt/t ^ {b}") for m, a, b in sf.terms]
        lines.append(f"tame remainder: {sf.remainder}")
        s.emit(cmd, sf, "\n".join(lines))
    else:
        v = _need(v, "--at")
        tame = h_is_tame(x, v)
        unr = h_is_unramified(x, v)
        doc = {"tame": tame.status, "unramified": unr.status}
        s.emit(cmd, doc, f"{tame.status}, {unr.status}")


@cli.command()
@click.argument("kind", type=click.Choice(["char2", "char3", "charp", "mod-ell"]))
@click.option("--r", "r", type=int, default=None, help="Witt length (default: the global --r)")
@click.option("--ell", "ells", type=int, multiple=True, help="coprime modulus (mod-ell only)")
@_json_flag
@click.pass_obj
def verify(s: Session, kind, r, ells):
    """Run a verification battery; exit 1 if any check fails."""
    r = r or s.r
    p = None
    if kind == "charp" and s.prime > 3:
        p = s.prime
    if kind == "mod-ell":
        p = s.prime if s.prime in (2, 3) else 2
    out = verify_battery(kind, r=r, p=p, ell=ells or None)
    reports = out if isinstance(out, list) else [out]
    if s.as_json:
        s.emit(["verify", kind], [rep.to_json() for rep in reports])
    else:
        for rep in reports:
            click.echo(f"# {rep.battery} p={rep.characteristic} r={rep.r} modulus={rep.modulus}")
            for line in rep.lines():
                click.echo(line)
    if not all(rep.passed for rep in reports):
        raise SystemExit(1)


@cli.command("solve-as")
@click.option("--expr", required=True, help="f; prints g with g^p - g = f, or none")
@_json_flag
@click.pass_obj
def solve_as(s: Session, expr):
    """Solve the Artin-Schreier equation g^p - g = f."""
    ctx = s.context([expr])
    f = s.evaluator(ctx)(expr, "function")
    g = solve_artin_schreier(f)
    s.emit(["solve-as"], None if g is None else str(g), "none" if g is None else str(g))


def main(argv=None) -> int:
    try:
        cli.main(args=argv, prog_name="charp", standalone_mode=False)
    except click.exceptions.Exit as e:
        return e.exit_code
    except click.ClickException as e:
        e.show()
        return 2
    except click.exceptions.Abort:
        return 2
    except SystemExit as e:
        return int(e.code or 0)
    except CharpError as e:
        click.echo(f"error: {e}", err=True)
        return 2
    return 0


def run(argv) -> int:
    return main(list(argv))


if __name__ == "__main__":
    sys.exit(main())
