"""Command-line front end.

Every subcommand is stateless; ``repl`` keeps a :class:`Session`.  Exit
codes: 0 success, 2 user or parse error, 1 internal failure.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass, field

from . import calculus, ideals, parser, theories, weil
from .errors import (InhomogeneousRelation, InternalError, NotFiniteDimensional, SuperFermatError,
                     UserError)
from .superpoly import Parity, Signature, SuperPoly, default_names

EXIT_OK, EXIT_INTERNAL, EXIT_USER = 0, 1, 2


class _Located(UserError):
    """Wraps a user error together with the text it points into."""

    def __init__(self, exc: SuperFermatError, source: str, label: str):
        super().__init__(str(exc))
        self.exc, self.source, self.label = exc, source, label


def _with_source(source: str, label: str, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except _Located:
        raise
    except UserError as exc:
        raise _Located(exc, source, label) from exc


def _caret(source: str, span) -> str:
    start, end = span
    start = max(0, min(start, len(source)))
    end = max(start + 1, min(end, len(source) + 1))
    return f"  {source}\n  {' ' * start}{'^' * (end - start)}"


def format_error(exc: BaseException) -> str:
    inner, source, label = exc, None, None
    if isinstance(exc, _Located):
        inner, source, label = exc.exc, exc.source, exc.label
    kind = type(inner).__name__
    head = f"error: {kind}: {inner}"
    if label:
        head += f" (in {label})"
    span = getattr(inner, "span", None)
    if source is not None and span is not None:
        return head + "\n" + _caret(source, span)
    return head


# ---------------------------------------------------------------- argument helpers

def _sig(text: str) -> Signature:
    try:
        return Signature.parse(text)
    except (UserError, ValueError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _poly(src: str, sig: Signature, names=None, label="expression") -> SuperPoly:
    return _with_source(src, label, parser.parse_superpoly, src, sig, names)


def _relations(texts, sig: Signature, names=None) -> list[SuperPoly]:
    """Parse ``--rel`` values; blank values are ignored and ``;`` separates relations."""
    rels = []
    for text in texts or ():
        for piece in text.split(";"):
            if not piece.strip():
                continue
            f = _poly(piece, sig, names, "relation")
            if not f.is_homogeneous():
                exc = InhomogeneousRelation(f"relation {piece.strip()!r} mixes parities",
                                            relation=f, span=(0, len(piece)))
                raise _Located(exc, piece, "relation")
            rels.append(f)
    return rels


def _ideal_file(path: str) -> theories.FinitePresentation:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise UserError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UserError(f"{path} is not valid JSON: {exc}") from None
    return theories.FinitePresentation.from_json(data)


def _presentation(args) -> theories.FinitePresentation:
    if getattr(args, "ideal", None):
        pres = _ideal_file(args.ideal)
        extra = _relations(args.rel, pres.sig)
        return theories.FinitePresentation.of(pres.sig, list(pres.relations.generators) + extra)
    if args.sig is None:
        raise UserError("--sig is required")
    return theories.FinitePresentation.of(args.sig, _relations(args.rel, args.sig))


def _var(text: str, sig: Signature) -> calculus.VariableRef:
    ref = calculus.VariableRef.parse(text)
    limit = sig.m if ref.parity == Parity.EVEN else sig.n
    if not 1 <= ref.index <= limit:
        raise UserError(f"{text} is not a generator of signature {sig.m},{sig.n}")
    return ref


def _need_sig(args) -> Signature:
    if args.sig is None:
        raise UserError("--sig is required")
    return args.sig


class _Output:
    def __init__(self, as_json: bool, out, err=None):
        self.as_json = as_json
        self.out = out
        self.err = err or sys.stderr

    def emit(self, text: str, payload: dict):
        if self.as_json:
            self.out.write(json.dumps(payload, ensure_ascii=True) + "\n")
        else:
            self.out.write(text + "\n")


# ---------------------------------------------------------------- calculus commands

def dq_names(sig: Signature, index: int):
    even, odd = default_names(sig)
    return even[:index] + ["y"] + even[index:], odd


def dq_json_poly(q: SuperPoly, index: int) -> SuperPoly:
    """Move the fresh variable from slot ``index`` (0-based) to the last even slot."""
    def move(e):
        return e[:index] + e[index + 1:] + (e[index],)
    return SuperPoly._make(q.sig, {(move(e), m): c for (e, m), c in q.terms.items()})


def cmd_dq(args, out: _Output):
    sig = _need_sig(args)
    f = _poly(args.expr, sig)
    ref = _var(args.var, sig)
    if ref.parity != Parity.EVEN:
        raise UserError("dq takes an even variable; use split for odd ones")
    q = calculus.diff_quotient_even(f, ref.index)
    out.emit(q.format(dq_names(sig, ref.index)),
             {"command": "dq", "var": args.var, "fresh_index": sig.m + 1,
              "result": dq_json_poly(q, ref.index).to_json()})


def cmd_dx(args, out: _Output):
    sig = _need_sig(args)
    f = _poly(args.expr, sig)
    ref = _var(args.var, sig)
    if ref.parity != Parity.EVEN:
        raise UserError("dx takes an even variable; use dxi for odd ones")
    d = calculus.partial_even(f, ref.index)
    out.emit(d.format(), {"command": "dx", "var": args.var, "result": d.to_json()})


def cmd_dxi(args, out: _Output):
    sig = _need_sig(args)
    f = _poly(args.expr, sig)
    ref = _var(args.var, sig)
    if ref.parity != Parity.ODD:
        raise UserError("dxi takes an odd variable")
    d = calculus.partial_odd(f, ref.index)
    out.emit(d.format(), {"command": "dxi", "var": args.var, "result": d.to_json()})


def cmd_split(args, out: _Output):
    sig = _need_sig(args)
    f = _poly(args.expr, sig)
    ref = _var(args.var, sig)
    if ref.parity != Parity.ODD:
        raise UserError("split takes an odd variable")
    h, g = calculus.odd_split(f, ref.index)
    out.emit(f"h = {h.format()}\ng = {g.format()}",
             {"command": "split", "var": args.var, "h": h.to_json(), "g": g.to_json()})


# ---------------------------------------------------------------- ideal commands

def cmd_gb(args, out: _Output):
    pres = _presentation(args)
    G = ideals.groebner(pres.relations)
    text = "\n".join(g.format() for g in G.generators) if G.generators else "(empty)"
    out.emit(text, {"command": "gb", "sig": list(pres.sig), "order": G.order,
                    "basis": [g.to_json() for g in G.generators]})


def cmd_nf(args, out: _Output):
    pres = _presentation(args)
    f = _poly(args.expr, pres.sig)
    r = pres.quotient().nf(f)
    out.emit(r.format(), {"command": "nf", "result": r.to_json()})


def cmd_member(args, out: _Output):
    pres = _presentation(args)
    f = _poly(args.expr, pres.sig)
    hit = not pres.quotient().nf(f)
    out.emit("true" if hit else "false", {"command": "member", "member": hit})


def cmd_basis(args, out: _Output):
    pres = _presentation(args)
    basis = pres.quotient().basis_cache
    if basis is None:
        out.emit("infinite", {"command": "basis", "finite": False, "basis": None})
        return
    out.emit("\n".join(b.format() for b in basis) if basis else "(zero algebra)",
             {"command": "basis", "finite": True, "dim": len(basis),
              "basis": [b.to_json() for b in basis]})


def cmd_weilcheck(args, out: _Output):
    pres = _presentation(args)
    Q = pres.quotient()
    if Q.basis_cache is None:
        raise NotFiniteDimensional("the quotient is infinite-dimensional")
    dim = Q.dimension
    nil = ideals.augmentation_nilpotency(Q)
    if nil is None:
        out.emit(f"dim={dim} NOT-WEIL", {"command": "weilcheck", "dim": dim, "nilindex": None, "weil": False})
    else:
        out.emit(f"dim={dim} nilindex={nil} WEIL",
                 {"command": "weilcheck", "dim": dim, "nilindex": nil, "weil": True})


def format_presentation(pres: theories.FinitePresentation) -> str:
    rels = ", ".join(r.format() for r in pres.relations.generators) or "none"
    return f"sig {pres.sig.m},{pres.sig.n}; relations: {rels}"


def cmd_rd(args, out: _Output):
    pres = theories.reduce_rd(_presentation(args))
    out.emit(format_presentation(pres), {"command": "rd", "presentation": pres.to_json()})


def cmd_prodcheck(args, out: _Output):
    a = theories.FinitePresentation.of(args.sig_a, _relations(args.rel_a, args.sig_a))
    b = theories.FinitePresentation.of(args.sig_b, _relations(args.rel_b, args.sig_b))
    ok = theories.check_product_preservation(a, b)
    dim = theories.reduce_rd(theories.product_algebra(a, b)).quotient().dimension
    verdict = "PRESERVED" if ok else "NOT-PRESERVED"
    out.emit(f"{verdict} dim={dim}", {"command": "prodcheck", "preserved": ok, "dim": dim})


# ---------------------------------------------------------------- Weil commands

_ODD_NAME = re.compile(r"xi([1-9][0-9]*)")


def _natural(name: str):
    m = re.fullmatch(r"(.*?)([0-9]*)", name)
    return (m.group(1), int(m.group(2)) if m.group(2) else -1)


def infer_names(texts) -> tuple[list[str], list[str]]:
    """Generator names used by ``--weil``/``--arg`` when no ``--sig`` is given.

    ``xi<k>`` are odd (all of ``xi1..xi<max>`` are created); every other
    identifier is even, ordered naturally (``t`` < ``t2`` < ``t10``).
    """
    even, top = set(), 0
    for text in texts:
        for name in _with_source(text, "generator list", parser.identifiers, text):
            m = _ODD_NAME.fullmatch(name)
            if m:
                top = max(top, int(m.group(1)))
            else:
                even.add(name)
    return sorted(even, key=_natural), [f"xi{j}" for j in range(1, top + 1)]


def _weil_setup(args, extra_texts):
    rel_texts = [t for t in (args.weil or []) if t.strip()]
    if args.sig is not None:
        sig = args.sig
        names = default_names(sig)
    else:
        pieces = [p for t in rel_texts for p in t.split(";")] + list(extra_texts)
        names = infer_names(pieces)
        sig = Signature(len(names[0]), len(names[1]))
    rels = _relations(rel_texts, sig, names)
    algebra = _with_source(";".join(rel_texts), "--weil", weil.RealWeilAlgebra.from_relations, sig, rels)
    return algebra, names


def _jet_args(texts, algebra, names, label):
    out = []
    for text in texts or ():
        f = _poly(text, algebra.sig, names, label)
        out.append(algebra.element(f, exact=True))
    return out


def _poly_of_expr(e: weil.SmoothExpr, p: int):
    """The polynomial of a polynomial expression, or None."""
    sig = Signature(p, 0)
    if isinstance(e, weil.Const):
        return SuperPoly.const(sig, e.value)
    if isinstance(e, weil.Var):
        return SuperPoly.even_gen(sig, e.index)
    if isinstance(e, weil.Neg):
        inner = _poly_of_expr(e.arg, p)
        return None if inner is None else -inner
    if isinstance(e, weil.Power):
        inner = _poly_of_expr(e.arg, p)
        return None if inner is None or e.k < 0 else inner ** e.k
    if isinstance(e, (weil.Sum, weil.Product)):
        left, right = _poly_of_expr(e.left, p), _poly_of_expr(e.right, p)
        if left is None or right is None:
            return None
        return left + right if isinstance(e, weil.Sum) else left * right
    return None


def exact_oracle(e: weil.SmoothExpr, args, algebra) -> weil.JetElement:
    """Substitute the jets into the polynomial ``e`` and reduce."""
    from .superpoly import substitute
    f = _poly_of_expr(e, len(args))
    if f is None:
        raise UserError("--oracle exact needs a polynomial expression")
    image = substitute(f, [a.value for a in args], [], target=algebra.sig)
    return algebra.element(image, exact=True)


def _jet_payload(command: str, jet: weil.JetElement, names) -> tuple[str, dict]:
    payload = {"command": command, **jet.to_json()}
    payload["names"] = {"even": list(names[0]), "odd": list(names[1])}
    return jet.format(names), payload


def cmd_jet(args, out: _Output):
    algebra, names = _weil_setup(args, args.arg or [])
    jets = _jet_args(args.arg, algebra, names, "--arg")
    e = _with_source(args.expr, "--expr", parser.parse_smooth, args.expr, len(jets))
    result = _with_source(args.expr, "--expr", weil.smooth_eval_jet, e, jets, algebra=algebra, order=args.order)
    text, payload = _jet_payload("jet", result, names)
    if args.oracle == "exact":
        verdict = "MATCH" if exact_oracle(e, jets, algebra) == result else "MISMATCH"
        payload["oracle"] = verdict
        text = f"{text}\n{verdict}"
        out.emit(text, payload)
        if verdict != "MATCH":
            raise InternalError("exact oracle disagrees with the jet evaluation")
        return
    out.emit(text, payload)


def _component(text: str, q: int, p: int):
    """``ODD:EXPR`` -> (odd index tuple, sign, expression)."""
    odd_src, sep, expr_src = text.partition(":")
    if not sep:
        raise UserError(f"component {text!r} must look like 'xi1*xi2:EXPR'")
    sig = Signature(0, q)
    mono = _poly(odd_src, sig, label="component odd part")
    if len(mono.terms) != 1:
        raise UserError(f"{odd_src.strip()!r} is not a single odd monomial")
    ((_, mask), coef), = mono.terms.items()
    if coef not in (1, -1):
        raise UserError(f"{odd_src.strip()!r} must have coefficient 1 or -1")
    from .superpoly import odd_indices
    e = _with_source(expr_src, "component expression", parser.parse_smooth, expr_src, p)
    return odd_indices(mask), int(coef), e


def cmd_berezin(args, out: _Output):
    algebra, names = _weil_setup(args, (args.arg or []) + (args.odd_arg or []))
    even_args = _jet_args(args.arg, algebra, names, "--arg")
    odd_args = _jet_args(args.odd_arg, algebra, names, "--odd-arg")
    p, q = len(even_args), len(odd_args)
    comps: dict = {}
    for text in args.component or ():
        odd, sign, e = _component(text, q, p)
        e = e if sign == 1 else weil.s_neg(e)
        comps[odd] = weil.s_add(comps[odd], e) if odd in comps else e
    F = weil.SuperFunction(Signature(p, q), comps)
    label = ";".join(args.component or [])
    result = _with_source(label, "--component", weil.berezin_eval, F, even_args, odd_args, algebra=algebra)
    text, payload = _jet_payload("berezin", result, names)
    out.emit(text, payload)


# ---------------------------------------------------------------- REPL

@dataclass
class Session:
    """Named bindings of polynomials, presentations, smooth expressions and jets."""

    sig: Signature = Signature(0, 0)
    polys: dict = field(default_factory=dict)
    presentations: dict = field(default_factory=dict)
    exprs: dict = field(default_factory=dict)
    jets: dict = field(default_factory=dict)

    HELP = ("commands: sig M,N | let NAME = POLY | pres NAME = REL; REL... | fn NAME = EXPR | "
            "show NAME | dx NAME|POLY VAR | dxi NAME|POLY VAR | dq NAME|POLY VAR | "
            "nf NAME|POLY in PRES | weilcheck PRES | rd PRES | help | quit")

    def _poly(self, text: str) -> SuperPoly:
        text = text.strip()
        if text in self.polys:
            return self.polys[text]
        return _poly(text, self.sig)

    def _pres(self, name: str) -> theories.FinitePresentation:
        try:
            return self.presentations[name.strip()]
        except KeyError:
            raise UserError(f"no presentation named {name.strip()!r}") from None

    def _bind(self, table: dict, name: str, value):
        name = name.strip()
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name):
            raise UserError(f"bad binding name {name!r}")
        table[name] = value
        return name

    def execute(self, line: str) -> str | None:
        line = line.strip()
        if not line or line.startswith("#"):
            return None
        head, _, rest = line.partition(" ")
        if head in ("quit", "exit"):
            raise EOFError
        if head == "help":
            return self.HELP
        if head == "sig":
            self.sig = Signature.parse(rest.strip())
            return f"sig {self.sig.m},{self.sig.n}"
        if head in ("let", "pres", "fn"):
            name, eq, body = rest.partition("=")
            if not eq:
                raise UserError(f"expected '{head} NAME = ...'")
            if head == "let":
                f = _poly(body.strip(), self.sig)
                self._bind(self.polys, name, f)
                return f.format()
            if head == "pres":
                pres = theories.FinitePresentation.of(self.sig, _relations([body], self.sig))
                self._bind(self.presentations, name, pres)
                return format_presentation(pres)
            src = body.strip()
            e = _with_source(src, "expression", parser.parse_smooth, src, _max_u(src))
            self._bind(self.exprs, name, e)
            return weil.to_text(e)
        if head == "show":
            name = rest.strip()
            for table, render in ((self.polys, SuperPoly.format), (self.presentations, format_presentation),
                                  (self.exprs, weil.to_text), (self.jets, weil.JetElement.format)):
                if name in table:
                    return render(table[name])
            raise UserError(f"nothing is bound to {name!r}")
        if head in ("dx", "dxi", "dq"):
            body, _, var = rest.rpartition(" ")
            f = self._poly(body)
            ref = _var(var, f.sig)
            if head == "dx":
                return calculus.partial_even(f, ref.index).format()
            if head == "dxi":
                return calculus.partial_odd(f, ref.index).format()
            return calculus.diff_quotient_even(f, ref.index).format(dq_names(f.sig, ref.index))
        if head == "nf":
            body, sep, pres = rest.rpartition(" in ")
            if not sep:
                raise UserError("expected 'nf POLY in PRES'")
            P = self._pres(pres)
            return P.quotient().nf(self._poly(body) if body.strip() not in self.polys
                                   else self.polys[body.strip()]).format()
        if head == "weilcheck":
            Q = self._pres(rest).quotient()
            if Q.basis_cache is None:
                raise NotFiniteDimensional("the quotient is infinite-dimensional")
            nil = ideals.augmentation_nilpotency(Q)
            return f"dim={Q.dimension} " + (f"nilindex={nil} WEIL" if nil else "NOT-WEIL")
        if head == "rd":
            return format_presentation(theories.reduce_rd(self._pres(rest)))
        raise UserError(f"unknown command {head!r}; try 'help'")


def _max_u(src: str) -> int:
    nums = [int(m.group(1)) for name in parser.identifiers(src)
            if (m := re.fullmatch(r"u([1-9][0-9]*)", name))]
    return max(nums, default=0)


def cmd_repl(args, out: _Output, stdin=None):
    session = Session(sig=args.sig or Signature(0, 0))
    stdin = stdin or sys.stdin
    interactive = stdin.isatty()
    err = out.err
    while True:
        if interactive:
            out.out.write("> ")
            out.out.flush()
        line = stdin.readline()
        if not line:
            break
        try:
            reply = session.execute(line)
        except EOFError:
            break
        except UserError as exc:
            err.write(format_error(exc) + "\n")
            continue
        if reply is not None:
            out.out.write(reply + "\n")


# ---------------------------------------------------------------- entry point

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="superfermat", description="Exact supercommutative algebra and calculus.")
    sub = ap.add_subparsers(dest="command", required=True, metavar="COMMAND")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--sig", type=_sig, default=None, help="signature m,n")
    common.add_argument("--json", action="store_true", help="emit JSON instead of text")

    rels = argparse.ArgumentParser(add_help=False)
    rels.add_argument("--rel", action="append", default=[], metavar="EXPR",
                      help="relation (repeatable; ';' separates several; blank values are ignored)")
    rels.add_argument("--ideal", metavar="FILE", help="presentation JSON file")

    for name, fn, doc in (("dq", cmd_dq, "difference quotient in an even variable"),
                          ("dx", cmd_dx, "even partial derivative"),
                          ("dxi", cmd_dxi, "odd (left) partial derivative"),
                          ("split", cmd_split, "f = h + xi*g with h, g free of xi")):
        p = sub.add_parser(name, parents=[common], help=doc)
        p.add_argument("expr")
        p.add_argument("--var", required=True)
        p.set_defaults(func=fn)

    for name, fn, doc, takes_expr in (("gb", cmd_gb, "reduced Groebner basis", False),
                                      ("nf", cmd_nf, "normal form modulo the relations", True),
                                      ("member", cmd_member, "ideal membership", True),
                                      ("basis", cmd_basis, "staircase basis of the quotient", False),
                                      ("weilcheck", cmd_weilcheck, "Weil algebra certificate", False),
                                      ("rd", cmd_rd, "reduced presentation A/(A_1)", False)):
        p = sub.add_parser(name, parents=[common, rels], help=doc)
        if takes_expr:
            p.add_argument("expr")
        p.set_defaults(func=fn)

    p = sub.add_parser("prodcheck", parents=[common], help="is (A x B)_rd = A_rd x B_rd?")
    p.add_argument("--sig-a", type=_sig, required=True)
    p.add_argument("--rel-a", action="append", default=[])
    p.add_argument("--sig-b", type=_sig, required=True)
    p.add_argument("--rel-b", action="append", default=[])
    p.set_defaults(func=cmd_prodcheck)

    weil_args = argparse.ArgumentParser(add_help=False)
    weil_args.add_argument("--weil", action="append", default=[], metavar="REL",
                           help="relation of the Weil algebra (generator names are inferred unless --sig is given)")
    weil_args.add_argument("--arg", action="append", default=[], metavar="JET", help="even argument")

    p = sub.add_parser("jet", parents=[common, weil_args], help="evaluate a smooth expression on jets")
    p.add_argument("--expr", required=True)
    p.add_argument("--oracle", choices=["exact"], default=None)
    p.add_argument("--order", type=int, default=None, help="Taylor order (default nilindex - 1)")
    p.set_defaults(func=cmd_jet)

    p = sub.add_parser("berezin", parents=[common, weil_args], help="evaluate a superfunction")
    p.add_argument("--component", action="append", default=[], metavar="ODD:EXPR",
                   help="component, e.g. 'xi1*xi2:exp(u1)' or '1:u1^2'")
    p.add_argument("--odd-arg", action="append", default=[], metavar="JET")
    p.set_defaults(func=cmd_berezin)

    p = sub.add_parser("repl", parents=[common], help="interactive session")
    p.set_defaults(func=cmd_repl)
    return ap


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USER if exc.code else EXIT_OK
    out = _Output(getattr(args, "json", False), stdout, stderr)
    try:
        args.func(args, out)
    except InternalError as exc:
        stderr.write(f"internal error: {exc}\n")
        return EXIT_INTERNAL
    except UserError as exc:
        stderr.write(format_error(exc) + "\n")
        return EXIT_USER
    except RecursionError:
        stderr.write("error: expression nests too deeply\n")
        return EXIT_USER
    except Exception as exc:  # noqa: BLE001 - last-resort guard for the exit-code contract
        stderr.write(f"internal error: {type(exc).__name__}: {exc}\n")
        return EXIT_INTERNAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
