"""Batch front end: parse a session file, run one command, print text or JSON."""

from __future__ import annotations

import argparse
import json
import logging
import re
import sys
import time
from dataclasses import asdict, dataclass, field

from . import config
from .errors import AffnormError, SyntaxErrorWithPosition
from .groebner import reduced_groebner
from .ideals import Ideal, QuotientRing, radical
from .normalize import FULL_JACOBIAN, SINGLE_ELEMENT, TestIdealStrategy, normalize_ring
from .polyring import MonomialOrder, Polynomial, PolyRing, format_polynomial
from .rees import blowup, ideal_integral_closure

log = logging.getLogger(__name__)

COMMANDS = ("gb", "radical", "normalize", "fractions", "blowup", "closure")
STRATEGIES = {"jacobian": FULL_JACOBIAN, "element": SINGLE_ELEMENT}

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+|\#[^\n]*|//[^\n]*)
  | (?P<nl>\n)
  | (?P<num>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*/^(),;=\[\]])
""", re.VERBOSE)


@dataclass
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    out, pos, line, start = [], 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise SyntaxErrorWithPosition(f"unexpected character {text[pos]!r}",
                                          line, pos - start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line, start = line + 1, m.end()
        elif kind != "ws":
            out.append(Token(kind, m.group(), line, m.start() - start + 1))
        pos = m.end()
    out.append(Token("eof", "", line, pos - start + 1))
    return out


@dataclass
class Session:
    ring: PolyRing
    ring_name: str
    ideals: dict[str, Ideal]
    command: str
    target: str
    options: dict = field(default_factory=dict)


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0
        self.ring: PolyRing | None = None

    def peek(self) -> Token:
        return self.toks[self.i]

    def next(self) -> Token:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def error(self, msg: str, tok: Token | None = None):
        tok = tok or self.peek()
        raise SyntaxErrorWithPosition(msg, tok.line, tok.column)

    def expect(self, text: str) -> Token:
        tok = self.next()
        if tok.text != text:
            shown = tok.text or "end of input"
            self.error(f"expected {text!r}, found {shown!r}", tok)
        return tok

    def ident(self) -> Token:
        tok = self.next()
        if tok.kind != "ident":
            self.error(f"expected an identifier, found {tok.text or 'end of input'!r}", tok)
        return tok

    # polynomials

    def expr(self) -> Polynomial:
        sign = 1
        if self.peek().text in "+-" and self.peek().kind == "op":
            sign = -1 if self.next().text == "-" else 1
        acc = self.term() * sign
        while self.peek().kind == "op" and self.peek().text in ("+", "-"):
            op = self.next().text
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term(self) -> Polynomial:
        acc = self.power()
        while self.peek().kind == "op" and self.peek().text in ("*", "/"):
            op = self.next()
            if op.text == "*":
                acc = acc * self.power()
            else:
                tok = self.peek()
                d = self.power()
                if not d.is_constant() or d.is_zero():
                    self.error("division only by a nonzero rational constant", tok)
                acc = acc * (1 / d.lead_coeff())
        return acc

    def power(self) -> Polynomial:
        base = self.atom()
        if self.peek().text == "^":
            self.next()
            tok = self.next()
            if tok.kind != "num":
                self.error("exponent must be a non-negative integer", tok)
            base = base ** int(tok.text)
        return base

    def atom(self) -> Polynomial:
        tok = self.next()
        R = self.ring
        if tok.kind == "num":
            return R.constant(int(tok.text))
        if tok.kind == "ident":
            if tok.text not in R.names:
                self.error(f"unknown variable {tok.text}", tok)
            return R.gen(tok.text)
        if tok.text == "(":
            p = self.expr()
            self.expect(")")
            return p
        self.error(f"unexpected {tok.text or 'end of input'!r} in polynomial", tok)

    # statements

    def ring_decl(self) -> tuple[str, PolyRing]:
        name = self.ident().text
        self.expect("=")
        field_tok = self.ident()
        if field_tok.text != "QQ":
            self.error("only the coefficient field QQ is supported", field_tok)
        self.expect("[")
        names = [self.ident().text]
        while self.peek().text == ",":
            self.next()
            names.append(self.ident().text)
        self.expect("]")
        order = "grevlex"
        if self.peek().text == "order":
            self.next()
            tok = self.ident()
            if tok.text not in ("grevlex", "lex"):
                self.error(f"unknown order {tok.text}", tok)
            order = tok.text
        self.expect(";")
        try:
            return name, PolyRing(names, MonomialOrder(order))
        except ValueError as exc:
            self.error(str(exc), field_tok)

    def session(self) -> Session:
        ideals: dict[str, Ideal] = {}
        ring_name = None
        command = None
        while self.peek().kind != "eof":
            tok = self.ident()
            if tok.text == "ring":
                if self.ring is not None:
                    self.error("duplicate ring declaration", tok)
                ring_name, self.ring = self.ring_decl()
            elif tok.text == "ideal":
                if self.ring is None:
                    self.error("no ring declared", tok)
                name = self.ident().text
                self.expect("=")
                gens = [self.expr()]
                while self.peek().text == ",":
                    self.next()
                    gens.append(self.expr())
                self.expect(";")
                ideals[name] = Ideal(self.ring, gens)
            elif tok.text in COMMANDS:
                if command is not None:
                    self.error("only one command per session", tok)
                if self.ring is None:
                    self.error("no ring declared", tok)
                target = self.ident()
                if target.text not in ideals:
                    self.error(f"unknown ideal {target.text}", target)
                self.expect(";")
                command = (tok.text, target.text)
            else:
                self.error(f"unknown statement {tok.text!r}", tok)
        if self.ring is None:
            self.error("no ring declared")
        if command is None:
            self.error("missing command (one of " + ", ".join(COMMANDS) + ")")
        return Session(self.ring, ring_name, ideals, command[0], command[1])


def parse_session(text: str) -> Session:
    return _Parser(text).session()


def parse_polynomial(text: str, ring: PolyRing) -> Polynomial:
    p = _Parser(text)
    p.ring = ring
    f = p.expr()
    if p.peek().kind != "eof":
        p.error(f"trailing input {p.peek().text!r}")
    return f


# ---------------------------------------------------------------- documents


@dataclass
class FractionBlock:
    num: str
    den: str


@dataclass
class ComponentBlock:
    variables: list[str]
    degrees: list[list[int]] | None
    relations: list[str]
    normap: list[str]
    fractions: list[FractionBlock]


@dataclass
class OutputDocument:
    command: str
    ring: list[str]
    components: list[ComponentBlock] = field(default_factory=list)
    ideal: list[str] | None = None
    timings: dict[str, float] = field(default_factory=dict)

    def to_dict(self, timings: bool = True) -> dict:
        d = asdict(self)
        if not timings:
            d.pop("timings")
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "OutputDocument":
        comps = [ComponentBlock(c["variables"], c["degrees"], c["relations"], c["normap"],
                                [FractionBlock(**f) for f in c["fractions"]])
                 for c in d.get("components", [])]
        return cls(d["command"], d["ring"], comps, d.get("ideal"), d.get("timings", {}))


def _strs(polys) -> list[str]:
    return [format_polynomial(p) for p in polys]


def _normalization_blocks(res) -> list[ComponentBlock]:
    blocks = []
    for c in res.components:
        S = c.presentation.ambient
        degrees = [list(d) for d in S.degrees] if c.degrees is not None else None
        normap = [f"{v} -> {format_polynomial(img)}"
                  for v, img in zip(c.normap.source.names, c.normap.images)]
        fracs = [FractionBlock(format_polynomial(fr.num), format_polynomial(fr.den))
                 for fr in c.all_fractions()]
        blocks.append(ComponentBlock(list(S.names), degrees,
                                     _strs(c.presentation.defining.gb().elements),
                                     normap, fracs))
    return blocks


def execute(session: Session) -> OutputDocument:
    opts = session.options
    I = session.ideals[session.target]
    R = session.ring
    doc = OutputDocument(f"{session.command} {session.target}", list(R.names))
    start = time.perf_counter()
    with config.limits(degree_cap=opts.get("degree_cap")):
        if session.command == "gb":
            doc.ideal = _strs(reduced_groebner(I.gens, ring=R).elements)
        elif session.command == "radical":
            doc.ideal = _strs(radical(I).gb().elements)
        elif session.command in ("normalize", "fractions"):
            res = normalize_ring(QuotientRing(R, I),
                                 TestIdealStrategy(STRATEGIES[opts.get("strategy", "jacobian")]),
                                 max_iterations=opts.get("max_iterations"),
                                 assume_reduced=opts.get("assume_reduced", False))
            doc.components = _normalization_blocks(res)
            doc.timings.update({k: round(v, 6) for k, v in res.timings.items()})
        elif session.command == "blowup":
            B = blowup(I)
            S = B.ambient
            images = [f"{y} -> {format_polynomial(g)}"
                      for y, g in zip(B.fresh, B.generator_images)]
            doc.components = [ComponentBlock(list(S.names), [list(d) for d in S.degrees],
                                             _strs(B.defining.gens), images, [])]
        elif session.command == "closure":
            doc.ideal = _strs(ideal_integral_closure(I).gens)
    doc.timings["total"] = round(time.perf_counter() - start, 6)
    return doc


def _ideal_text(gens: list[str]) -> str:
    return "0" if not gens else ", ".join(gens)


def render(doc: OutputDocument, fmt: str = "text", timings: bool = True) -> str:
    if fmt == "json":
        return json.dumps(doc.to_dict(timings), indent=2, sort_keys=True)
    lines = [f"-- {doc.command}", f"ring: QQ[{', '.join(doc.ring)}]"]
    if doc.ideal is not None:
        lines.append(f"ideal: ({_ideal_text(doc.ideal)})")
    for k, c in enumerate(doc.components, 1):
        lines.append(f"component {k} of {len(doc.components)}")
        lines.append(f"  variables: {', '.join(c.variables)}")
        if c.degrees is not None:
            lines.append("  degrees: " + ", ".join(
                f"{v} {{{', '.join(map(str, d))}}}" for v, d in zip(c.variables, c.degrees)))
        if not c.relations:
            lines.append("  relations: 0")
        else:
            lines.append("  relations:")
            lines += [f"    {r}" for r in c.relations]
        if c.normap:
            lines.append("  map: " + "; ".join(c.normap))
        if c.fractions:
            lines.append("  fractions: " + ", ".join(
                f.num if f.den == "1" else f"{_wrap(f.num)}/{_wrap(f.den)}"
                for f in c.fractions))
    if timings and doc.timings:
        lines.append("timings: " + ", ".join(f"{k}={v:.3f}s" for k, v in doc.timings.items()))
    return "\n".join(lines) + "\n"


def _wrap(s: str) -> str:
    return f"({s})" if any(ch in s[1:] for ch in "+-") else s


# ---------------------------------------------------------------- entry point


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="affnorm", description=__doc__)
    p.add_argument("session", nargs="?", default="-", help="session file, or - for stdin")
    p.add_argument("--strategy", choices=sorted(STRATEGIES), default="jacobian")
    p.add_argument("--max-iter", type=int, default=None, dest="max_iterations")
    p.add_argument("--assume-reduced", action="store_true")
    p.add_argument("--degree-cap", type=int, default=None)
    p.add_argument("--json", action="store_true")
    p.add_argument("--time", action="store_true", help="include per-phase timings")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    fmt = "json" if args.json else "text"
    try:
        if args.session == "-":
            text = sys.stdin.read()
        else:
            with open(args.session, encoding="utf-8") as fh:
                text = fh.read()
        t0 = time.perf_counter()
        session = parse_session(text)
        session.options = {"strategy": args.strategy, "max_iterations": args.max_iterations,
                           "assume_reduced": args.assume_reduced,
                           "degree_cap": args.degree_cap}
        parse_time = time.perf_counter() - t0
        doc = execute(session)
        doc.timings["parse"] = round(parse_time, 6)
    except (AffnormError, OSError) as exc:
        code = getattr(exc, "exit_code", 1)
        record = {"error": {"type": type(exc).__name__, "message": str(exc), "exit_code": code}}
        if isinstance(exc, SyntaxErrorWithPosition):
            record["error"].update(line=exc.line, column=exc.column)
        if args.json:
            print(json.dumps(record, indent=2, sort_keys=True))
        else:
            print(f"error: {exc}", file=sys.stderr)
        return code
    out = render(doc, fmt, timings=args.time)
    sys.stdout.write(out if out.endswith("\n") else out + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
