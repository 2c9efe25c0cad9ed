"""Reader and writer for presentation files.

    # two generators, one relation
    generators: x:1, y:1
    relations: y y; [x,[x,y]] - 2 x y x

Grammar of one relation (juxtaposition is the product)::

    expr   := ['-'] term (('+' | '-') term)*
    term   := factor+
    factor := rational | generator | '(' expr ')' | '[' expr ',' expr ']'

Relations are separated by ',', ';' or a newline outside brackets.
"""
from __future__ import annotations

import re
import warnings
from dataclasses import dataclass
from fractions import Fraction

from .freealg import GeneratorSpec, NCPoly, commutator
from .lcs import Presentation


class ParseError(ValueError):
    def __init__(self, message: str, text: str = "", line: int = 0, col: int = 0):
        self.message, self.line, self.col = message, line, col
        excerpt = ""
        if text and line:
            src = text.splitlines()[line - 1] if line - 1 < len(text.splitlines()) else ""
            excerpt = f"\n  {src}\n  {' ' * (col - 1)}^"
        super().__init__(f"line {line}, column {col}: {message}{excerpt}" if line else message)


class TrivialRelationWarning(UserWarning):
    pass


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>\#[^\n]*)
  | (?P<nl>\n)
  | (?P<num>\d+(?:/\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+()\[\],;:])
""", re.VERBOSE)


def tokenize(text: str) -> list[Token]:
    out = []
    pos, line, start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", text, line, pos - start + 1)
        kind = m.lastgroup
        if kind == "nl":
            out.append(Token("nl", "\n", line, pos - start + 1))
            line += 1
            start = m.end()
        elif kind not in ("ws", "comment"):
            out.append(Token(kind, m.group(), line, pos - start + 1))
        pos = m.end()
    out.append(Token("eof", "", line, pos - start + 1))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0
        self.gens: list[GeneratorSpec] = []
        self.names: dict[str, int] = {}
        self.depth = 0

    # -- token helpers
    def peek(self) -> Token:
        t = self.toks[self.i]
        # newlines are insignificant inside brackets
        while t.kind == "nl" and self.depth:
            self.i += 1
            t = self.toks[self.i]
        return t

    def next(self) -> Token:
        t = self.peek()
        self.i += 1
        return t

    def error(self, msg: str, tok: Token):
        raise ParseError(msg, self.text, tok.line, tok.col)

    def expect(self, text: str) -> Token:
        t = self.next()
        if t.text != text:
            self.error(f"expected {text!r}, found {t.text or 'end of input'!r}", t)
        return t

    def skip_newlines(self):
        while self.peek().kind == "nl":
            self.i += 1

    # -- file level
    def parse(self) -> Presentation:
        relations: list[NCPoly] = []
        seen_gens = False
        self.skip_newlines()
        while self.peek().kind != "eof":
            t = self.next()
            if t.text == "generators":
                self.expect(":")
                self.parse_generators()
                seen_gens = True
            elif t.text == "relations":
                if not seen_gens:
                    self.error("the generators block must come before relations", t)
                self.expect(":")
                relations += self.parse_relations()
            else:
                self.error(f"expected 'generators' or 'relations', found {t.text!r}", t)
            self.skip_newlines()
        if not seen_gens:
            raise ParseError("missing generators block")
        return Presentation(tuple(self.gens), tuple(relations))

    def parse_generators(self):
        while True:
            self.skip_newlines()
            t = self.next()
            if t.kind != "name" or t.text in ("generators", "relations"):
                self.error("expected a generator name", t)
            if t.text in self.names:
                self.error(f"duplicate generator {t.text!r}", t)
            degree = 1
            if self.peek().text == ":":
                self.next()
                dt = self.next()
                if dt.kind != "num" or "/" in dt.text:
                    self.error("generator degree must be a positive integer", dt)
                degree = int(dt.text)
                if degree < 1:
                    self.error(f"generator {t.text!r} has degree {degree}; degrees must be >= 1", dt)
            self.names[t.text] = len(self.gens)
            self.gens.append(GeneratorSpec(t.text, degree))
            if self.peek().text == ",":
                self.next()
                continue
            break

    def parse_relations(self) -> list[NCPoly]:
        out = []
        while True:
            while self.peek().kind == "nl" or self.peek().text in (",", ";"):
                self.next()
            t = self.peek()
            if t.kind == "eof" or t.text in ("generators", "relations"):
                return out
            start = t
            self.top_terms: list[tuple[Token, NCPoly]] = []
            p = self.expr(top=True)
            self.finish_relation(p, start, out)
            nt = self.peek()
            if nt.kind not in ("nl", "eof") and nt.text not in (",", ";"):
                self.error(f"unexpected {nt.text!r}", nt)

    def finish_relation(self, p: NCPoly, start: Token, out: list):
        degs = [g.degree for g in self.gens]
        if not p:
            warnings.warn(
                f"line {start.line}: relation expands to zero and is dropped", TrivialRelationWarning, stacklevel=4
            )
            return
        # degrees in source order, so "x y + y" reports 2 then 1
        found, culprit = [], start
        for tok, term in self.top_terms:
            for w, _ in term:
                d = sum(degs[i] for i in w)
                if d not in found:
                    found.append(d)
                    if len(found) == 2:
                        culprit = tok
        if len(found) > 1:
            self.error("relation is not homogeneous: found degrees " + " and ".join(map(str, found)), culprit)
        if found[0] < 1:
            self.error("relation has degree 0", start)
        out.append(p)

    # -- expressions
    def expr(self, top: bool = False) -> NCPoly:
        sign = 1
        if self.peek().text == "-":
            self.next()
            sign = -1
        elif self.peek().text == "+":
            self.next()
        acc = self._logged_term(top) * sign
        while self.peek().text in ("+", "-"):
            op = self.next().text
            t = self._logged_term(top)
            acc = acc + t if op == "+" else acc - t
        return acc

    def _logged_term(self, top: bool) -> NCPoly:
        tok = self.peek()
        t = self.term()
        if top:
            self.top_terms.append((tok, t))
        return t

    def term(self) -> NCPoly:
        t = self.peek()
        if not self.starts_factor(t):
            self.error(f"expected a term, found {t.text or 'end of input'!r}", t)
        acc = self.factor()
        while self.starts_factor(self.peek()):
            acc = acc * self.factor()
        return acc

    @staticmethod
    def starts_factor(t: Token) -> bool:
        return t.kind in ("num", "name") or t.text in ("(", "[")

    def factor(self) -> NCPoly:
        t = self.next()
        if t.kind == "num":
            a, _, b = t.text.partition("/")
            if b and int(b) == 0:
                self.error("zero denominator", t)
            return NCPoly.one() * Fraction(int(a), int(b) if b else 1)
        if t.kind == "name":
            if t.text not in self.names:
                self.error(f"unknown generator {t.text!r}", t)
            return NCPoly.gen(self.names[t.text])
        if t.text == "(":
            self.depth += 1
            e = self.expr()
            self.expect(")")
            self.depth -= 1
            return e
        if t.text == "[":
            self.depth += 1
            a = self.expr()
            self.expect(",")
            b = self.expr()
            self.expect("]")
            self.depth -= 1
            return commutator(a, b)
        self.error(f"unexpected {t.text!r}", t)


def parse_presentation(text: str) -> Presentation:
    return _Parser(text).parse()


def load_presentation(path) -> Presentation:
    with open(path, encoding="utf-8") as fh:
        return parse_presentation(fh.read())


def format_presentation(P: Presentation) -> str:
    lines = ["generators: " + ", ".join(f"{g.name}:{g.degree}" for g in P.generators)]
    if P.relations:
        lines.append("relations: " + "; ".join(r.format(P.names) for r in P.relations))
    return "\n".join(lines) + "\n"
