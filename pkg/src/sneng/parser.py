"""Surface language: lexer and parser.

Commands end in one of three terminators:

    wff.    assert as hypothesis
    wff!    assert and chain forward
    wff?    query (backward, with acting fallback)

Grammar (one command per line; `;` starts a comment):

    wff     := entail
    entail  := prefix ("=>" entail)?                       right-associative
    prefix  := "~" prefix | primary
    primary := "(" wff ")"
             | "{" wffs "}" ("&=>" | "v=>") "{" wffs "}"
             | "and" "{" wffs "}"                          sugar: andor(n,n)
             | "or" "{" wffs "}"                           sugar: andor(1,n)
             | "andor" "(" INT "," INT ")" "{" wffs "}"
             | "thresh" "(" INT "," INT ")" "{" wffs "}"
             | "all" "(" idents ")" "(" wff ")"
             | IDENT [ "(" wffs ")" ]

`and`, `or`, `andor`, `thresh`, `all` are reserved.  An identifier denotes a
variable when it is bound by an enclosing `all`; in queries, an identifier
that is not an already-known atom also reads as a (free) query variable.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .terms import TermId, TermStore

RESERVED = {"and", "or", "andor", "thresh", "all"}

_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9_]*")
_INT = re.compile(r"\d+")


class ParseError(Exception):
    def __init__(self, line: int, col: int, message: str):
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col
        self.reason = message


@dataclass(frozen=True)
class Token:
    type: str  # IDENT INT PUNCT ARROW EOF
    value: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == ";":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if text.startswith("&=>", i):
            tokens.append(Token("ARROW", "&=>", line, col))
            i += 3
            col += 3
            continue
        if text.startswith("v=>", i):
            tokens.append(Token("ARROW", "v=>", line, col))
            i += 3
            col += 3
            continue
        if text.startswith("=>", i):
            tokens.append(Token("ARROW", "=>", line, col))
            i += 2
            col += 2
            continue
        if ch in "(){},.!?~":
            tokens.append(Token("PUNCT", ch, line, col))
            i += 1
            col += 1
            continue
        m = _IDENT.match(text, i)
        if m:
            tokens.append(Token("IDENT", m.group(0), line, col))
            col += m.end() - i
            i = m.end()
            continue
        m = _INT.match(text, i)
        if m:
            tokens.append(Token("INT", m.group(0), line, col))
            col += m.end() - i
            i = m.end()
            continue
        raise ParseError(line, col, f"unexpected character {ch!r}")
    tokens.append(Token("EOF", "", line, col))
    return tokens


@dataclass(frozen=True)
class Command:
    kind: str  # "assert" | "assert_forward" | "query"
    term: TermId
    text: str


class _Parser:
    def __init__(self, store: TermStore, tokens: list[Token], query: bool):
        self.store = store
        self.tokens = tokens
        self.pos = 0
        self.query = query
        self.bound: list[dict[str, TermId]] = []

    # -- token plumbing ------------------------------------------------------

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, type_: str, value: str | None = None) -> Token:
        tok = self.peek()
        if tok.type != type_ or (value is not None and tok.value != value):
            want = value if value is not None else type_
            got = tok.value if tok.type != "EOF" else "end of input"
            raise ParseError(tok.line, tok.col, f"expected {want!r}, found {got!r}")
        return self.next()

    def fail(self, message: str):
        tok = self.peek()
        raise ParseError(tok.line, tok.col, message)

    # -- grammar ---------------------------------------------------------------

    def wff(self) -> TermId:
        return self.entail()

    def entail(self) -> TermId:
        lhs = self.prefix()
        tok = self.peek()
        if tok.type == "ARROW" and tok.value == "=>":
            self.next()
            rhs = self.entail()
            return self.store.or_entail((lhs,), (rhs,))
        return lhs

    def prefix(self) -> TermId:
        tok = self.peek()
        if tok.type == "PUNCT" and tok.value == "~":
            self.next()
            return self.store.negation_of(self.prefix())
        return self.primary()

    def primary(self) -> TermId:
        tok = self.peek()
        if tok.type == "PUNCT" and tok.value == "(":
            self.next()
            inner = self.wff()
            self.expect("PUNCT", ")")
            return inner
        if tok.type == "PUNCT" and tok.value == "{":
            lhs = self.braced_list()
            arrow = self.peek()
            if arrow.type != "ARROW" or arrow.value not in ("&=>", "v=>"):
                self.fail("expected '&=>' or 'v=>' after antecedent set")
            self.next()
            rhs = self.braced_list()
            if arrow.value == "&=>":
                return self.store.and_entail(lhs, rhs)
            return self.store.or_entail(lhs, rhs)
        if tok.type == "IDENT":
            if tok.value in ("and", "or"):
                self.next()
                members = self.braced_list()
                if tok.value == "and":
                    return self.store.andor(len(set(members)), len(set(members)), members)
                return self.store.andor(1, len(set(members)), members)
            if tok.value in ("andor", "thresh"):
                self.next()
                self.expect("PUNCT", "(")
                low = int(self.expect("INT").value)
                self.expect("PUNCT", ",")
                high = int(self.expect("INT").value)
                self.expect("PUNCT", ")")
                members = self.braced_list()
                try:
                    if tok.value == "andor":
                        return self.store.andor(low, high, members)
                    return self.store.thresh(low, high, members)
                except ValueError as exc:
                    raise ParseError(tok.line, tok.col, str(exc)) from None
            if tok.value == "all":
                return self.quantified()
            return self.application()
        self.fail("expected a wff")

    def braced_list(self) -> list[TermId]:
        self.expect("PUNCT", "{")
        items = [self.wff()]
        while self.peek().type == "PUNCT" and self.peek().value == ",":
            self.next()
            items.append(self.wff())
        self.expect("PUNCT", "}")
        return items

    def quantified(self) -> TermId:
        self.expect("IDENT", "all")
        self.expect("PUNCT", "(")
        names = [self.ident_name()]
        while self.peek().type == "PUNCT" and self.peek().value == ",":
            self.next()
            names.append(self.ident_name())
        self.expect("PUNCT", ")")
        scope = {name: self.store.variable(name) for name in names}
        self.bound.append(scope)
        try:
            self.expect("PUNCT", "(")
            body = self.wff()
            self.expect("PUNCT", ")")
        finally:
            self.bound.pop()
        return self.store.forall(tuple(scope[n] for n in names), body)

    def ident_name(self) -> str:
        tok = self.expect("IDENT")
        if tok.value in RESERVED:
            raise ParseError(tok.line, tok.col, f"{tok.value!r} is a reserved word")
        return tok.value

    def application(self) -> TermId:
        tok = self.expect("IDENT")
        if tok.value in RESERVED:
            raise ParseError(tok.line, tok.col, f"{tok.value!r} is a reserved word")
        name = tok.value
        for scope in reversed(self.bound):
            if name in scope:
                return scope[name]
        if self.peek().type == "PUNCT" and self.peek().value == "(":
            self.next()
            args = [self.wff()]
            while self.peek().type == "PUNCT" and self.peek().value == ",":
                self.next()
                args.append(self.wff())
            self.expect("PUNCT", ")")
            return self.store.intern(name, args)
        if self.query and not self.store.has_atom(name):
            return self.store.variable(name)
        return self.store.atom(name)


def parse_wff(store: TermStore, text: str, query: bool = False) -> TermId:
    parser = _Parser(store, tokenize(text), query=query)
    term = parser.wff()
    parser.expect("EOF")
    return term


def parse_command(store: TermStore, text: str) -> Command:
    """One command: a wff plus its terminator. Raises ParseError otherwise."""
    tokens = tokenize(text)
    if tokens[0].type == "EOF":
        raise ParseError(tokens[0].line, tokens[0].col, "empty command")
    if len(tokens) >= 2 and tokens[-2].type == "PUNCT" and tokens[-2].value in ".!?":
        kind = {".": "assert", "!": "assert_forward", "?": "query"}[tokens[-2].value]
        parser = _Parser(store, tokens[:-2] + [tokens[-1]], query=kind == "query")
        term = parser.wff()
        parser.expect("EOF")
        return Command(kind=kind, term=term, text=text.strip())
    # no terminator in final position: parse anyway for a precise error location
    parser = _Parser(store, tokens, query=False)
    parser.wff()
    tok = parser.peek()
    if tok.type == "PUNCT" and tok.value in ".!?":
        parser.next()
        parser.expect("EOF")
    parser.fail("expected '.', '!' or '?' to end the command")
