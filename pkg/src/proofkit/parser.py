"""Text-to-AST parsing for formulas, sequents, commands and Hoare triples.

Positions are 1-based (line, column). Operators are accepted in Unicode and
ASCII spellings; see docs/grammar.md for the normative grammar. Parsing a
goal also validates that every name plays a single role (predicate, function
or term variable) with a single arity.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from . import pretty
from .syntax import (And, Assign, BinArith, Command, Exists, Falsity, Forall, Formula, FunApp,
                     HoareTriple, If, Implies, IntLit, Not, Or, PredApp, RelAtom, Seq, Sequent,
                     Skip, Term, Truth, Var, While, signature_conflicts)


class ParseError(Exception):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.message = message
        self.line = line
        self.column = column


@dataclass(frozen=True)
class ParseOutcome:
    """Result of parse_preview: either an AST with its canonical text, or a
    positioned error."""

    ast: object | None = None
    canonical: str | None = None
    error: str | None = None
    line: int = 0
    column: int = 0

    @property
    def ok(self) -> bool:
        return self.error is None


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    line: int
    col: int


_TWO_CHAR = {
    "|-": "TURNSTILE", "/\\": "AND", "\\/": "OR", "&&": "AND", "||": "OR",
    "=>": "IMPLIES", "->": "IMPLIES", "<=": "LE", ">=": "GE", ":=": "ASSIGN",
}
_ONE_CHAR = {
    "⊢": "TURNSTILE", "∧": "AND", "∨": "OR", "⇒": "IMPLIES",
    "¬": "NOT", "~": "NOT", "!": "NOT", "∀": "FORALL", "∃": "EXISTS",
    "⊤": "TRUE", "⊥": "FALSE",
    "=": "EQ", "<": "LT", "≤": "LE", ">": "GT", "≥": "GE",
    "+": "PLUS", "-": "MINUS", "−": "MINUS", "*": "TIMES", "×": "TIMES",
    "(": "LPAREN", ")": "RPAREN", ",": "COMMA", ".": "DOT",
    "{": "LBRACE", "}": "RBRACE", ";": "SEMI",
}
_KEYWORDS = {
    "forall": "FORALL", "exists": "EXISTS", "true": "TRUE", "false": "FALSE",
    "skip": "SKIP", "if": "IF", "then": "THEN", "else": "ELSE", "end": "END",
    "while": "WHILE", "do": "DO",
}
_REL_TOKENS = {"EQ": "=", "LT": "<", "LE": "<=", "GT": ">", "GE": ">="}
_ADD_TOKENS = {"PLUS": "+", "MINUS": "-"}


def _lex(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if c.isspace():
            i += 1
            col += 1
            continue
        two = text[i:i + 2]
        if two in _TWO_CHAR:
            toks.append(_Tok(_TWO_CHAR[two], two, line, col))
            i += 2
            col += 2
            continue
        if c in _ONE_CHAR:
            toks.append(_Tok(_ONE_CHAR[c], c, line, col))
            i += 1
            col += 1
            continue
        if c.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(_Tok("INT", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if c.isalpha() and c.isascii():
            j = i
            while j < n and (text[j].isascii() and (text[j].isalnum() or text[j] == "_")):
                j += 1
            word = text[i:j]
            toks.append(_Tok(_KEYWORDS.get(word, "IDENT"), word, line, col))
            col += j - i
            i = j
            continue
        raise ParseError(f"unexpected character {c!r}", line, col)
    toks.append(_Tok("EOF", "", line, col))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _lex(text)
        self.i = 0

    # -- plumbing -----------------------------------------------------------

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def advance(self) -> _Tok:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def at(self, kind: str) -> bool:
        return self.toks[self.i].kind == kind

    def accept(self, kind: str) -> Optional[_Tok]:
        if self.at(kind):
            return self.advance()
        return None

    def expect(self, kind: str, what: str) -> _Tok:
        if self.at(kind):
            return self.advance()
        self.fail(f"expected {what}")

    def fail(self, message: str):
        tok = self.peek()
        shown = f", found {tok.text!r}" if tok.kind != "EOF" else ", found end of input"
        raise ParseError(message + shown, tok.line, tok.col)

    def expect_eof(self):
        if not self.at("EOF"):
            self.fail("unexpected trailing input")

    # -- formulas -----------------------------------------------------------

    def formula(self) -> Formula:
        lhs = self.or_level()
        if self.accept("IMPLIES"):
            return Implies(lhs, self.formula())  # right-associative
        return lhs

    def or_level(self) -> Formula:
        f = self.and_level()
        while self.accept("OR"):
            f = Or(f, self.and_level())
        return f

    def and_level(self) -> Formula:
        f = self.unary()
        while self.accept("AND"):
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        if self.accept("NOT"):
            return Not(self.unary())
        if self.at("FORALL") or self.at("EXISTS"):
            quant = self.advance()
            name = self.expect("IDENT", "a variable name after the quantifier").text
            self.expect("DOT", "'.' after the quantified variable")
            body = self.formula()  # body extends maximally right
            return Forall(name, body) if quant.kind == "FORALL" else Exists(name, body)
        return self.atom()

    def atom(self) -> Formula:
        if self.accept("TRUE"):
            return Truth()
        if self.accept("FALSE"):
            return Falsity()
        tok = self.peek()
        if tok.kind not in ("IDENT", "INT", "LPAREN"):
            self.fail("expected a formula")
        start = self.i
        try:
            return self.relational_or_atom()
        except ParseError as term_err:
            if tok.kind != "LPAREN":
                raise
            # '(' may instead open a parenthesized formula
            self.i = start
            try:
                self.advance()
                f = self.formula()
                self.expect("RPAREN", "')'")
                return f
            except ParseError as formula_err:
                raise _farthest(term_err, formula_err) from None

    def relational_or_atom(self) -> Formula:
        left = self.term()
        tok = self.peek()
        if tok.kind in _REL_TOKENS:
            self.advance()
            return RelAtom(_REL_TOKENS[tok.kind], left, self.term())
        match left:
            case Var(name):
                return PredApp(name, ())
            case FunApp(name, args):
                return PredApp(name, args)
        self.fail("expected a relational operator after this term")

    # -- terms --------------------------------------------------------------

    def term(self) -> Term:
        t = self.term_mul()
        while self.peek().kind in _ADD_TOKENS:
            op = _ADD_TOKENS[self.advance().kind]
            t = BinArith(op, t, self.term_mul())
        return t

    def term_mul(self) -> Term:
        t = self.term_atom()
        while self.accept("TIMES"):
            t = BinArith("*", t, self.term_atom())
        return t

    def term_atom(self) -> Term:
        tok = self.peek()
        if tok.kind == "INT":
            self.advance()
            return IntLit(int(tok.text))
        if tok.kind == "IDENT":
            self.advance()
            if self.accept("LPAREN"):
                args = [self.term()]
                while self.accept("COMMA"):
                    args.append(self.term())
                self.expect("RPAREN", "')'")
                return FunApp(tok.text, tuple(args))
            return Var(tok.text)
        if tok.kind == "LPAREN":
            self.advance()
            t = self.term()
            self.expect("RPAREN", "')'")
            return t
        self.fail("expected a term")

    # -- sequents -------------------------------------------------------------

    def sequent(self) -> Sequent:
        left: list[Formula] = []
        if not self.at("TURNSTILE"):
            left.append(self.formula())
            while self.accept("COMMA"):
                left.append(self.formula())
        self.expect("TURNSTILE", "'⊢' or '|-'")
        right: list[Formula] = []
        if not self.at("EOF"):
            right.append(self.formula())
            while self.accept("COMMA"):
                right.append(self.formula())
        return Sequent(tuple(left), tuple(right))

    # -- commands and triples --------------------------------------------------

    def command(self) -> Command:
        first = self.simple_command()
        if self.accept("SEMI"):
            return Seq(first, self.command())  # right-associative
        return first

    def simple_command(self) -> Command:
        tok = self.peek()
        if tok.kind == "SKIP":
            self.advance()
            return Skip()
        if tok.kind == "IDENT":
            self.advance()
            self.expect("ASSIGN", "':=' after the assignment target")
            return Assign(tok.text, self.term())
        if tok.kind == "IF":
            self.advance()
            cond = self.condition()
            self.expect("THEN", "'then'")
            then = self.command()
            self.expect("ELSE", "'else'")
            els = self.command()
            self.expect("END", "'end'")
            return If(cond, then, els)
        if tok.kind == "WHILE":
            self.advance()
            cond = self.condition()
            self.expect("DO", "'do'")
            body = self.command()
            self.expect("END", "'end'")
            return While(cond, body)
        self.fail("expected a command")

    def condition(self) -> Formula:
        tok = self.peek()
        cond = self.formula()
        if _has_quantifier(cond):
            raise ParseError("quantifiers are not allowed in a command condition",
                             tok.line, tok.col)
        return cond

    def triple(self) -> HoareTriple:
        self.expect("LBRACE", "'{'")
        pre = self.formula()
        self.expect("RBRACE", "'}'")
        command = self.command()
        self.expect("LBRACE", "'{'")
        post = self.formula()
        self.expect("RBRACE", "'}'")
        return HoareTriple(pre, command, post)


def _has_quantifier(f: Formula) -> bool:
    match f:
        case Forall() | Exists():
            return True
        case Not(b):
            return _has_quantifier(b)
        case And(l, r) | Or(l, r) | Implies(l, r):
            return _has_quantifier(l) or _has_quantifier(r)
        case _:
            return False


def _farthest(a: ParseError, b: ParseError) -> ParseError:
    return a if (a.line, a.column) >= (b.line, b.column) else b


def _validate(ast, toks: list[_Tok]):
    conflicts = signature_conflicts(ast)
    if not conflicts:
        return
    name = conflicts[0].split(" ", 1)[0]
    pos = next(((t.line, t.col) for t in toks if t.text == name), (1, 1))
    raise ParseError(conflicts[0], pos[0], pos[1])


def _run(text: str, production: str):
    p = _Parser(text)
    ast = getattr(p, production)()
    p.expect_eof()
    _validate(ast, p.toks)
    return ast


def parse_sequent(text: str) -> Sequent:
    return _run(text, "sequent")


def parse_hoare_triple(text: str) -> HoareTriple:
    return _run(text, "triple")


def parse_formula(text: str) -> Formula:
    return _run(text, "formula")


def parse_term(text: str) -> Term:
    return _run(text, "term")


_KIND_PARSERS = {
    "sequent": parse_sequent,
    "triple": parse_hoare_triple,
    "formula": parse_formula,
    "term": parse_term,
}


def parse_preview(text: str, kind: str) -> ParseOutcome:
    """Per-keystroke parse: never raises, reports the first error positioned."""
    if kind not in _KIND_PARSERS:
        raise ValueError(f"unknown parse kind {kind!r}")
    try:
        ast = _KIND_PARSERS[kind](text)
    except ParseError as e:
        return ParseOutcome(error=e.message, line=e.line, column=e.column)
    return ParseOutcome(ast=ast, canonical=pretty.pp(ast))
