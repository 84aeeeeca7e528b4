"""Recursive-descent parser for the operator-expression language.

Precedence, tightest first: ``^`` (literal exponent), unary minus, ``* /``,
binary ``+ -``.  Commands sit above expressions; in ``apply A to B`` both
operands are full expressions, so ``apply`` binds loosest.

    program   := statement ((NEWLINE | ';') statement)*
    statement := command | expr
    command   := 'apply' expr 'to' expr ['order' INT] ['twist' expr]
               | 'verify' NAME (NAME '=' ['-'] INT)* ['order' INT]
               | 'expand-at' expr 'point' expr 'order' INT
               | ('pair' | 'omega') expr ',' expr
               | 'report' NAME
    expr      := term (('+' | '-') term)*
    term      := unary (('*' | '/') unary)*
    unary     := '-' unary | power
    power     := primary ['^' exponent]
    exponent  := ['-'] INT | '(' ['-'] INT ['/' INT] ')'
    primary   := INT | ATOM | NAME '[' INT (',' INT)* ']' | NAME '(' args ')' | '(' expr ')'
"""

import re
from fractions import Fraction

from ..errors import DSLSyntaxError, UnknownAtom
from .ast import (
    ATOMS, FUNCTIONS, INDEXED, Apply, Bin, Call, ExpandAt, Indexed, Neg, Num,
    Omega, Pair, Pow, Program, Report, Sym, Verify,
)

__all__ = ["parse", "parse_expr", "tokenize", "Token"]

_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<comment>\#[^\n]*)|(?P<nl>\n)|(?P<int>\d+)"
    r"|(?P<name>expand-at|[A-Za-z_][A-Za-z_0-9]*)|(?P<punct>[-+*/^()\[\],;=])"
)

_COMMANDS = ("apply", "verify", "expand-at", "pair", "omega", "report")
# words that end an expression inside a command
_STOP_WORDS = ("to", "order", "twist", "point")


class Token:
    __slots__ = ("kind", "text", "line", "col")

    def __init__(self, kind, text, line, col):
        self.kind, self.text, self.line, self.col = kind, text, line, col

    def __repr__(self):
        return f"Token({self.kind}, {self.text!r}, {self.line}:{self.col})"


def tokenize(text):
    out = []
    line, line_start, i = 1, 0, 0
    while i < len(text):
        m = _TOKEN_RE.match(text, i)
        col = i - line_start + 1
        if not m:
            raise DSLSyntaxError(f"unexpected character {text[i]!r}", line, col, ["token"])
        kind = m.lastgroup
        if kind == "nl":
            out.append(Token("nl", "\n", line, col))
            line += 1
            line_start = m.end()
        elif kind not in ("ws", "comment"):
            out.append(Token(kind, m.group(), line, col))
        i = m.end()
    col = i - line_start + 1
    out.append(Token("eof", "", line, col))
    return out


class _Parser:
    def __init__(self, text):
        self.toks = tokenize(text)
        self.i = 0

    # token helpers
    @property
    def tok(self):
        return self.toks[self.i]

    def _advance(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def _is(self, text):
        t = self.tok
        return t.kind in ("punct", "name") and t.text == text

    def _error(self, expected):
        t = self.tok
        found = "end of input" if t.kind == "eof" else ("newline" if t.kind == "nl" else repr(t.text))
        exp = sorted(set(expected))
        raise DSLSyntaxError(f"expected {' or '.join(exp)}, found {found}", t.line, t.col, exp)

    def _expect(self, text):
        if not self._is(text):
            self._error([repr(text)])
        return self._advance()

    def _int(self):
        if self.tok.kind != "int":
            self._error(["integer"])
        return int(self._advance().text)

    def _signed_int(self):
        sign = 1
        if self._is("-"):
            self._advance()
            sign = -1
        return sign * self._int()

    def _name(self):
        if self.tok.kind != "name":
            self._error(["name"])
        return self._advance().text

    # program level
    def program(self):
        stmts = []
        while True:
            while self.tok.kind == "nl" or self._is(";"):
                self._advance()
            if self.tok.kind == "eof":
                break
            stmts.append(self.statement())
            if self.tok.kind not in ("nl", "eof") and not self._is(";"):
                self._error(["newline", "';'", "end of input"])
        return Program(tuple(stmts), pos=(1, 1))

    def statement(self):
        t = self.tok
        pos = (t.line, t.col)
        if t.kind == "name" and t.text in _COMMANDS:
            self._advance()
            return getattr(self, "_cmd_" + t.text.replace("-", "_"))(pos)
        return self.expr()

    def _opt_order(self):
        if self._is("order"):
            self._advance()
            return self._int()
        return None

    def _cmd_apply(self, pos):
        op = self.expr()
        self._expect("to")
        target = self.expr()
        order = self._opt_order()
        twist = None
        if self._is("twist"):
            self._advance()
            twist = self.expr()
        return Apply(op, target, order, twist, pos=pos)

    def _cmd_verify(self, pos):
        name = self._name()
        args = []
        while self.tok.kind == "name" and self.tok.text != "order":
            key = self._advance().text
            self._expect("=")
            args.append((key, self._signed_int()))
        return Verify(name, tuple(args), self._opt_order(), pos=pos)

    def _cmd_expand_at(self, pos):
        target = self.expr()
        self._expect("point")
        point = self.expr()
        self._expect("order")
        return ExpandAt(target, point, self._int(), pos=pos)

    def _two(self):
        left = self.expr()
        self._expect(",")
        return left, self.expr()

    def _cmd_pair(self, pos):
        return Pair(*self._two(), pos=pos)

    def _cmd_omega(self, pos):
        return Omega(*self._two(), pos=pos)

    def _cmd_report(self, pos):
        return Report(self._name(), pos=pos)

    # expressions
    def expr(self):
        left = self.term()
        while self._is("+") or self._is("-"):
            t = self._advance()
            left = Bin(t.text, left, self.term(), pos=(t.line, t.col))
        return left

    def term(self):
        left = self.unary()
        while self._is("*") or self._is("/"):
            t = self._advance()
            left = Bin(t.text, left, self.unary(), pos=(t.line, t.col))
        return left

    def unary(self):
        if self._is("-"):
            t = self._advance()
            return Neg(self.unary(), pos=(t.line, t.col))
        return self.power()

    def power(self):
        base = self.primary()
        if self._is("^"):
            t = self._advance()
            return Pow(base, self.exponent(), pos=(t.line, t.col))
        return base

    def exponent(self):
        if self._is("("):
            self._advance()
            num = self._signed_int()
            den = 1
            if self._is("/"):
                self._advance()
                den = self._int()
                if den == 0:
                    t = self.toks[self.i - 1]
                    raise DSLSyntaxError("zero denominator in exponent", t.line, t.col, ["nonzero integer"])
            self._expect(")")
            return Fraction(num, den)
        if self.tok.kind == "int" or self._is("-"):
            return Fraction(self._signed_int())
        self._error(["integer", "'-'", "'('"])

    def primary(self):
        t = self.tok
        pos = (t.line, t.col)
        if t.kind == "int":
            self._advance()
            return Num(int(t.text), pos=pos)
        if self._is("("):
            self._advance()
            inner = self.expr()
            self._expect(")")
            return inner
        is_call = t.kind == "name" and t.text in FUNCTIONS and self.toks[self.i + 1].text == "("
        if t.kind == "name" and (is_call or (t.text not in _COMMANDS and t.text not in _STOP_WORDS)):
            self._advance()
            name = t.text
            if self._is("[") and name in INDEXED:
                self._advance()
                idx = [self._signed_int()]
                while self._is(","):
                    self._advance()
                    idx.append(self._signed_int())
                self._expect("]")
                if len(idx) != INDEXED[name]:
                    raise DSLSyntaxError(f"{name}[...] takes {INDEXED[name]} index(es)", t.line, t.col, ["index"])
                return Indexed(name, tuple(idx), pos=pos)
            if self._is("(") and name in FUNCTIONS:
                self._advance()
                args = [self.expr()]
                while self._is(","):
                    self._advance()
                    args.append(self.expr())
                self._expect(")")
                if len(args) != FUNCTIONS[name]:
                    raise DSLSyntaxError(f"{name}(...) takes {FUNCTIONS[name]} argument(s)", t.line, t.col, ["argument"])
                return Call(name, tuple(args), pos=pos)
            if name in ATOMS:
                return Sym(name, pos=pos)
            if name in INDEXED:
                self._expect("[")
            if name in FUNCTIONS:
                self._expect("(")
            raise UnknownAtom(f"unknown atom {name!r}", t.line, t.col, ATOMS + tuple(INDEXED) + tuple(FUNCTIONS))
        self._error(["integer", "atom", "'('", "'-'"])


def parse(text):
    """Parse a program (one or more statements) into a ``Program`` node."""
    return _Parser(text).program()


def parse_expr(text):
    """Parse a single expression; trailing input is an error."""
    p = _Parser(text)
    node = p.expr()
    if p.tok.kind != "eof":
        p._error(["end of input", "operator"])
    return node
