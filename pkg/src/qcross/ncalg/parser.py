"""Expression parser producing free-algebra polynomials.

Grammar (whitespace insignificant):

    expr   := ['-'] term (('+'|'-') term)*
    term   := factor ('*' factor)*
    factor := coeff | gen | factor '^' uint | 'adj(' expr ')' | '(' expr ')'
    coeff  := rational | 'q' | 'qh' | 'p' | 'i'   [optional '^' signed int]

qh denotes q^{1/2}.  Negative exponents are only allowed on scalar
coefficients.  adj() applies the involution letterwise without reducing
to normal form; "K*Kinv" stays a two-letter word until normal_form.
"""

from __future__ import annotations

from fractions import Fraction

from .poly import NCPoly, _LETTER_INDEX
from .presentations import global_star_table


class ParseError(ValueError):
    def __init__(self, message, pos):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


_COEFF_NAMES = ("q", "qh", "p", "i")


def _tokenize(text):
    toks = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in "+-*^()":
            toks.append((ch, ch, i))
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            if j < n and text[j] == "/":
                k = j + 1
                while k < n and text[k].isdigit():
                    k += 1
                if k == j + 1:
                    raise ParseError("missing denominator", j)
                toks.append(("num", Fraction(int(text[i:j]), int(text[j + 1:k])), i))
                i = k
            else:
                toks.append(("num", Fraction(int(text[i:j])), i))
                i = j
            continue
        if ch.isalpha():
            j = i
            while j < n and (text[j].isalnum()):
                j += 1
            toks.append(("name", text[i:j], i))
            i = j
            continue
        raise ParseError(f"unexpected character {ch!r}", i)
    toks.append(("end", None, n))
    return toks


class _Parser:
    def __init__(self, text, ctx, pres=None):
        self.toks = _tokenize(text)
        self.pos = 0
        self.ctx = ctx
        self.star = global_star_table(ctx)
        if pres is None:
            self.letters = set(_LETTER_INDEX)
        else:
            self.letters = set(pres.alphabet)

    def peek(self):
        return self.toks[self.pos]

    def take(self):
        tok = self.toks[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind):
        tok = self.take()
        if tok[0] != kind:
            raise ParseError(f"expected {kind!r}, found {tok[1]!r}", tok[2])
        return tok

    def parse(self) -> NCPoly:
        out = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"trailing input {tok[1]!r}", tok[2])
        return out

    def expr(self) -> NCPoly:
        negate = False
        if self.peek()[0] == "-":
            self.take()
            negate = True
        acc = self.term()
        if negate:
            acc = -acc
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term(self) -> NCPoly:
        acc = self.factor()
        while self.peek()[0] == "*":
            self.take()
            acc = acc * self.factor()
        return acc

    def factor(self) -> NCPoly:
        kind, val, pos = self.take()
        if kind == "num":
            return self._scalar_power(lambda k: self.ctx.scalar(val ** k), pos)
        if kind == "(":
            inner = self.expr()
            self.expect(")")
            return self._word_power(inner, pos)
        if kind == "name":
            if val == "adj":
                self.expect("(")
                inner = self.expr()
                self.expect(")")
                return self._word_power(self._adj(inner), pos)
            if val in _COEFF_NAMES:
                return self._scalar_power(self._coeff_fn(val), pos)
            if val in self.letters:
                return self._word_power(
                    NCPoly.from_word((val,), self.ctx.one()), pos, letter=val)
            raise ParseError(f"unknown generator {val!r}", pos)
        raise ParseError(f"unexpected token {val!r}", pos)

    def _coeff_fn(self, name):
        ctx = self.ctx
        if name == "q":
            return ctx.q_pow
        if name == "qh":
            return ctx.qh_pow
        if name == "p":
            return ctx.p_pow
        # i^k cycles with period 4
        def ipow(k):
            k %= 4
            v = ctx.i_unit()
            if k == 0:
                return ctx.one()
            if k == 1:
                return v
            if k == 2:
                return -ctx.one()
            return -v
        return ipow

    def _exponent(self):
        """Trailing ^int if present; None otherwise."""
        if self.peek()[0] != "^":
            return None
        self.take()
        sign = 1
        if self.peek()[0] == "-":
            self.take()
            sign = -1
        tok = self.expect("num")
        if tok[1].denominator != 1:
            raise ParseError("exponent must be an integer", tok[2])
        return sign * int(tok[1])

    def _scalar_power(self, fn, pos) -> NCPoly:
        k = self._exponent()
        value = fn(1 if k is None else k)
        return NCPoly.from_word((), value)

    def _word_power(self, base: NCPoly, pos, letter=None) -> NCPoly:
        k = self._exponent()
        if k is None:
            return base
        if k < 0:
            what = letter or "a parenthesized factor"
            raise ParseError(
                f"negative power on {what}; only scalar coefficients "
                "may carry negative exponents", pos)
        if letter is not None:
            return NCPoly.from_word((letter,) * k, self.ctx.one())
        acc = NCPoly.from_word((), self.ctx.one())
        for _ in range(k):
            acc = acc * base
        return acc

    def _adj(self, x: NCPoly) -> NCPoly:
        from ..exact import conj_scalar
        out = NCPoly.zero()
        for word, co in x.terms.items():
            new_co = conj_scalar(co)
            new_word = []
            for g in reversed(word):
                g2, s = self.star[g]
                new_word.append(g2)
                new_co = new_co * s
            out = out + NCPoly.from_word(tuple(new_word), new_co)
        return out


def parse(text: str, ctx, pres=None) -> NCPoly:
    """Parse text into a free-algebra polynomial over ctx's scalars."""
    return _Parser(text, ctx, pres).parse()
