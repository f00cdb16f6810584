"""Free-algebra polynomials: formal sums of words in named generators.

NCPoly is presentation-agnostic; multiplication concatenates words.  All
quotient-algebra structure (relations, normal forms, involutions) lives in
the presentation and rewrite modules.  Coefficients are either Exact
values or python complex numbers; the two kinds are never mixed inside
one polynomial.
"""

from __future__ import annotations

from ..exact import Exact, scalar_is_zero, scalar_to_complex

# Every generator name used by any presentation, in display order.  Words
# print with letters in whatever order they actually occur; this ordering
# only fixes how distinct monomials are sorted relative to each other.
MASTER_ORDER = (
    "E", "F", "K", "Kinv", "L", "Linv",
    "X0", "X1", "X2", "Y1",
    "a", "b", "c", "d",
    "z1", "z2", "z1s", "z2s",
    "x1", "x2", "x3",
    "y1", "y2", "y3",
    "R", "Q",
    "x", "xs",
)

_LETTER_INDEX = {name: i for i, name in enumerate(MASTER_ORDER)}


def _word_sort_key(word):
    return (len(word), tuple(_LETTER_INDEX[l] for l in word))


def format_scalar(c) -> str:
    """Human form of a coefficient: exact rationals as fractions, anything
    else as a complex float."""
    if isinstance(c, Exact):
        if c.is_rational():
            return str(c.as_fraction())
        c = c.to_complex()
    c = complex(c)
    if c.imag == 0.0:
        v = c.real
        if v == int(v):
            return str(int(v))
        return repr(v)
    return repr(c).strip("()")


def format_word(word) -> str:
    if not word:
        return "1"
    parts = []
    i = 0
    while i < len(word):
        j = i
        while j < len(word) and word[j] == word[i]:
            j += 1
        parts.append(word[i] if j - i == 1 else f"{word[i]}^{j - i}")
        i = j
    return "*".join(parts)


class NCPoly:
    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = terms if terms is not None else {}

    @staticmethod
    def zero() -> "NCPoly":
        return NCPoly()

    @staticmethod
    def from_word(word, coeff) -> "NCPoly":
        if scalar_is_zero(coeff):
            return NCPoly()
        return NCPoly({tuple(word): coeff})

    @staticmethod
    def one(ctx) -> "NCPoly":
        return NCPoly({(): ctx.one()})

    @staticmethod
    def gen(name, ctx) -> "NCPoly":
        if name not in _LETTER_INDEX:
            raise ValueError(f"unknown generator {name!r}")
        return NCPoly({(name,): ctx.one()})

    def is_zero(self, tol: float = 0.0) -> bool:
        if tol == 0.0:
            return not self.terms
        return all(scalar_is_zero(c, tol) for c in self.terms.values())

    def degree(self) -> int:
        """Highest word length, -1 for the zero polynomial."""
        return max((len(w) for w in self.terms), default=-1)

    def coeff(self, word):
        return self.terms.get(tuple(word))

    def map_coeffs(self, fn) -> "NCPoly":
        out = {}
        for w, c in self.terms.items():
            nc = fn(c)
            if not scalar_is_zero(nc):
                out[w] = nc
        return NCPoly(out)

    def __add__(self, other):
        if not isinstance(other, NCPoly):
            return NotImplemented
        out = dict(self.terms)
        for w, c in other.terms.items():
            cur = out.get(w)
            if cur is None:
                out[w] = c
            else:
                s = cur + c
                if scalar_is_zero(s):
                    del out[w]
                else:
                    out[w] = s
        return NCPoly(out)

    def __neg__(self):
        return NCPoly({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, NCPoly):
            return NotImplemented
        return self + (-other)

    def scale(self, s) -> "NCPoly":
        if scalar_is_zero(s):
            return NCPoly()
        return NCPoly({w: c * s for w, c in self.terms.items()})

    def __mul__(self, other):
        """Free product: concatenation of words, no rewriting."""
        if not isinstance(other, NCPoly):
            return self.scale(other)
        out: dict = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                c = c1 * c2
                cur = out.get(w)
                if cur is None:
                    if not scalar_is_zero(c):
                        out[w] = c
                else:
                    s = cur + c
                    if scalar_is_zero(s):
                        del out[w]
                    else:
                        out[w] = s
        return NCPoly(out)

    def __rmul__(self, other):
        # scalar * poly; poly * poly goes through __mul__
        return self.scale(other)

    def __eq__(self, other):
        if not isinstance(other, NCPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def terms_sorted(self):
        return sorted(self.terms.items(), key=lambda wc: _word_sort_key(wc[0]))

    def to_complex_terms(self) -> dict:
        return {w: scalar_to_complex(c) for w, c in self.terms.items()}

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for w, c in self.terms_sorted():
            cs = format_scalar(c)
            ws = format_word(w)
            if ws == "1":
                parts.append(cs)
            elif cs == "1":
                parts.append(ws)
            elif cs == "-1":
                parts.append(f"-{ws}")
            else:
                if ("+" in cs[1:]) or ("-" in cs[1:]) or "j" in cs:
                    cs = f"({cs})"
                parts.append(f"{cs}*{ws}")
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out


class TensorPoly:
    """Element of (free algebra) tensor (free algebra): coproduct values."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = terms if terms is not None else {}

    @staticmethod
    def from_pair(w1, w2, coeff) -> "TensorPoly":
        if scalar_is_zero(coeff):
            return TensorPoly()
        return TensorPoly({(tuple(w1), tuple(w2)): coeff})

    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            cur = out.get(k)
            if cur is None:
                out[k] = c
            else:
                s = cur + c
                if scalar_is_zero(s):
                    del out[k]
                else:
                    out[k] = s
        return TensorPoly(out)

    def __mul__(self, other):
        out: dict = {}
        for (a1, b1), c1 in self.terms.items():
            for (a2, b2), c2 in other.terms.items():
                k = (a1 + a2, b1 + b2)
                c = c1 * c2
                cur = out.get(k)
                if cur is None:
                    if not scalar_is_zero(c):
                        out[k] = c
                else:
                    s = cur + c
                    if scalar_is_zero(s):
                        del out[k]
                    else:
                        out[k] = s
        return TensorPoly(out)

    def scale(self, s) -> "TensorPoly":
        if scalar_is_zero(s):
            return TensorPoly()
        return TensorPoly({k: c * s for k, c in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, TensorPoly):
            return NotImplemented
        return self.terms == other.terms

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for (w1, w2), c in sorted(
            self.terms.items(),
            key=lambda kc: (_word_sort_key(kc[0][0]), _word_sort_key(kc[0][1])),
        ):
            parts.append(f"{format_scalar(c)}*({format_word(w1)} (x) {format_word(w2)})")
        return " + ".join(parts)
