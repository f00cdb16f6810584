"""Exact scalar arithmetic over Q(i) extended by square roots of rationals.

A value is a finite sum  sum_D c_D * sqrt(D)  where each key D is a
square-free positive integer (D = 1 carries the rational part) and each
coefficient c_D is a Gaussian rational.  sqrt() pulls the square part out
of its radicand by trial division, and products fold through
sqrt(D1)*sqrt(D2) = g*sqrt((D1/g)*(D2/g)) with g = gcd(D1, D2), which
keeps every key square-free.  Equal keys then mean equal radicands, so
cancellation in sums is exact: zero detection never misreports a nonzero
value, and it recognizes every zero whose radicands have no square prime
factor above the trial division bound.  This matters for identities like
sqrt(1-q^2m) * sqrt(1+q^2m) = sqrt(1-q^4m), which hold on the nose here
regardless of how each side was spelled.
"""

from __future__ import annotations

import math
from fractions import Fraction

_F0 = Fraction(0)
_F1 = Fraction(1)

# square factors with a prime above this bound stay inside the radicand;
# the bound covers the known Wieferich primes (1093, 3511), so b^n -+ a^n
# radicands reduce fully in practice
_TRIAL_BOUND = 10_000

_trial_primes: list | None = None
_sqfree_cache: dict = {}
_float_key_cache: dict = {}


def _primes_upto(n: int):
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p::p] = bytearray(len(sieve[p * p::p]))
    return [p for p in range(2, n + 1) if sieve[p]]


def _square_free(R: int):
    """Split a positive integer as (s, D) with R = s*s*D, D square-free."""
    cached = _sqfree_cache.get(R)
    if cached is not None:
        return cached
    r = math.isqrt(R)
    if r * r == R:
        out = (r, 1)
        _sqfree_cache[R] = out
        return out
    global _trial_primes
    if _trial_primes is None:
        _trial_primes = _primes_upto(_TRIAL_BOUND)
    s, d = 1, R
    for p in _trial_primes:
        p2 = p * p
        if p2 > d:
            break
        while d % p2 == 0:
            d //= p2
            s *= p
    r = math.isqrt(d)
    if r * r == d:
        s *= r
        d = 1
    out = (s, d)
    _sqfree_cache[R] = out
    return out


def _float_sqrt(D: int) -> float:
    if D.bit_length() <= 1000:
        return math.sqrt(D)
    h = (D.bit_length() - 1000) // 2 + 1
    return math.ldexp(math.sqrt(D >> (2 * h)), h)


def _key_mul(k1: int, k2: int):
    """Multiply two square-free radicands; returns (key, rational fold)."""
    if k1 == 1:
        return k2, 1
    if k2 == 1:
        return k1, 1
    g = math.gcd(k1, k2)
    if g == 1:
        return k1 * k2, 1
    return (k1 // g) * (k2 // g), g


class Exact:
    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = terms if terms is not None else {}

    # construction

    @staticmethod
    def rational(x) -> "Exact":
        x = Fraction(x)
        if x == 0:
            return Exact()
        return Exact({1: (x, _F0)})

    @staticmethod
    def gauss(re, im) -> "Exact":
        re, im = Fraction(re), Fraction(im)
        if re == 0 and im == 0:
            return Exact()
        return Exact({1: (re, im)})

    @staticmethod
    def i() -> "Exact":
        return Exact({1: (_F0, _F1)})

    @staticmethod
    def sqrt(r) -> "Exact":
        """Square root of a nonnegative rational in canonical form."""
        r = Fraction(r)
        if r < 0:
            raise ValueError("sqrt of a negative rational is not supported")
        if r == 0:
            return Exact()
        # sqrt(n/d) = sqrt(n*d)/d, then extract the square part of n*d
        s, D = _square_free(r.numerator * r.denominator)
        co = Fraction(s, r.denominator)
        return Exact({D: (co, _F0)})

    @staticmethod
    def _coerce(x) -> "Exact":
        if isinstance(x, Exact):
            return x
        if isinstance(x, (int, Fraction)):
            return Exact.rational(x)
        raise TypeError(f"cannot mix Exact with {type(x).__name__}")

    # queries

    def is_zero(self) -> bool:
        return not self.terms

    def is_rational(self) -> bool:
        if not self.terms:
            return True
        if len(self.terms) != 1:
            return False
        (key, (re, im)), = self.terms.items()
        return key == 1 and im == 0

    def as_fraction(self) -> Fraction:
        if not self.terms:
            return _F0
        if not self.is_rational():
            raise ValueError(f"not a rational value: {self!r}")
        return self.terms[1][0]

    def to_complex(self) -> complex:
        acc = 0j
        for key, (re, im) in self.terms.items():
            f = _float_key_cache.get(key)
            if f is None:
                f = _float_sqrt(key)
                _float_key_cache[key] = f
            acc += complex(re, im) * f
        return acc

    # arithmetic

    def __add__(self, other):
        other = Exact._coerce(other)
        if not self.terms:
            return other
        if not other.terms:
            return self
        out = dict(self.terms)
        for key, (re, im) in other.terms.items():
            cur = out.get(key)
            if cur is None:
                out[key] = (re, im)
            else:
                nre, nim = cur[0] + re, cur[1] + im
                if nre == 0 and nim == 0:
                    del out[key]
                else:
                    out[key] = (nre, nim)
        return Exact(out)

    __radd__ = __add__

    def __neg__(self):
        return Exact({k: (-re, -im) for k, (re, im) in self.terms.items()})

    def __sub__(self, other):
        return self + (-Exact._coerce(other))

    def __rsub__(self, other):
        return Exact._coerce(other) + (-self)

    def __mul__(self, other):
        other = Exact._coerce(other)
        if not self.terms or not other.terms:
            return Exact()
        out: dict = {}
        for k1, (a, b) in self.terms.items():
            for k2, (c, d) in other.terms.items():
                key, fold = _key_mul(k1, k2)
                re = (a * c - b * d) * fold
                im = (a * d + b * c) * fold
                cur = out.get(key)
                if cur is None:
                    if re != 0 or im != 0:
                        out[key] = (re, im)
                else:
                    nre, nim = cur[0] + re, cur[1] + im
                    if nre == 0 and nim == 0:
                        del out[key]
                    else:
                        out[key] = (nre, nim)
        return Exact(out)

    __rmul__ = __mul__

    def inverse(self) -> "Exact":
        if len(self.terms) != 1:
            raise ValueError("can only invert single-radical Exact values")
        (key, (re, im)), = self.terms.items()
        norm = re * re + im * im
        # 1/(c*sqrt(D)) = conj(c)/(|c|^2 * D) * sqrt(D)
        return Exact({key: (re / (norm * key), -im / (norm * key))})

    def __truediv__(self, other):
        return self * Exact._coerce(other).inverse()

    def __rtruediv__(self, other):
        return Exact._coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise TypeError("Exact powers must be integers")
        if n < 0:
            return self.inverse() ** (-n)
        acc = Exact.rational(1)
        base = self
        while n:
            if n & 1:
                acc = acc * base
            base = base * base
            n >>= 1
        return acc

    def conjugate(self) -> "Exact":
        return Exact({k: (re, -im) for k, (re, im) in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Exact.rational(other)
        if not isinstance(other, Exact):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        if not self.terms:
            return "Exact(0)"
        parts = []
        for key in sorted(self.terms):
            re, im = self.terms[key]
            if im == 0:
                c = str(re)
            elif re == 0:
                c = f"{im}*i"
            else:
                c = f"({re}{'+' if im > 0 else '-'}{abs(im)}*i)"
            if key != 1:
                rad = f"sqrt({key})"
                parts.append(f"{c}*{rad}" if c != "1" else rad)
            else:
                parts.append(c)
        return "Exact(" + " + ".join(parts) + ")"


# mode-agnostic helpers: the polynomial and matrix layers call these so the
# same code runs on Exact coefficients and on python complex numbers.

def conj_scalar(x):
    if isinstance(x, Exact):
        return x.conjugate()
    return x.conjugate() if isinstance(x, complex) else x


def scalar_to_complex(x) -> complex:
    if isinstance(x, Exact):
        return x.to_complex()
    return complex(x)


def scalar_is_zero(x, tol: float = 0.0) -> bool:
    if isinstance(x, Exact):
        return x.is_zero()
    return abs(x) <= tol
