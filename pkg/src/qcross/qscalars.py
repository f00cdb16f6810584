"""Deformation-parameter context and the basic q-scalar functions.

Everything downstream receives a QContext carrying the deformation
parameter q in (0,1), the second parameter p > 0, p != 1, and the
arithmetic mode.  In exact mode q and p are rationals and scalars are
Exact values (Gaussian rationals extended by square roots), so q**(1/2)
and gamma = (q+1/q)**(1/2) are represented exactly.  In float mode
scalars are python complex numbers.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from typing import Union

from .exact import Exact

HalfInt = Union[int, Fraction]

ZETA_MAX_TERMS = 10000


def _as_half_integer(x, what: str) -> Fraction:
    """Coerce to a Fraction with denominator 1 or 2."""
    if isinstance(x, float):
        fx = Fraction(x).limit_denominator(2)
        if abs(fx - x) > 1e-9:
            raise ValueError(f"{what} must be a half-integer, got {x}")
        x = fx
    x = Fraction(x)
    if x.denominator not in (1, 2):
        raise ValueError(f"{what} must be a half-integer, got {x}")
    return x


class QContext:
    """Arithmetic context: q, p, mode and tolerance.

    Exactly one of q or q_sqrt must be given.  In exact mode both q and p
    must be rational; q_sqrt is then kept as an exact square root.
    """

    def __init__(self, q=None, q_sqrt=None, p=Fraction(3, 4),
                 mode: str = "exact", tol: float = 1e-12):
        if mode not in ("exact", "float"):
            raise ValueError(f"unknown mode {mode!r}")
        if (q is None) == (q_sqrt is None):
            raise ValueError("give exactly one of q or q_sqrt")
        self.mode = mode
        self.tol = float(tol)
        if mode == "exact":
            if q_sqrt is not None:
                q_sqrt = Fraction(q_sqrt)
                q = q_sqrt * q_sqrt
                self.q = q
                self.q_sqrt = Exact.rational(q_sqrt)
            else:
                self.q = Fraction(q)
                self.q_sqrt = Exact.sqrt(self.q)
            self.p = Fraction(p)
            if not (0 < self.q < 1):
                raise ValueError(f"q must lie in (0,1), got {self.q}")
            if self.p <= 0 or self.p == 1:
                raise ValueError(f"p must be positive and != 1, got {self.p}")
            self.lam = self.q - 1 / self.q
        else:
            if q_sqrt is not None:
                q_sqrt = float(q_sqrt)
                self.q = q_sqrt * q_sqrt
                self.q_sqrt = q_sqrt
            else:
                self.q = float(q)
                self.q_sqrt = math.sqrt(self.q)
            self.p = float(p)
            if not (0.0 < self.q < 1.0):
                raise ValueError(f"q must lie in (0,1), got {self.q}")
            if self.p <= 0.0 or self.p == 1.0:
                raise ValueError(f"p must be positive and != 1, got {self.p}")
            self.lam = self.q - 1.0 / self.q
        self._pres_cache: dict = {}

    # scalar constructors

    def zero(self):
        return Exact() if self.mode == "exact" else 0j

    def one(self):
        return Exact.rational(1) if self.mode == "exact" else (1 + 0j)

    def scalar(self, x):
        """Lift a rational (or complex, float mode) to a mode scalar."""
        if self.mode == "exact":
            if isinstance(x, Exact):
                return x
            if isinstance(x, complex):
                raise TypeError("complex literals need float mode")
            return Exact.rational(x)
        if isinstance(x, Exact):
            return x.to_complex()
        if isinstance(x, Fraction):
            return complex(x.numerator / x.denominator)
        return complex(x)

    def i_unit(self):
        return Exact.i() if self.mode == "exact" else 1j

    def q_pow(self, k: int):
        if self.mode == "exact":
            return Exact.rational(self.q ** k)
        return complex(self.q ** k)

    def qh_pow(self, k: int):
        """q**(k/2) for integer k."""
        if self.mode == "exact":
            half = self.q_sqrt if k % 2 else Exact.rational(1)
            return Exact.rational(self.q ** (k // 2)) * half
        return complex(self.q ** (k / 2.0))

    def p_pow(self, k: int):
        if self.mode == "exact":
            return Exact.rational(self.p ** k)
        return complex(self.p ** k)

    def sqrt_scalar(self, r):
        """Mode square root of a nonnegative rational."""
        if self.mode == "exact":
            return Exact.sqrt(Fraction(r))
        return complex(math.sqrt(float(r)))

    def lam_inv(self):
        if self.mode == "exact":
            return Exact.rational(1 / self.lam)
        return complex(1.0 / self.lam)

    def gamma(self):
        """(q + 1/q)**(1/2), built as (1/q)*sqrt(q)*sqrt(1+q^2) in exact mode."""
        if self.mode == "exact":
            return Exact.rational(1 / self.q) * self.q_sqrt * Exact.sqrt(1 + self.q ** 2)
        return complex(math.sqrt(self.q + 1.0 / self.q))

    def one_plus_q2_invsqrt(self):
        """(1 + q^2)**(-1/2)."""
        if self.mode == "exact":
            return Exact.rational(Fraction(1, 1) / (1 + self.q ** 2)) * Exact.sqrt(1 + self.q ** 2)
        return complex(1.0 / math.sqrt(1.0 + self.q ** 2))

    def __repr__(self):
        return f"QContext(q={self.q}, p={self.p}, mode={self.mode!r})"


def q_number(ctx: QContext, k) -> object:
    """[k]_q = (q^k - q^-k)/(q - q^-1) for half-integer k.

    Exact mode returns a Fraction for integer k and an Exact value for
    half-odd k; float mode returns a float.
    """
    k = _as_half_integer(k, "k")
    if ctx.mode == "float":
        q = ctx.q
        return (q ** float(k) - q ** float(-k)) / (q - 1.0 / q)
    two_k = int(2 * k)
    if two_k % 2 == 0:
        m = two_k // 2
        return (ctx.q ** m - ctx.q ** (-m)) / ctx.lam
    val = (ctx.qh_pow(two_k) - ctx.qh_pow(-two_k)) * Exact.rational(1 / ctx.lam)
    return val


def lambda_n(ctx: QContext, n: int) -> float:
    """(1 - q^(2n))^(1/2) as a float; the square is exact via lambda_n_sq."""
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    return math.sqrt(1.0 - float(ctx.q) ** (2 * n))

def lambda_n_sq(ctx: QContext, n: int):
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    if ctx.mode == "exact":
        return 1 - ctx.q ** (2 * n)
    return 1.0 - ctx.q ** (2 * n)


def alpha_jl(ctx: QContext, j, l) -> float:
    """([l+j]_q [l-j+1]_q)^(1/2) for the spin-l ladder coefficients."""
    j = _as_half_integer(j, "j")
    l = _as_half_integer(l, "l")
    if l < 0:
        raise ValueError(f"l must be nonnegative, got {l}")
    if (l + j).denominator != 1:
        raise ValueError(f"l+j must be an integer, got l={l}, j={j}")
    if not (-l <= j <= l + 1):
        raise ValueError(f"j out of range for l={l}: {j}")
    v = alpha_jl_sq(ctx, j, l)
    return math.sqrt(float(v))

def alpha_jl_sq(ctx: QContext, j, l):
    j = _as_half_integer(j, "j")
    l = _as_half_integer(l, "l")
    a = q_number(ctx, l + j)
    b = q_number(ctx, l - j + 1)
    return a * b


def casimir_eigenvalue(ctx: QContext, l):
    """[l + 1/2]_q^2, the Casimir value on the spin-l module.

    Computed as lambda^-2 (q^(2l+1) - 2 + q^-(2l+1)), which is rational in
    exact mode for every half-integer l.
    """
    l = _as_half_integer(l, "l")
    if l < 0:
        raise ValueError(f"l must be nonnegative, got {l}")
    m = int(2 * l + 1)
    if ctx.mode == "exact":
        return (ctx.q ** m - 2 + ctx.q ** (-m)) / (ctx.lam * ctx.lam)
    return (ctx.q ** m - 2.0 + ctx.q ** (-m)) / (ctx.lam * ctx.lam)


def zeta(ctx: QContext, z, tol: float = None):
    """zeta(z) = (q^-1 - q)^(2z-1) sum_n n (q^-n/2 - q^n/2)^(-2z) (q^-n - q^n).

    Defined for Re z > 1.  Terms are summed until the next one falls below
    tol relative to the partial sum; more than ZETA_MAX_TERMS terms raise.
    Returns (value, number_of_terms).
    """
    z = complex(z)
    if z.real <= 1.0:
        raise ValueError(f"zeta(z) requires Re z > 1, got {z}")
    if tol is None:
        tol = ctx.tol
    q = float(ctx.q)
    prefactor = complex(1.0 / q - q) ** (2 * z - 1)
    acc = 0j
    n = 0
    while True:
        n += 1
        if n > ZETA_MAX_TERMS:
            raise RuntimeError(f"zeta series needs more than {ZETA_MAX_TERMS} terms")
        # n (q^-n/2 - q^n/2)^(-2z) (q^-n - q^n)
        #   = n q^(n(z-1)) (1-q^n)^(-2z) (1-q^(2n)), safe for large n
        qn = q ** n
        term = n * cmath.exp(n * (z - 1) * math.log(q)) \
            * complex(1.0 - qn) ** (-2 * z) * (1.0 - qn * qn)
        acc += term
        if n > 1 and abs(term) < tol * abs(acc):
            break
    return prefactor * acc, n
