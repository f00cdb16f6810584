"""Scalar layer: q-numbers, ladder coefficients, Casimir values, zeta.

Reference values at q = 1/2 come from direct evaluation of the defining
expressions (see the oracle helpers below); the zeta oracle sums the
unrearranged series with a cutoff chosen so the tail is far below float
precision.
"""

import cmath
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from qcross import (
    QContext,
    alpha_jl,
    alpha_jl_sq,
    casimir_eigenvalue,
    lambda_n,
    lambda_n_sq,
    q_number,
    zeta,
)
from qcross.exact import Exact

CTX = QContext(q=Fraction(1, 2))
FCTX = QContext(q=0.5, mode="float")


def zeta_oracle(q, z, terms=500):
    pref = complex(1.0 / q - q) ** (2 * z - 1)
    s = 0j
    for n in range(1, terms + 1):
        s += n * complex(q ** (-n / 2) - q ** (n / 2)) ** (-2 * z) * (q ** (-n) - q ** n)
    return pref * s


class TestContext:
    def test_validation(self):
        with pytest.raises(ValueError):
            QContext(q=Fraction(3, 2))
        with pytest.raises(ValueError):
            QContext(q=Fraction(1, 2), p=1)
        with pytest.raises(ValueError):
            QContext(q=Fraction(1, 2), p=-2)
        with pytest.raises(ValueError):
            QContext(q=Fraction(1, 2), q_sqrt=Fraction(1, 2))
        with pytest.raises(ValueError):
            QContext(q=Fraction(1, 2), mode="symbolic")

    def test_q_sqrt_entry_point(self):
        ctx = QContext(q_sqrt=Fraction(1, 2))
        assert ctx.q == Fraction(1, 4)
        assert ctx.q_sqrt == Fraction(1, 2)

    def test_exact_q_sqrt_squares_back(self):
        assert CTX.q_sqrt * CTX.q_sqrt == Fraction(1, 2)
        assert CTX.qh_pow(3) * CTX.qh_pow(-3) == 1
        assert CTX.qh_pow(2) == Fraction(1, 2)
        assert CTX.qh_pow(5) ** 2 == CTX.q ** 5

    def test_gamma_spelling(self):
        # gamma^2 = q + 1/q must fold back to a rational
        g = CTX.gamma()
        assert g * g == Fraction(5, 2)
        # (1+q^2)^(-1/2) shares the radicand, so the product collapses
        assert CTX.one_plus_q2_invsqrt() * g == CTX.qh_pow(-1)

    def test_float_mode(self):
        assert abs(FCTX.gamma() - cmath.sqrt(2.5)) < 1e-15
        assert abs(FCTX.qh_pow(3) - 0.5 ** 1.5) < 1e-15
        assert FCTX.scalar(Fraction(1, 4)) == 0.25
        assert FCTX.scalar(Exact.sqrt(2)) == pytest.approx(2 ** 0.5)

    def test_exact_scalar_rejects_complex(self):
        with pytest.raises(TypeError):
            CTX.scalar(1 + 2j)


class TestQNumbers:
    def test_integer_values(self):
        assert q_number(CTX, 1) == 1
        assert q_number(CTX, 2) == Fraction(5, 2)
        assert q_number(CTX, 3) == Fraction(21, 4)
        assert q_number(CTX, -2) == Fraction(-5, 2)
        assert q_number(CTX, 0) == 0

    def test_half_integer_matches_float(self):
        for k in (Fraction(1, 2), Fraction(3, 2), Fraction(5, 2)):
            ex = q_number(CTX, k)
            fl = q_number(FCTX, k)
            assert abs(ex.to_complex() - fl) < 1e-12

    def test_rejects_non_half_integers(self):
        with pytest.raises(ValueError):
            q_number(CTX, Fraction(1, 3))

    @given(st.integers(min_value=-8, max_value=8))
    def test_symmetry(self, k):
        assert q_number(CTX, -k) == -q_number(CTX, k)

    @given(st.integers(min_value=1, max_value=8))
    def test_recursion(self, k):
        # [k+1] = (q + 1/q)[k] - [k-1]
        lhs = q_number(CTX, k + 1)
        rhs = (CTX.q + 1 / CTX.q) * q_number(CTX, k) - q_number(CTX, k - 1)
        assert lhs == rhs


class TestLadderScalars:
    def test_lambda_n(self):
        assert lambda_n_sq(CTX, 0) == 0
        assert lambda_n_sq(CTX, 1) == Fraction(3, 4)
        assert lambda_n(CTX, 2) == pytest.approx((1 - 0.5 ** 4) ** 0.5)
        with pytest.raises(ValueError):
            lambda_n(CTX, -1)

    def test_alpha(self):
        assert alpha_jl_sq(CTX, 1, 1) == Fraction(5, 2)
        assert alpha_jl_sq(CTX, 0, 1) == Fraction(5, 2)
        assert alpha_jl_sq(CTX, Fraction(1, 2), Fraction(1, 2)) == 1
        # edge of the ladder
        assert alpha_jl(CTX, -1, 1) == 0.0
        assert alpha_jl(CTX, 1, 1) == pytest.approx(2.5 ** 0.5)

    def test_alpha_domain(self):
        with pytest.raises(ValueError):
            alpha_jl(CTX, Fraction(1, 2), 1)  # l+j not an integer
        with pytest.raises(ValueError):
            alpha_jl(CTX, 3, 1)
        with pytest.raises(ValueError):
            alpha_jl(CTX, 0, -1)

    def test_casimir(self):
        assert casimir_eigenvalue(CTX, 0) == Fraction(2, 9)
        assert casimir_eigenvalue(CTX, Fraction(1, 2)) == 1
        assert casimir_eigenvalue(CTX, 1) == Fraction(49, 18)

    @given(st.integers(min_value=0, max_value=6))
    def test_casimir_is_q_number_square(self, two_l):
        l = Fraction(two_l, 2)
        cas = casimir_eigenvalue(CTX, l)
        qn = q_number(CTX, l + Fraction(1, 2))
        sq = qn * qn if isinstance(qn, Fraction) else (qn * qn).as_fraction()
        assert cas == sq


class TestZeta:
    def test_matches_direct_series(self):
        for z in (1.5, 2.0, 3.0):
            val, nterms = zeta(FCTX, z, tol=1e-15)
            assert nterms >= 2
            assert abs(val - zeta_oracle(0.5, z)) < 1e-10

    def test_frozen_values(self):
        val, _ = zeta(FCTX, 2.0, tol=1e-15)
        assert val.real == pytest.approx(29.828479737772781, abs=1e-9)
        val, _ = zeta(FCTX, 3.0, tol=1e-15)
        assert val.real == pytest.approx(97.141578545897261, abs=1e-9)

    def test_complex_argument(self):
        val, _ = zeta(FCTX, 2 + 1j, tol=1e-15)
        assert abs(val - zeta_oracle(0.5, 2 + 1j)) < 1e-9

    def test_domain(self):
        with pytest.raises(ValueError):
            zeta(FCTX, 1.0)
        with pytest.raises(ValueError):
            zeta(FCTX, 0.5 + 2j)

    def test_exact_context_also_works(self):
        val, _ = zeta(CTX, 2.0, tol=1e-15)
        assert abs(val - zeta_oracle(0.5, 2.0)) < 1e-10
