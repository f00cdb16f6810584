"""Symbolic layer tests: parser, rewriting, Hopf maps, morphisms.

Exact contexts dominate so every identity is checked with rational
arithmetic; a float context covers mixed-mode behaviour.
"""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qcross import QContext
from qcross.ncalg import (ParseError, Presentation, antipode_U,
                          antipode_inv_U, check_local_confluence,
                          coord_coproduct, coproduct_U, counit_U,
                          get_presentation, involution, multiply, NCPoly,
                          normal_form, pairing, parse, presentation_names,
                          psi_embed, rho_embed, right_action,
                          right_action_by_pairing, TensorPoly, theta)

CTX = QContext(q=Fraction(1, 4), p=Fraction(3, 4))   # q^{1/2} = 1/2 rational
SURD = QContext(q=Fraction(1, 2))                    # q^{1/2} irrational
FCTX = QContext(q=0.35, p=1.7, mode="float")


def nf(text, name, ctx=CTX):
    return normal_form(parse(text, ctx), get_presentation(ctx, name))


def assert_zero(text, name, ctx=CTX, tol=0.0):
    poly = nf(text, name, ctx)
    assert poly.is_zero(tol), f"{text} in {name} -> {poly!r}"


class TestParser:
    def test_two_term(self):
        poly = parse("a*b - q*b*a", CTX)
        assert len(poly.terms) == 2
        assert poly.coeff(("b", "a")) == -CTX.q_pow(1)

    def test_adj_generator(self):
        assert parse("adj(b)", CTX) == NCPoly.from_word(("c",), -CTX.q_pow(1))

    def test_no_reduction_at_parse_time(self):
        poly = parse("K*Kinv", CTX)
        assert list(poly.terms) == [("K", "Kinv")]

    def test_coeff_tokens(self):
        assert parse("qh^2 - q", CTX).is_zero()
        assert parse("i^2 + 1", CTX).is_zero()
        assert parse("p^-1", CTX).coeff(()) == CTX.p_pow(-1)
        assert parse("3/4 - 6/8", CTX).is_zero()

    def test_power_and_parens(self):
        assert parse("(a + b)^2", CTX) == parse("a*a + a*b + b*a + b*b", CTX)
        assert parse("c^3", CTX).coeff(("c", "c", "c")) == CTX.one()
        assert parse("a^0", CTX) == NCPoly.one(CTX)

    def test_unary_minus(self):
        assert parse("-E + E", CTX).is_zero()

    def test_errors(self):
        with pytest.raises(ParseError):
            parse("a*", CTX)
        with pytest.raises(ParseError):
            parse("w1", CTX)
        with pytest.raises(ParseError):
            parse("a^-1", CTX)
        with pytest.raises(ParseError):
            parse("q^(2)", CTX)
        err = None
        try:
            parse("a + %", CTX)
        except ParseError as e:
            err = e
        assert err is not None and err.pos == 4

    def test_adj_antimultiplicative_freely(self):
        # adj does not normal-form: word stays reversed and starred
        poly = parse("adj(a*b)", CTX)
        assert poly.coeff(("c", "d")) == -CTX.q_pow(1)


class TestNormalForm:
    def test_matrix_relations_all_zero(self):
        rels = ["a*b - q*b*a", "a*c - q*c*a", "b*d - q*d*b",
                "c*d - q*d*c", "b*c - c*b"]
        for r in rels:
            assert_zero(r, "OMq2")
            assert_zero(r, "OSUq2")
        assert_zero("a*d - d*a - (q - q^-1)*b*c", "OMq2")
        assert_zero("a*d - q*b*c - 1", "OSUq2")

    def test_basis_shape_osuq2(self):
        # PBW words: powers of b, c then a or d exclusively
        poly = nf("a*b*d", "OSUq2")
        assert poly == parse("q*b + q^2*b^2*c", CTX)

    def test_ef_commutator(self):
        got = nf("E*F - F*E", "Uqsu2")
        lam_inv = CTX.lam_inv()
        want = NCPoly.from_word(("K", "K"), lam_inv) + \
            NCPoly.from_word(("Kinv", "Kinv"), -lam_inv)
        assert got == want

    def test_group_like_cancellation(self):
        assert nf("K*Kinv", "Uqgl2") == NCPoly.one(CTX)
        assert nf("Linv*L*K", "Uqgl2") == NCPoly.from_word(("K",), CTX.one())

    def test_c2q_relations(self):
        rels = ["z1*z2 - q*z2*z1", "z1*adj(z2) - q^-1*adj(z2)*z1",
                "adj(z1)*adj(z2) - q^-1*adj(z2)*adj(z1)",
                "z2*adj(z1) - q^-1*adj(z1)*z2",
                "adj(z1)*z1 - z1*adj(z1)",
                "adj(z2)*z2 - z2*adj(z2) - (q^-2 - 1)*adj(z1)*z1"]
        for r in rels:
            assert_zero(r, "OhatC2q")
            assert_zero(r, "Uqgl2xOhatC2q")

    def test_r3q_relations(self):
        rels = ["x1*x2 - q^2*x2*x1", "x2*x3 - q^2*x3*x2",
                "x3*x1 - x1*x3 - (q - q^-1)*x2^2"]
        for r in rels:
            assert_zero(r, "OR3q")
            assert_zero(r, "Uqgl2xOR3q")

    def test_s2q_relations(self):
        rels = ["y1*y2 - q^2*y2*y1", "y2*y3 - q^2*y3*y2",
                "y3*y1 - y1*y3 - (q - q^-1)*y2^2",
                "q^-1*y1*y3 + q*y3*y1 + y2^2 - 1"]
        for r in rels:
            assert_zero(r, "OS2q")
            assert_zero(r, "Uqsu2xOS2q")

    def test_s2q_consequences(self):
        assert_zero("adj(y3)*y3 - y3*adj(y3) - (1 - q^2)*y2^2", "OS2q")
        assert_zero("adj(y3)*y3 - q^4*y3*adj(y3) - q^2*(1 - q^2)", "OS2q")

    def test_tangent_space_relations(self):
        assert_zero("q^2*X1*X0 - q^-2*X0*X1 - (1 + q^2)*X0", "U0")
        assert_zero("q^2*X2*X1 - q^-2*X1*X2 - (1 + q^2)*X2", "U0")
        assert_zero("q*X2*X0 - q^-1*X0*X2 + q^-1*X1", "U0")
        assert_zero("Y1 - 1 + (1 - q^-2)*X1", "U0")

    def test_qhyp_relation(self):
        assert_zero("x*xs - q^2*xs*x - 1", "QHyp")

    def test_surd_context(self):
        # q = 1/2 puts q^{1/2} in a quadratic extension; identities still exact
        assert_zero("a*d - q*b*c - 1", "OSUq2", SURD)
        assert_zero("q^2*X1*X0 - q^-2*X0*X1 - (1 + q^2)*X0", "U0", SURD)
        got = right_action(parse("b", SURD), parse("K", SURD),
                           get_presentation(SURD, "Uqsu2xOSUq2"))
        assert got == NCPoly.from_word(("b",), SURD.qh_pow(-1))

    def test_float_context(self):
        assert_zero("a*d - q*b*c - 1", "OSUq2", FCTX, tol=1e-12)
        assert_zero("(q - q^-1)*(E*F - F*E) - K^2 + Kinv^2",
                    "Uqsu2", FCTX, tol=1e-12)

    def test_foreign_letter_rejected(self):
        with pytest.raises(ValueError):
            nf("E*y1", "Uqsu2")

    def test_identity_times_anything(self):
        pres = get_presentation(CTX, "Uqsu2xOSUq2")
        x = parse("E*b*c - q*K*a*d + 2", CTX)
        assert multiply(x, NCPoly.one(CTX), pres) == normal_form(x, pres)


WORD_LETTERS = ("E", "F", "K", "Kinv", "a", "b", "c", "d")


def _coeffs():
    return st.fractions(min_value=-3, max_value=3, max_denominator=4).filter(
        lambda f: f != 0)


def _words(letters=WORD_LETTERS, max_len=3):
    return st.lists(st.sampled_from(letters), min_size=0,
                    max_size=max_len).map(tuple)


def _polys(letters=WORD_LETTERS, max_len=3, max_terms=3):
    def build(items):
        acc = NCPoly.zero()
        for word, co in items:
            acc = acc + NCPoly.from_word(word, CTX.scalar(co))
        return acc
    return st.lists(st.tuples(_words(letters, max_len), _coeffs()),
                    min_size=0, max_size=max_terms).map(build)


class TestAlgebraProperties:
    @settings(max_examples=60, deadline=None)
    @given(_polys(), _polys(), _polys())
    def test_multiply_associative(self, x, y, z):
        pres = get_presentation(CTX, "Uqsu2xOSUq2")
        left = multiply(multiply(x, y, pres), z, pres)
        right = multiply(x, multiply(y, z, pres), pres)
        assert left == right

    @settings(max_examples=60, deadline=None)
    @given(_polys())
    def test_involution_involutive(self, x):
        pres = get_presentation(CTX, "Uqsu2xOSUq2")
        assert involution(involution(x, pres), pres) == normal_form(x, pres)

    @settings(max_examples=60, deadline=None)
    @given(_polys(), _polys())
    def test_involution_antimultiplicative(self, x, y):
        pres = get_presentation(CTX, "Uqsu2xOSUq2")
        lhs = involution(multiply(x, y, pres), pres)
        rhs = multiply(involution(y, pres), involution(x, pres), pres)
        assert lhs == rhs

    @settings(max_examples=40, deadline=None)
    @given(_polys())
    def test_normal_form_idempotent(self, x):
        pres = get_presentation(CTX, "Uqsu2xOSUq2")
        once = normal_form(x, pres)
        assert normal_form(once, pres) == once

    def test_involution_on_generators(self):
        pres = get_presentation(CTX, "Uqgl2xOMq2")
        pairs = {"a": "d", "E": "F", "K": "K"}
        for g, img in pairs.items():
            assert involution(parse(g, CTX), pres) == parse(img, CTX)
        assert involution(parse("L", CTX), pres) == parse("Linv", CTX)
        assert involution(parse("b", CTX), pres) == parse("-q*c", CTX)

    def test_star_respects_relations(self):
        # star of each rewrite rule's two sides must agree after NF
        for name in presentation_names():
            pres = get_presentation(CTX, name)
            for (u, v), terms in pres.rules2.items():
                lhs = involution(NCPoly.from_word((u, v), CTX.one()), pres)
                rhs = NCPoly.zero()
                for word, s in terms:
                    rhs = rhs + involution(NCPoly.from_word(word, s), pres)
                assert lhs == rhs, f"star breaks rule {u},{v} in {name}"


class TestCentrality:
    def test_quantum_determinant_central(self):
        pres = get_presentation(CTX, "Uqsu2xOMq2")
        det = parse("a*d - q*b*c", CTX)
        for g in pres.letters:
            gp = NCPoly.from_word((g,), CTX.one())
            comm = multiply(det, gp, pres) - multiply(gp, det, pres)
            assert comm.is_zero(), f"determinant does not commute with {g}"

    def test_radius_squared_central_r3(self):
        pres = get_presentation(CTX, "OR3q")
        q2 = parse("q^-1*x1*x3 + q*x3*x1 + x2^2", CTX)
        for g in ("x1", "x2", "x3"):
            gp = NCPoly.from_word((g,), CTX.one())
            comm = multiply(q2, gp, pres) - multiply(gp, q2, pres)
            assert comm.is_zero()

    def test_c2q_radius_grouplike_behaviour(self):
        # R^2 = z1s z1 + z2s z2 commutes with every coordinate letter
        pres = get_presentation(CTX, "OhatC2q")
        r2 = parse("adj(z1)*z1 + adj(z2)*z2", CTX)
        for g in pres.letters:
            gp = NCPoly.from_word((g,), CTX.one())
            comm = multiply(r2, gp, pres) - multiply(gp, r2, pres)
            assert comm.is_zero()


class TestHopf:
    def test_coproduct_generators(self):
        d = coproduct_U(parse("K", CTX), CTX)
        assert d.terms == {(("K",), ("K",)): CTX.one()}
        d1 = coproduct_U(NCPoly.one(CTX), CTX)
        assert d1.terms == {((), ()): CTX.one()}

    def test_coproduct_multiplicative(self):
        de, df = coproduct_U(parse("E", CTX), CTX), coproduct_U(parse("F", CTX), CTX)
        prod = de * df
        assert len(prod.terms) == 4
        want = coproduct_U(parse("E*F", CTX), CTX)
        # componentwise normal form of the tensor product
        pres = get_presentation(CTX, "Uqgl2")
        reduced = TensorPoly()
        for (w1, w2), co in prod.terms.items():
            p1 = normal_form(NCPoly.from_word(w1, co), pres)
            p2 = normal_form(NCPoly.from_word(w2, CTX.one()), pres)
            for v1, c1 in p1.terms.items():
                for v2, c2 in p2.terms.items():
                    reduced = reduced + TensorPoly.from_pair(v1, v2, c1 * c2)
        assert reduced.terms == want.terms

    def test_counit(self):
        assert counit_U(parse("E*K", CTX), CTX) == CTX.zero()
        assert counit_U(parse("K*Linv", CTX), CTX) == CTX.one()
        assert counit_U(parse("3*K - 2", CTX), CTX) == CTX.one()

    def test_antipode(self):
        assert antipode_U(parse("E", CTX), CTX) == parse("-q*E", CTX)
        assert antipode_U(parse("F", CTX), CTX) == parse("-q^-1*F", CTX)
        assert antipode_U(parse("K", CTX), CTX) == parse("Kinv", CTX)
        ss = antipode_U(antipode_U(parse("E", CTX), CTX), CTX)
        assert ss == parse("q^2*E", CTX)

    def test_antipode_inverse(self):
        for g in ("E", "F", "K", "Kinv", "L", "Linv"):
            f = parse(g, CTX)
            assert antipode_inv_U(antipode_U(f, CTX), CTX) == f
            assert antipode_U(antipode_inv_U(f, CTX), CTX) == f

    def test_antipode_axiom(self):
        # m(S (x) id)Delta(f) = eps(f) 1
        pres = get_presentation(CTX, "Uqgl2")
        for g in ("E", "F", "K", "Kinv", "L", "Linv"):
            tens = coproduct_U(parse(g, CTX), CTX)
            acc = NCPoly.zero()
            for (w1, w2), co in tens.terms.items():
                s1 = antipode_U(NCPoly.from_word(w1, co), CTX)
                acc = acc + multiply(s1, NCPoly.from_word(w2, CTX.one()), pres)
            want = NCPoly.from_word((), counit_U(parse(g, CTX), CTX))
            assert acc == want, g

    def test_antipode_antimultiplicative(self):
        f, g = parse("E*K", CTX), parse("F*Linv", CTX)
        pres = get_presentation(CTX, "Uqgl2")
        lhs = antipode_U(multiply(f, g, pres), CTX)
        rhs = multiply(antipode_U(g, CTX), antipode_U(f, CTX), pres)
        assert lhs == rhs


class TestPairing:
    def test_generator_table(self):
        cases = {
            ("K", "a"): CTX.qh_pow(-1), ("K", "d"): CTX.qh_pow(1),
            ("Kinv", "a"): CTX.qh_pow(1), ("Kinv", "d"): CTX.qh_pow(-1),
            ("E", "c"): CTX.one(), ("F", "b"): CTX.one(),
            ("E", "a"): CTX.zero(), ("E", "b"): CTX.zero(),
            ("L", "a"): CTX.p_pow(1), ("L", "d"): CTX.p_pow(1),
            ("Linv", "a"): CTX.p_pow(-1),
        }
        for (f, x), want in cases.items():
            got = pairing(parse(f, CTX), parse(x, CTX), CTX)
            assert got == want, (f, x)

    def test_pairing_of_unit(self):
        # <f, 1> = eps(f)
        for g in ("E", "F", "K", "L"):
            got = pairing(parse(g, CTX), NCPoly.one(CTX), CTX)
            assert got == counit_U(parse(g, CTX), CTX)

    def test_pairing_products(self):
        # <f, xy> = <f1,x><f2,y> comes built in; check duality the other
        # way: <fg, x> = <f (x) g, Delta x>
        f, g = parse("E", CTX), parse("K", CTX)
        x = parse("c", CTX)
        lhs = pairing(multiply(f, g, get_presentation(CTX, "Uqgl2")), x, CTX)
        tens = coord_coproduct(x, CTX)
        rhs = CTX.zero()
        for (w1, w2), co in tens.terms.items():
            rhs = rhs + co * pairing(f, NCPoly.from_word(w1, CTX.one()), CTX) \
                * pairing(g, NCPoly.from_word(w2, CTX.one()), CTX)
        assert lhs == rhs

    def test_star_pairing_compatibility(self):
        # conj(<S(f)*, x>) = <f, x*>
        import itertools
        from qcross.exact import conj_scalar
        upres = get_presentation(CTX, "Uqgl2")
        xpres = get_presentation(CTX, "OMq2")
        for fg, xg in itertools.product(("E", "F", "K", "Kinv", "L"),
                                        ("a", "b", "c", "d")):
            f, x = parse(fg, CTX), parse(xg, CTX)
            lhs = conj_scalar(pairing(involution(antipode_U(f, CTX), upres),
                                      x, CTX))
            rhs = pairing(f, involution(x, xpres), CTX)
            assert lhs == rhs, (fg, xg)


class TestRightAction:
    def test_unit_action(self):
        pres = get_presentation(CTX, "Uqsu2xOSUq2")
        x = parse("b*c + a", CTX)
        assert right_action(x, NCPoly.one(CTX), pres) == normal_form(
            x, get_presentation(CTX, "OSUq2"))

    def test_single_letter_actions(self):
        pres = get_presentation(CTX, "Uqsu2xOSUq2")
        assert right_action(parse("c", CTX), parse("E", CTX), pres) == \
            parse("a", CTX)
        assert right_action(parse("b", CTX), parse("K", CTX), pres) == \
            parse("qh^-1*b", CTX)

    @settings(max_examples=40, deadline=None)
    @given(_polys(letters=("a", "b", "c", "d"), max_len=2),
           _polys(letters=("E", "F", "K", "Kinv", "L", "Linv"), max_len=2))
    def test_matches_pairing_oracle(self, x, f):
        pres = get_presentation(CTX, "Uqgl2xOMq2")
        via_ad = right_action(x, f, pres)
        via_pairing = normal_form(right_action_by_pairing(x, f, CTX),
                                  get_presentation(CTX, "OMq2"))
        assert via_ad == via_pairing

    @settings(max_examples=30, deadline=None)
    @given(_polys(letters=("a", "b", "c", "d"), max_len=2),
           _polys(letters=("E", "F", "K"), max_len=2),
           _polys(letters=("F", "K", "Kinv"), max_len=2))
    def test_module_axiom(self, x, f, g):
        pres = get_presentation(CTX, "Uqsu2xOSUq2")
        fg = multiply(f, g, get_presentation(CTX, "Uqsu2"))
        lhs = right_action(x, fg, pres)
        rhs = right_action(right_action(x, f, pres), g, pres)
        assert lhs == rhs

    def test_action_on_z_letters(self):
        # z1 <| L = p z1 comes straight from the cross relations
        pres = get_presentation(CTX, "Uqgl2xOhatC2q")
        got = right_action(parse("z1", CTX), parse("L", CTX), pres)
        assert got == parse("p*z1", CTX)

    def test_module_algebra_property(self):
        # (xy) <| f = (x <| f1)(y <| f2)
        pres = get_presentation(CTX, "Uqsu2xOSUq2")
        cpres = get_presentation(CTX, "OSUq2")
        x, y = parse("b", CTX), parse("c", CTX)
        for fg in ("E", "F", "K"):
            f = parse(fg, CTX)
            lhs = right_action(multiply(x, y, cpres), f, pres)
            tens = coproduct_U(f, CTX)
            rhs = NCPoly.zero()
            for (w1, w2), co in tens.terms.items():
                ax = right_action(x, NCPoly.from_word(w1, co), pres)
                ay = right_action(y, NCPoly.from_word(w2, CTX.one()), pres)
                rhs = rhs + multiply(ax, ay, cpres)
            assert lhs == rhs, fg


class TestTheta:
    def test_generator_images(self):
        assert theta(parse("b", CTX), CTX) == parse("-q*c", CTX)
        assert theta(parse("E", CTX), CTX) == parse("F", CTX)
        assert theta(parse("K", CTX), CTX) == parse("Kinv", CTX)

    @settings(max_examples=50, deadline=None)
    @given(_words(("E", "F", "K", "L", "a", "b", "c", "d"), 3))
    def test_self_inverse(self, word):
        pres = get_presentation(CTX, "Uqgl2xOMq2")
        x = NCPoly.from_word(word, CTX.one())
        assert theta(theta(x, CTX, to="left"), CTX, to="right") == \
            normal_form(x, pres)

    @settings(max_examples=40, deadline=None)
    @given(_words(("E", "K", "a", "b", "d"), 2), _words(("F", "L", "c"), 2))
    def test_homomorphism(self, w1, w2):
        pres_r = get_presentation(CTX, "Uqgl2xOMq2")
        pres_l = get_presentation(CTX, "OMq2xUqgl2_left")
        x = NCPoly.from_word(w1, CTX.one())
        y = NCPoly.from_word(w2, CTX.one())
        lhs = theta(multiply(x, y, pres_r), CTX)
        rhs = multiply(theta(x, CTX), theta(y, CTX), pres_l)
        assert lhs == rhs

    def test_star_isomorphism(self):
        pres_r = get_presentation(CTX, "Uqgl2xOMq2")
        pres_l = get_presentation(CTX, "OMq2xUqgl2_left")
        for g in ("E", "K", "L", "a", "b", "c", "d"):
            x = parse(g, CTX)
            assert theta(involution(x, pres_r), CTX) == \
                involution(theta(x, CTX), pres_l), g


class TestEmbeddings:
    def test_rho_images(self):
        assert rho_embed(parse("x2", CTX), CTX) == \
            normal_form(parse("adj(z1)*adj(z2) + z2*z1", CTX),
                        get_presentation(CTX, "OhatC2q"))
        assert rho_embed(NCPoly.one(CTX), CTX) == NCPoly.one(CTX)
        assert rho_embed(parse("y2", CTX), CTX) == \
            normal_form(parse("d*b - q*c*a", CTX),
                        get_presentation(CTX, "OSUq2"))

    def test_rho_preserves_relations_r3(self):
        rels = ["x1*x2 - q^2*x2*x1", "x2*x3 - q^2*x3*x2",
                "x3*x1 - x1*x3 - (q - q^-1)*x2^2"]
        for r in rels:
            assert rho_embed(parse(r, CTX), CTX).is_zero(), r

    def test_rho_preserves_relations_s2(self):
        rels = ["y1*y2 - q^2*y2*y1", "y2*y3 - q^2*y3*y2",
                "y3*y1 - y1*y3 - (q - q^-1)*y2^2",
                "q^-1*y1*y3 + q*y3*y1 + y2^2 - 1"]
        for r in rels:
            assert rho_embed(parse(r, CTX), CTX).is_zero(), r

    def test_rho_star_equivariant(self):
        src = get_presentation(CTX, "OR3q")
        dst = get_presentation(CTX, "OhatC2q")
        for g in ("x1", "x2", "x3"):
            x = parse(g, CTX)
            assert rho_embed(involution(x, src), CTX) == \
                involution(rho_embed(x, CTX), dst), g

    def test_psi_images(self):
        assert psi_embed(parse("z1", CTX), CTX) == parse("b*R", CTX)
        assert psi_embed(parse("adj(z1)*z1 + adj(z2)*z2", CTX), CTX) == \
            parse("R^2", CTX)

    def test_psi_preserves_relations(self):
        rels = ["z1*z2 - q*z2*z1", "z1*adj(z2) - q^-1*adj(z2)*z1",
                "adj(z1)*adj(z2) - q^-1*adj(z2)*adj(z1)",
                "z2*adj(z1) - q^-1*adj(z1)*z2",
                "adj(z1)*z1 - z1*adj(z1)",
                "adj(z2)*z2 - z2*adj(z2) - (q^-2 - 1)*adj(z1)*z1"]
        for r in rels:
            assert psi_embed(parse(r, CTX), CTX).is_zero(), r
        rels_r3 = ["x1*x2 - q^2*x2*x1",
                   "x3*x1 - x1*x3 - (q - q^-1)*x2^2"]
        for r in rels_r3:
            assert psi_embed(parse(r, CTX), CTX).is_zero(), r

    def test_rho_psi_source_detection(self):
        with pytest.raises(ValueError):
            rho_embed(parse("x1*y1", CTX), CTX)
        with pytest.raises(ValueError):
            psi_embed(parse("a", CTX), CTX)


class TestConfluence:
    @pytest.mark.parametrize("name", presentation_names())
    def test_degree_three_all(self, name):
        rep = check_local_confluence(get_presentation(CTX, name), 3)
        assert rep.ok, rep.divergences[:3]

    def test_degree_four_key_presentations(self):
        for name in ("OSUq2", "Uqsu2xOSUq2"):
            rep = check_local_confluence(get_presentation(CTX, name), 4)
            assert rep.ok, (name, rep.divergences[:3])

    def test_trivial_alphabet(self):
        pres = Presentation("free1", CTX, ("a",), {},
                            star_table={"a": ("a", CTX.one())})
        rep = check_local_confluence(pres, 4)
        assert rep.ok and rep.branch_pairs == 0

    def test_float_mode_confluence(self):
        rep = check_local_confluence(
            get_presentation(FCTX, "Uqsu2xOSUq2"), 3, tol=1e-9)
        assert rep.ok

    def test_cost_guard(self):
        with pytest.raises(ValueError):
            check_local_confluence(get_presentation(CTX, "OSUq2"), 7)


class TestRuleTableHygiene:
    def test_misoriented_rule_rejected(self):
        with pytest.raises(ValueError):
            Presentation("bad", CTX, ("u", "v"),
                         {("u", "v"): ((("v", "u"), CTX.one()),)})

    def test_noninvolutive_star_rejected(self):
        with pytest.raises(ValueError):
            Presentation("bad", CTX, ("u", "v"),
                         {},
                         star_table={"u": ("v", CTX.one()),
                                     "v": ("u", CTX.q_pow(1))})

    def test_unknown_presentation(self):
        with pytest.raises(KeyError):
            get_presentation(CTX, "nope")

    def test_cache_reuse(self):
        p1 = get_presentation(CTX, "OSUq2")
        p2 = get_presentation(CTX, "OSUq2")
        assert p1 is p2
