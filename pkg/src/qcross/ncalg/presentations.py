"""Oriented rewrite presentations of the coordinate and enveloping algebras.

Each presentation fixes a total order on its alphabet and orients every
defining relation so that the right-hand side is strictly smaller in
degree-lexicographic order.  Normal forms are the words containing no
rule's left-hand side; cross product presentations put enveloping-algebra
letters before coordinate letters, giving normal words of the shape
(U-monomial)(coordinate monomial).

Generator names follow a fixed ASCII alphabet: Kinv/Linv are the formal
inverses of K/L, z1s/z2s are the adjoints of z1/z2, xs of x.
"""

from __future__ import annotations

from ..exact import conj_scalar, scalar_is_zero
from .poly import NCPoly

U_GL2 = ("K", "Kinv", "L", "Linv", "E", "F")
U_SU2 = ("K", "Kinv", "E", "F")
ABCD = ("a", "b", "c", "d")


class Presentation:
    """An ordered alphabet with terminating rewrite rules and a star table.

    rules2 maps a two-letter word to its replacement, a tuple of
    (word, coefficient) terms; rules1 does the same for single letters
    that are eliminated entirely (X1).  star_table maps each letter g to
    (g', co) with g* = co*g'.
    """

    def __init__(self, name, ctx, letters, rules2, rules1=None,
                 star_table=None, u_letters=(), extra_letters=()):
        self.name = name
        self.ctx = ctx
        self.letters = tuple(letters)
        self.index = {g: i for i, g in enumerate(self.letters)}
        self.rules2 = dict(rules2)
        self.rules1 = dict(rules1 or {})
        self.star_table = dict(star_table or {})
        self.u_letters = frozenset(u_letters)
        self.extra_letters = tuple(extra_letters)
        self.alphabet = frozenset(self.letters) | set(self.extra_letters)
        self.coord_letters = frozenset(self.letters) - self.u_letters
        self.nf_cache = {}
        self._validate()

    def _degree_lex(self, word):
        return (len(word), tuple(self.index[g] for g in word))

    def _validate(self):
        for pair, terms in self.rules2.items():
            if len(pair) != 2 or any(g not in self.alphabet for g in pair):
                raise ValueError(f"{self.name}: bad rule key {pair}")
            lhs = self._degree_lex(pair)
            for word, _ in terms:
                if any(g in self.rules1 for g in word):
                    raise ValueError(f"{self.name}: rule output {word} "
                                     "contains an eliminated letter")
                if not self._degree_lex(word) < lhs:
                    raise ValueError(f"{self.name}: rule {pair} -> {word} "
                                     "does not decrease deg-lex order")
        for g, terms in self.rules1.items():
            for word, _ in terms:
                if g in word:
                    raise ValueError(f"{self.name}: 1-letter rule for {g} "
                                     "is not eliminating")
        for g, (g2, co) in self.star_table.items():
            g3, co2 = self.star_table[g2]
            back = conj_scalar(co) * co2
            if g3 != g or not scalar_is_zero(back - self.ctx.one()):
                raise ValueError(f"{self.name}: star table not involutive "
                                 f"at {g}")

    def owns(self, word) -> bool:
        return all(g in self.alphabet for g in word)

    def gen(self, name) -> NCPoly:
        if name not in self.alphabet:
            raise KeyError(f"{name} is not a generator of {self.name}")
        return NCPoly.from_word((name,), self.ctx.one())

    def one(self) -> NCPoly:
        return NCPoly.from_word((), self.ctx.one())

    def __repr__(self):
        return f"Presentation({self.name!r}, {len(self.letters)} letters)"


# ---------------------------------------------------------------------------
# rule builders; every coefficient is created from ctx so exact and float
# modes share one code path


def _u_rules(ctx, with_l):
    qh = ctx.qh_pow
    one = ctx.one()
    li = ctx.lam_inv()
    r = {
        ("K", "Kinv"): (((), one),),
        ("Kinv", "K"): (((), one),),
        ("E", "K"): ((("K", "E"), ctx.q_pow(-1)),),
        ("E", "Kinv"): ((("Kinv", "E"), ctx.q_pow(1)),),
        ("F", "K"): ((("K", "F"), ctx.q_pow(1)),),
        ("F", "Kinv"): ((("Kinv", "F"), ctx.q_pow(-1)),),
        ("F", "E"): ((("E", "F"), one), (("K", "K"), -li),
                     (("Kinv", "Kinv"), li)),
    }
    del qh
    if with_l:
        r.update({
            ("L", "Linv"): (((), one),),
            ("Linv", "L"): (((), one),),
            ("L", "K"): ((("K", "L"), one),),
            ("L", "Kinv"): ((("Kinv", "L"), one),),
            ("Linv", "K"): ((("K", "Linv"), one),),
            ("Linv", "Kinv"): ((("Kinv", "Linv"), one),),
            ("E", "L"): ((("L", "E"), one),),
            ("E", "Linv"): ((("Linv", "E"), one),),
            ("F", "L"): ((("L", "F"), one),),
            ("F", "Linv"): ((("Linv", "F"), one),),
        })
    return r


def _omq2_rules(ctx):
    q1, qm1 = ctx.q_pow(1), ctx.q_pow(-1)
    one = ctx.one()
    lam = ctx.scalar(ctx.lam)
    return {
        ("b", "a"): ((("a", "b"), qm1),),
        ("c", "a"): ((("a", "c"), qm1),),
        ("c", "b"): ((("b", "c"), one),),
        ("d", "b"): ((("b", "d"), qm1),),
        ("d", "c"): ((("c", "d"), qm1),),
        ("d", "a"): ((("a", "d"), one), (("b", "c"), -lam)),
    }
    del q1


def _osuq2_rules(ctx):
    # letter order b < c < a < d; both det orientations present so that a
    # and d can never coexist in a normal word
    q1, qm1 = ctx.q_pow(1), ctx.q_pow(-1)
    one = ctx.one()
    return {
        ("a", "b"): ((("b", "a"), q1),),
        ("a", "c"): ((("c", "a"), q1),),
        ("c", "b"): ((("b", "c"), one),),
        ("d", "b"): ((("b", "d"), qm1),),
        ("d", "c"): ((("c", "d"), qm1),),
        ("a", "d"): (((), one), (("b", "c"), q1)),
        ("d", "a"): (((), one), (("b", "c"), qm1)),
    }


def _c2q_rules(ctx):
    q1, qm1 = ctx.q_pow(1), ctx.q_pow(-1)
    one = ctx.one()
    return {
        ("z1s", "z1"): ((("z1", "z1s"), one),),
        ("z2", "z1"): ((("z1", "z2"), qm1),),
        ("z2", "z1s"): ((("z1s", "z2"), qm1),),
        ("z2s", "z1"): ((("z1", "z2s"), q1),),
        ("z2s", "z1s"): ((("z1s", "z2s"), q1),),
        ("z2s", "z2"): ((("z2", "z2s"), one),
                        (("z1", "z1s"), ctx.q_pow(-2) - ctx.one())),
    }


def _r3q_rules(ctx):
    qm2 = ctx.q_pow(-2)
    lam = ctx.scalar(ctx.lam)
    return {
        ("x2", "x1"): ((("x1", "x2"), qm2),),
        ("x3", "x2"): ((("x2", "x3"), qm2),),
        ("x3", "x1"): ((("x1", "x3"), ctx.one()), (("x2", "x2"), lam)),
    }


def _s2q_rules(ctx):
    # sphere relation q^{-1} y1 y3 + q y3 y1 + y2^2 = 1 eliminates both
    # y3*y1 and y2^2 in favour of y1*y3
    qm2 = ctx.q_pow(-2)
    lam = ctx.scalar(ctx.lam)
    return {
        ("y2", "y1"): ((("y1", "y2"), qm2),),
        ("y3", "y2"): ((("y2", "y3"), qm2),),
        ("y3", "y1"): ((("y1", "y3"), ctx.q_pow(-4)), ((), lam * qm2)),
        ("y2", "y2"): (((), qm2),
                       (("y1", "y3"), -ctx.q_pow(-3) * (ctx.one() + ctx.q_pow(2)))),
    }


def _u0_rules(ctx):
    q2, qm2 = ctx.q_pow(2), ctx.q_pow(-2)
    # X1 = (1-q^{-2})^{-1} (1 - Y1) with Y1 = 1 - (1-q^{-2}) X1
    c = ctx.scalar(1 / (1 - ctx.q ** -2))
    e = ctx.scalar(1 / (ctx.q ** 2 - 1))  # = q^{-1} lambda^{-1}
    rules2 = {
        ("X0", "Y1"): ((("Y1", "X0"), ctx.q_pow(4)),),
        ("X2", "Y1"): ((("Y1", "X2"), ctx.q_pow(-4)),),
        ("X2", "X0"): ((("X0", "X2"), qm2), (("Y1",), e), ((), -e)),
    }
    rules1 = {"X1": (((), c), (("Y1",), -c))}
    del q2
    return rules2, rules1


def _qhyp_rules(ctx):
    qm2 = ctx.q_pow(-2)
    return {("xs", "x"): ((("x", "xs"), qm2), ((), -qm2))}


def _central_rules(ctx, central, coords):
    one = ctx.one()
    return {(central, g): (((g, central), one),) for g in coords}


def _cross_abcd_right(ctx, with_l):
    qh, qmh = ctx.qh_pow(1), ctx.qh_pow(-1)
    one = ctx.one()
    r = {
        ("a", "E"): ((("E", "a"), qmh),),
        ("b", "E"): ((("E", "b"), qmh),),
        ("c", "E"): ((("E", "c"), qh), (("Kinv", "a"), one)),
        ("d", "E"): ((("E", "d"), qh), (("Kinv", "b"), one)),
        ("a", "F"): ((("F", "a"), qmh), (("Kinv", "c"), one)),
        ("b", "F"): ((("F", "b"), qmh), (("Kinv", "d"), one)),
        ("c", "F"): ((("F", "c"), qh),),
        ("d", "F"): ((("F", "d"), qh),),
        ("a", "K"): ((("K", "a"), qmh),),
        ("b", "K"): ((("K", "b"), qmh),),
        ("c", "K"): ((("K", "c"), qh),),
        ("d", "K"): ((("K", "d"), qh),),
        ("a", "Kinv"): ((("Kinv", "a"), qh),),
        ("b", "Kinv"): ((("Kinv", "b"), qh),),
        ("c", "Kinv"): ((("Kinv", "c"), qmh),),
        ("d", "Kinv"): ((("Kinv", "d"), qmh),),
    }
    if with_l:
        p1, pm1 = ctx.p_pow(1), ctx.p_pow(-1)
        for g in ABCD:
            r[(g, "L")] = (((("L", g)), p1),)
            r[(g, "Linv")] = (((("Linv", g)), pm1),)
    return r


def _cross_abcd_left(ctx, with_l):
    qh, qmh = ctx.qh_pow(1), ctx.qh_pow(-1)
    one = ctx.one()
    r = {
        ("E", "a"): ((("a", "E"), qh), (("b", "K"), one)),
        ("E", "b"): ((("b", "E"), qmh),),
        ("E", "c"): ((("c", "E"), qh), (("d", "K"), one)),
        ("E", "d"): ((("d", "E"), qmh),),
        ("F", "a"): ((("a", "F"), qh),),
        ("F", "b"): ((("b", "F"), qmh), (("a", "K"), one)),
        ("F", "c"): ((("c", "F"), qh),),
        ("F", "d"): ((("d", "F"), qmh), (("c", "K"), one)),
        ("K", "a"): ((("a", "K"), qmh),),
        ("K", "b"): ((("b", "K"), qh),),
        ("K", "c"): ((("c", "K"), qmh),),
        ("K", "d"): ((("d", "K"), qh),),
        ("Kinv", "a"): ((("a", "Kinv"), qh),),
        ("Kinv", "b"): ((("b", "Kinv"), qmh),),
        ("Kinv", "c"): ((("c", "Kinv"), qh),),
        ("Kinv", "d"): ((("d", "Kinv"), qmh),),
    }
    if with_l:
        p1, pm1 = ctx.p_pow(1), ctx.p_pow(-1)
        for g in ABCD:
            r[("L", g)] = ((((g, "L")), p1),)
            r[("Linv", g)] = ((((g, "Linv")), pm1),)
    return r


def _cross_z_right(ctx, with_l):
    qh, qmh = ctx.qh_pow(1), ctx.qh_pow(-1)
    one = ctx.one()
    r = {
        ("z1", "E"): ((("E", "z1"), qmh),),
        ("z1s", "E"): ((("E", "z1s"), qh), (("Kinv", "z2s"), -ctx.q_pow(1)),),
        ("z2", "E"): ((("E", "z2"), qh), (("Kinv", "z1"), one)),
        ("z2s", "E"): ((("E", "z2s"), qmh),),
        ("z1", "F"): ((("F", "z1"), qmh), (("Kinv", "z2"), one)),
        ("z1s", "F"): ((("F", "z1s"), qh),),
        ("z2", "F"): ((("F", "z2"), qh),),
        ("z2s", "F"): ((("F", "z2s"), qmh), (("Kinv", "z1s"), -ctx.q_pow(-1)),),
        ("z1", "K"): ((("K", "z1"), qmh),),
        ("z1s", "K"): ((("K", "z1s"), qh),),
        ("z2", "K"): ((("K", "z2"), qh),),
        ("z2s", "K"): ((("K", "z2s"), qmh),),
        ("z1", "Kinv"): ((("Kinv", "z1"), qh),),
        ("z1s", "Kinv"): ((("Kinv", "z1s"), qmh),),
        ("z2", "Kinv"): ((("Kinv", "z2"), qmh),),
        ("z2s", "Kinv"): ((("Kinv", "z2s"), qh),),
    }
    if with_l:
        p1, pm1 = ctx.p_pow(1), ctx.p_pow(-1)
        for g in ("z1", "z1s", "z2", "z2s"):
            r[(g, "L")] = (((("L", g)), p1),)
            r[(g, "Linv")] = (((("Linv", g)), pm1),)
    return r


def _cross_x_right(ctx, letters, with_l):
    x1, x2, x3 = letters
    q1, qm1 = ctx.q_pow(1), ctx.q_pow(-1)
    one = ctx.one()
    g = ctx.gamma()
    r = {
        (x1, "E"): ((("E", x1), qm1),),
        (x2, "E"): ((("E", x2), one), (("Kinv", x1), -q1 * g)),
        (x3, "E"): ((("E", x3), q1), (("Kinv", x2), q1 * g)),
        (x1, "F"): ((("F", x1), qm1), (("Kinv", x2), -qm1 * g)),
        (x2, "F"): ((("F", x2), one), (("Kinv", x3), qm1 * g)),
        (x3, "F"): ((("F", x3), q1),),
        (x1, "K"): ((("K", x1), qm1),),
        (x2, "K"): ((("K", x2), one),),
        (x3, "K"): ((("K", x3), q1),),
        (x1, "Kinv"): ((("Kinv", x1), q1),),
        (x2, "Kinv"): ((("Kinv", x2), one),),
        (x3, "Kinv"): ((("Kinv", x3), qm1),),
    }
    if with_l:
        p2, pm2 = ctx.p_pow(2), ctx.p_pow(-2)
        for xg in letters:
            r[(xg, "L")] = (((("L", xg)), p2),)
            r[(xg, "Linv")] = (((("Linv", xg)), pm2),)
    return r


def _cross_u0_abcd(ctx):
    q1, qm1 = ctx.q_pow(1), ctx.q_pow(-1)
    q2, qm2 = ctx.q_pow(2), ctx.q_pow(-2)
    one = ctx.one()
    return {
        ("a", "X2"): ((("X2", "a"), qm1),),
        ("b", "X2"): ((("X2", "b"), qm1),),
        ("c", "X2"): ((("X2", "c"), q1), (("a",), one)),
        ("d", "X2"): ((("X2", "d"), q1), (("b",), one)),
        ("a", "X0"): ((("X0", "a"), qm1), (("c",), one)),
        ("b", "X0"): ((("X0", "b"), qm1), (("d",), one)),
        ("c", "X0"): ((("X0", "c"), q1),),
        ("d", "X0"): ((("X0", "d"), q1),),
        ("a", "Y1"): ((("Y1", "a"), qm2),),
        ("b", "Y1"): ((("Y1", "b"), qm2),),
        ("c", "Y1"): ((("Y1", "c"), q2),),
        ("d", "Y1"): ((("Y1", "d"), q2),),
    }


# ---------------------------------------------------------------------------
# star tables


def _star_u(ctx):
    one = ctx.one()
    return {"E": ("F", one), "F": ("E", one), "K": ("K", one),
            "Kinv": ("Kinv", one), "L": ("Linv", one), "Linv": ("L", one)}


def _star_su(ctx):
    t = _star_u(ctx)
    del t["L"], t["Linv"]
    return t


def _star_abcd(ctx):
    one = ctx.one()
    return {"a": ("d", one), "d": ("a", one),
            "b": ("c", -ctx.q_pow(1)), "c": ("b", -ctx.q_pow(-1))}


def _star_z(ctx):
    one = ctx.one()
    return {"z1": ("z1s", one), "z1s": ("z1", one),
            "z2": ("z2s", one), "z2s": ("z2", one)}


def _star_x(ctx, letters):
    x1, x2, x3 = letters
    return {x1: (x3, ctx.q_pow(-1)), x3: (x1, ctx.q_pow(1)),
            x2: (x2, ctx.one())}


def _star_u0(ctx):
    one = ctx.one()
    return {"X0": ("X2", one), "X2": ("X0", one),
            "X1": ("X1", one), "Y1": ("Y1", one)}


def global_star_table(ctx):
    """Involution table over the full alphabet, for the parser's adj()."""
    one = ctx.one()
    t = {}
    t.update(_star_u(ctx))
    t.update(_star_abcd(ctx))
    t.update(_star_z(ctx))
    t.update(_star_x(ctx, ("x1", "x2", "x3")))
    t.update(_star_x(ctx, ("y1", "y2", "y3")))
    t.update(_star_u0(ctx))
    t.update({"R": ("R", one), "Q": ("Q", one),
              "x": ("xs", one), "xs": ("x", one)})
    return t


# ---------------------------------------------------------------------------
# presentation builders


def _merge(*dicts):
    out = {}
    for d in dicts:
        out.update(d)
    return out


def _build_omq2(ctx):
    return Presentation("OMq2", ctx, ABCD, _omq2_rules(ctx),
                        star_table=_star_abcd(ctx))


def _build_osuq2(ctx):
    return Presentation("OSUq2", ctx, ("b", "c", "a", "d"),
                        _osuq2_rules(ctx), star_table=_star_abcd(ctx))


def _build_c2q(ctx):
    return Presentation("OhatC2q", ctx, ("z1", "z1s", "z2", "z2s"),
                        _c2q_rules(ctx), star_table=_star_z(ctx))


def _build_r3q(ctx):
    return Presentation("OR3q", ctx, ("x1", "x2", "x3"), _r3q_rules(ctx),
                        star_table=_star_x(ctx, ("x1", "x2", "x3")))


def _build_s2q(ctx):
    return Presentation("OS2q", ctx, ("y1", "y2", "y3"), _s2q_rules(ctx),
                        star_table=_star_x(ctx, ("y1", "y2", "y3")))


def _build_osuq2_r(ctx):
    rules = _merge(_osuq2_rules(ctx),
                   _central_rules(ctx, "R", ("b", "c", "a", "d")))
    star = _star_abcd(ctx)
    star["R"] = ("R", ctx.one())
    return Presentation("OSUq2_R", ctx, ("b", "c", "a", "d", "R"), rules,
                        star_table=star)


def _build_s2q_q(ctx):
    rules = _merge(_s2q_rules(ctx),
                   _central_rules(ctx, "Q", ("y1", "y2", "y3")))
    star = _star_x(ctx, ("y1", "y2", "y3"))
    star["Q"] = ("Q", ctx.one())
    return Presentation("OS2q_Q", ctx, ("y1", "y2", "y3", "Q"), rules,
                        star_table=star)


def _build_uqgl2(ctx):
    return Presentation("Uqgl2", ctx, U_GL2, _u_rules(ctx, True),
                        star_table=_star_u(ctx), u_letters=U_GL2)


def _build_uqsu2(ctx):
    return Presentation("Uqsu2", ctx, U_SU2, _u_rules(ctx, False),
                        star_table=_star_su(ctx), u_letters=U_SU2)


def _build_u0(ctx):
    rules2, rules1 = _u0_rules(ctx)
    return Presentation("U0", ctx, ("Y1", "X0", "X2"), rules2, rules1=rules1,
                        star_table=_star_u0(ctx),
                        u_letters=("Y1", "X0", "X2", "X1"),
                        extra_letters=("X1",))


def _build_qhyp(ctx):
    one = ctx.one()
    return Presentation("QHyp", ctx, ("x", "xs"), _qhyp_rules(ctx),
                        star_table={"x": ("xs", one), "xs": ("x", one)})


def _build_gl2_x_omq2(ctx):
    rules = _merge(_u_rules(ctx, True), _omq2_rules(ctx),
                   _cross_abcd_right(ctx, True))
    star = _merge(_star_u(ctx), _star_abcd(ctx))
    return Presentation("Uqgl2xOMq2", ctx, U_GL2 + ABCD, rules,
                        star_table=star, u_letters=U_GL2)


def _build_su2_x_omq2(ctx):
    rules = _merge(_u_rules(ctx, False), _omq2_rules(ctx),
                   _cross_abcd_right(ctx, False))
    star = _merge(_star_su(ctx), _star_abcd(ctx))
    return Presentation("Uqsu2xOMq2", ctx, U_SU2 + ABCD, rules,
                        star_table=star, u_letters=U_SU2)


def _build_su2_x_osuq2(ctx):
    rules = _merge(_u_rules(ctx, False), _osuq2_rules(ctx),
                   _cross_abcd_right(ctx, False))
    star = _merge(_star_su(ctx), _star_abcd(ctx))
    return Presentation("Uqsu2xOSUq2", ctx, U_SU2 + ("b", "c", "a", "d"),
                        rules, star_table=star, u_letters=U_SU2)


def _build_gl2_x_c2q(ctx):
    rules = _merge(_u_rules(ctx, True), _c2q_rules(ctx),
                   _cross_z_right(ctx, True))
    star = _merge(_star_u(ctx), _star_z(ctx))
    return Presentation("Uqgl2xOhatC2q", ctx,
                        U_GL2 + ("z1", "z1s", "z2", "z2s"), rules,
                        star_table=star, u_letters=U_GL2)


def _build_su2_x_c2q(ctx):
    rules = _merge(_u_rules(ctx, False), _c2q_rules(ctx),
                   _cross_z_right(ctx, False))
    star = _merge(_star_su(ctx), _star_z(ctx))
    return Presentation("Uqsu2xOhatC2q", ctx,
                        U_SU2 + ("z1", "z1s", "z2", "z2s"), rules,
                        star_table=star, u_letters=U_SU2)


def _build_u0_x_osuq2(ctx):
    rules2, rules1 = _u0_rules(ctx)
    rules = _merge(rules2, _osuq2_rules(ctx), _cross_u0_abcd(ctx))
    star = _merge(_star_u0(ctx), _star_abcd(ctx))
    return Presentation("U0xOSUq2", ctx,
                        ("Y1", "X0", "X2", "b", "c", "a", "d"), rules,
                        rules1=rules1, star_table=star,
                        u_letters=("Y1", "X0", "X2", "X1"),
                        extra_letters=("X1",))


def _build_gl2_x_r3q(ctx):
    rules = _merge(_u_rules(ctx, True), _r3q_rules(ctx),
                   _cross_x_right(ctx, ("x1", "x2", "x3"), True))
    star = _merge(_star_u(ctx), _star_x(ctx, ("x1", "x2", "x3")))
    return Presentation("Uqgl2xOR3q", ctx, U_GL2 + ("x1", "x2", "x3"),
                        rules, star_table=star, u_letters=U_GL2)


def _build_su2_x_r3q(ctx):
    rules = _merge(_u_rules(ctx, False), _r3q_rules(ctx),
                   _cross_x_right(ctx, ("x1", "x2", "x3"), False))
    star = _merge(_star_su(ctx), _star_x(ctx, ("x1", "x2", "x3")))
    return Presentation("Uqsu2xOR3q", ctx, U_SU2 + ("x1", "x2", "x3"),
                        rules, star_table=star, u_letters=U_SU2)


def _build_su2_x_s2q(ctx):
    rules = _merge(_u_rules(ctx, False), _s2q_rules(ctx),
                   _cross_x_right(ctx, ("y1", "y2", "y3"), False))
    star = _merge(_star_su(ctx), _star_x(ctx, ("y1", "y2", "y3")))
    return Presentation("Uqsu2xOS2q", ctx, U_SU2 + ("y1", "y2", "y3"),
                        rules, star_table=star, u_letters=U_SU2)


def _build_omq2_x_gl2_left(ctx):
    rules = _merge(_omq2_rules(ctx), _u_rules(ctx, True),
                   _cross_abcd_left(ctx, True))
    star = _merge(_star_u(ctx), _star_abcd(ctx))
    return Presentation("OMq2xUqgl2_left", ctx, ABCD + U_GL2, rules,
                        star_table=star, u_letters=U_GL2)


_BUILDERS = {
    "OMq2": _build_omq2,
    "OhatC2q": _build_c2q,
    "OSUq2": _build_osuq2,
    "OR3q": _build_r3q,
    "OS2q": _build_s2q,
    "OSUq2_R": _build_osuq2_r,
    "OS2q_Q": _build_s2q_q,
    "Uqgl2": _build_uqgl2,
    "Uqsu2": _build_uqsu2,
    "U0": _build_u0,
    "QHyp": _build_qhyp,
    "Uqgl2xOMq2": _build_gl2_x_omq2,
    "Uqsu2xOMq2": _build_su2_x_omq2,
    "Uqgl2xOhatC2q": _build_gl2_x_c2q,
    "Uqsu2xOhatC2q": _build_su2_x_c2q,
    "Uqsu2xOSUq2": _build_su2_x_osuq2,
    "U0xOSUq2": _build_u0_x_osuq2,
    "Uqgl2xOR3q": _build_gl2_x_r3q,
    "Uqsu2xOR3q": _build_su2_x_r3q,
    "Uqsu2xOS2q": _build_su2_x_s2q,
    "OMq2xUqgl2_left": _build_omq2_x_gl2_left,
}


def presentation_names():
    return tuple(_BUILDERS)


def get_presentation(ctx, name) -> Presentation:
    """Build (or fetch from the context cache) a named presentation."""
    cached = ctx._pres_cache.get(name)
    if cached is not None:
        return cached
    builder = _BUILDERS.get(name)
    if builder is None:
        raise KeyError(f"unknown presentation {name!r}; "
                       f"known: {', '.join(_BUILDERS)}")
    pres = builder(ctx)
    ctx._pres_cache[name] = pres
    return pres
