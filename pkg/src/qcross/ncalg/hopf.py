"""Hopf structure maps on the enveloping side, the dual pairing, and the
right action of U on a coordinate algebra.

right_action computes x ◁ f through the right adjoint action
S(f_(1)) x f_(2) evaluated inside a cross product presentation; the
result lands back in the coordinate subalgebra.  The pairing extends the
generator table by duality with the matrix coproduct and serves as an
independent oracle for right_action.
"""

from __future__ import annotations

from ..exact import scalar_is_zero
from .poly import NCPoly, TensorPoly
from .presentations import U_GL2, get_presentation
from .rewrite import normal_form

_GROUPLIKE = ("K", "Kinv", "L", "Linv")

# Delta(E) = E (x) K + Kinv (x) E, and likewise for F
_DELTA_U = {
    "E": ((("E",), ("K",)), (("Kinv",), ("E",))),
    "F": ((("F",), ("K",)), (("Kinv",), ("F",))),
    "K": ((("K",), ("K",)),),
    "Kinv": ((("Kinv",), ("Kinv",)),),
    "L": ((("L",), ("L",)),),
    "Linv": ((("Linv",), ("Linv",)),),
}

_ANTIPODE = {"E": ("E", 1), "F": ("F", -1), "K": ("Kinv", 0),
             "Kinv": ("K", 0), "L": ("Linv", 0), "Linv": ("L", 0)}
# S(E) = -qE, S(F) = -q^{-1}F; the int k encodes the coefficient -q^k,
# with 0 meaning coefficient +1


def _check_u_side(x: NCPoly):
    for word in x.terms:
        for g in word:
            if g not in _DELTA_U:
                raise ValueError(f"{g} is not an enveloping-algebra letter")


def coproduct_U(f: NCPoly, ctx) -> TensorPoly:
    """Coproduct on words in E, F, K, Kinv, L, Linv."""
    _check_u_side(f)
    pres = get_presentation(ctx, "Uqgl2")
    out = TensorPoly()
    for word, co in f.terms.items():
        acc = TensorPoly.from_pair((), (), co)
        for g in word:
            step = TensorPoly()
            for w1, w2 in _DELTA_U[g]:
                step = step + TensorPoly.from_pair(w1, w2, ctx.one())
            acc = acc * step
        out = out + acc
    # componentwise normal form
    reduced = TensorPoly()
    for (w1, w2), co in out.terms.items():
        p1 = normal_form(NCPoly.from_word(w1, co), pres)
        p2 = normal_form(NCPoly.from_word(w2, ctx.one()), pres)
        for v1, c1 in p1.terms.items():
            for v2, c2 in p2.terms.items():
                reduced = reduced + TensorPoly.from_pair(v1, v2, c1 * c2)
    return reduced


def counit_U(f: NCPoly, ctx):
    _check_u_side(f)
    total = ctx.zero()
    for word, co in f.terms.items():
        if all(g in _GROUPLIKE for g in word):
            total = total + co
    return total


def _antipode(f: NCPoly, ctx, inverse: bool):
    _check_u_side(f)
    pres = get_presentation(ctx, "Uqgl2")
    out = NCPoly.zero()
    for word, co in f.terms.items():
        new_word = []
        for g in reversed(word):
            g2, k = _ANTIPODE[g]
            new_word.append(g2)
            if k:
                co = co * (-ctx.q_pow(-k if inverse else k))
        out = out + NCPoly.from_word(tuple(new_word), co)
    return normal_form(out, pres)


def antipode_U(f: NCPoly, ctx) -> NCPoly:
    """S, extended anti-multiplicatively; output normal-formed."""
    return _antipode(f, ctx, inverse=False)


def antipode_inv_U(f: NCPoly, ctx) -> NCPoly:
    """S^{-1}: S^{-1}(E) = -q^{-1}E, fixed on grouplikes."""
    return _antipode(f, ctx, inverse=True)


# ---------------------------------------------------------------------------
# right adjoint action


def _ad_letter(x: NCPoly, g, pres) -> NCPoly:
    """ad_R(g) x = S(g_(1)) x g_(2) for a single generator g."""
    ctx = pres.ctx
    out = NCPoly.zero()
    for w1, w2 in _DELTA_U[g]:
        left = _antipode(NCPoly.from_word(w1, ctx.one()), ctx, False)
        for lw, lc in left.terms.items():
            for xw, xc in x.terms.items():
                out = out + NCPoly.from_word(lw + xw + w2, lc * xc)
    return normal_form(out, pres)


def right_action(x: NCPoly, f: NCPoly, pres) -> NCPoly:
    """x ◁ f inside the cross product presentation pres.

    x must use coordinate letters of pres, f enveloping letters; the
    normal-formed adjoint action is checked to contain no enveloping
    letters before it is returned.
    """
    ctx = pres.ctx
    for word in x.terms:
        if any(g not in pres.coord_letters for g in word):
            raise ValueError(f"x is not purely coordinate-side: {word}")
    _check_u_side(f)
    x = normal_form(x, pres)
    out = NCPoly.zero()
    for word, co in f.terms.items():
        acted = x
        for g in word:
            acted = _ad_letter(acted, g, pres)
        out = out + acted.scale(co)
    for word in out.terms:
        if any(g in pres.u_letters for g in word):
            raise RuntimeError(
                f"right action left enveloping letters in {word}; "
                f"inconsistent rule set in {pres.name}")
    return out


# ---------------------------------------------------------------------------
# dual pairing with the matrix bialgebra


def _pair_tables(ctx):
    one = ctx.one()
    return {
        "K": {"a": ctx.qh_pow(-1), "d": ctx.qh_pow(1)},
        "Kinv": {"a": ctx.qh_pow(1), "d": ctx.qh_pow(-1)},
        "E": {"c": one},
        "F": {"b": one},
        "L": {"a": ctx.p_pow(1), "d": ctx.p_pow(1)},
        "Linv": {"a": ctx.p_pow(-1), "d": ctx.p_pow(-1)},
    }


_DELTA_COORD = {
    "a": ((("a",), ("a",)), (("b",), ("c",))),
    "b": ((("a",), ("b",)), (("b",), ("d",))),
    "c": ((("c",), ("a",)), (("d",), ("c",))),
    "d": ((("c",), ("b",)), (("d",), ("d",))),
}


def coord_coproduct(x: NCPoly, ctx) -> TensorPoly:
    """Matrix coproduct of the coordinate bialgebra, free on both legs."""
    out = TensorPoly()
    for word, co in x.terms.items():
        acc = TensorPoly.from_pair((), (), co)
        for g in word:
            step = TensorPoly()
            for w1, w2 in _DELTA_COORD[g]:
                step = step + TensorPoly.from_pair(w1, w2, ctx.one())
            acc = acc * step
        out = out + acc
    return out


def coord_counit(x: NCPoly, ctx):
    total = ctx.zero()
    for word, co in x.terms.items():
        if all(g in ("a", "d") for g in word):
            total = total + co
    return total


def _pair_letter_word(g, xw, tables, ctx):
    if g in _GROUPLIKE:
        acc = ctx.one()
        row = tables[g]
        for letter in xw:
            v = row.get(letter)
            if v is None:
                return ctx.zero()
            acc = acc * v
        return acc
    # E and F: Kinv's to the left of the hit, K's to the right
    row, kinv, kk = tables[g], tables["Kinv"], tables["K"]
    total = ctx.zero()
    for i, letter in enumerate(xw):
        v = row.get(letter)
        if v is None:
            continue
        acc = v
        ok = True
        for other in xw[:i]:
            u = kinv.get(other)
            if u is None:
                ok = False
                break
            acc = acc * u
        if not ok:
            continue
        for other in xw[i + 1:]:
            u = kk.get(other)
            if u is None:
                ok = False
                break
            acc = acc * u
        if ok:
            total = total + acc
    return total


def _pair_word(fw, xw, tables, ctx):
    if not fw:
        one_only = all(g in ("a", "d") for g in xw)
        return ctx.one() if one_only else ctx.zero()
    if len(fw) == 1:
        return _pair_letter_word(fw[0], xw, tables, ctx)
    f0, rest = fw[0], fw[1:]
    tens = coord_coproduct(NCPoly.from_word(xw, ctx.one()), ctx)
    total = ctx.zero()
    for (w1, w2), co in tens.terms.items():
        left = _pair_letter_word(f0, w1, tables, ctx)
        if scalar_is_zero(left):
            continue
        total = total + co * left * _pair_word(rest, w2, tables, ctx)
    return total


def pairing(f: NCPoly, x: NCPoly, ctx):
    """Dual pairing <f, x>, bilinear over the generator table."""
    _check_u_side(f)
    for word in x.terms:
        for g in word:
            if g not in _DELTA_COORD:
                raise ValueError(f"{g} is not a matrix-bialgebra letter")
    tables = _pair_tables(ctx)
    total = ctx.zero()
    for fw, cf in f.terms.items():
        for xw, cx in x.terms.items():
            total = total + cf * cx * _pair_word(fw, xw, tables, ctx)
    return total


def right_action_by_pairing(x: NCPoly, f: NCPoly, ctx) -> NCPoly:
    """Oracle route: x ◁ f = <f, x_(1)> x_(2) using the coordinate coproduct."""
    _check_u_side(f)
    tables = _pair_tables(ctx)
    out = NCPoly.zero()
    for fw, cf in f.terms.items():
        for xw, cx in x.terms.items():
            tens = coord_coproduct(NCPoly.from_word(xw, ctx.one()), ctx)
            for (w1, w2), co in tens.terms.items():
                v = _pair_word(fw, w1, tables, ctx)
                out = out + NCPoly.from_word(w2, cf * cx * co * v)
    return out


U_LETTERS = U_GL2
