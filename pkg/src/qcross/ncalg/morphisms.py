"""Algebra morphisms between the presented algebras.

theta is the flip isomorphism between the right and left cross products
of the enveloping algebra with the matrix bialgebra; rho embeds the
quantum 3-space into the quantum plane (and the sphere into the matrix
quotient); psi factors those embeddings through a central radius symbol.
All maps are extended multiplicatively and the image is normal-formed in
the target presentation.
"""

from __future__ import annotations

from .poly import NCPoly
from .presentations import get_presentation
from .rewrite import normal_form


def _apply_letter_map(x: NCPoly, images, ctx) -> NCPoly:
    out = NCPoly.zero()
    for word, co in x.terms.items():
        acc = NCPoly.from_word((), co)
        for g in word:
            img = images.get(g)
            if img is None:
                raise ValueError(f"{g} has no image under this morphism")
            acc = acc * img
        out = out + acc
    return out


def _theta_images(ctx):
    one = ctx.one()
    gen = NCPoly.from_word
    return {
        "a": gen(("a",), one), "d": gen(("d",), one),
        "b": gen(("c",), -ctx.q_pow(1)), "c": gen(("b",), -ctx.q_pow(-1)),
        "E": gen(("F",), one), "F": gen(("E",), one),
        "K": gen(("Kinv",), one), "Kinv": gen(("K",), one),
        "L": gen(("Linv",), one), "Linv": gen(("L",), one),
    }


def theta(x: NCPoly, ctx, to: str = "left") -> NCPoly:
    """Flip isomorphism between the two cross products.

    to="left" sends the right cross product onto the left one; to="right"
    is the inverse, given by the same letter images.
    """
    if to not in ("left", "right"):
        raise ValueError("to must be 'left' or 'right'")
    target = "OMq2xUqgl2_left" if to == "left" else "Uqgl2xOMq2"
    pres = get_presentation(ctx, target)
    return normal_form(_apply_letter_map(x, _theta_images(ctx), ctx), pres)


def _rho_images_r3(ctx):
    s = ctx.one_plus_q2_invsqrt()
    gen = NCPoly.from_word
    return {
        "x1": gen(("z2s", "z2s"), s) + gen(("z1", "z1"), -s * ctx.q_pow(-1)),
        "x2": gen(("z1s", "z2s"), ctx.one()) + gen(("z2", "z1"), ctx.one()),
        "x3": gen(("z2", "z2"), s * ctx.q_pow(1)) + gen(("z1s", "z1s"), -s),
    }


def _rho_images_s2(ctx):
    s = ctx.one_plus_q2_invsqrt()
    gen = NCPoly.from_word
    return {
        "y1": gen(("a", "a"), s) + gen(("b", "b"), -s * ctx.q_pow(-1)),
        "y2": gen(("d", "b"), ctx.one()) + gen(("c", "a"), -ctx.q_pow(1)),
        "y3": gen(("d", "d"), s * ctx.q_pow(1)) + gen(("c", "c"), -s * ctx.q_pow(2)),
    }


def _source_family(x: NCPoly, families):
    seen = set()
    for word in x.terms:
        seen.update(word)
    for name, letters in families.items():
        if seen <= set(letters):
            return name
    raise ValueError(f"letters {sorted(seen)} do not lie in one source "
                     f"algebra among {list(families)}")


def rho_embed(x: NCPoly, ctx) -> NCPoly:
    """Quadratic embedding: 3-space into the plane, sphere into the
    matrix quotient."""
    family = _source_family(x, {"r3": ("x1", "x2", "x3"),
                                "s2": ("y1", "y2", "y3")})
    if family == "r3":
        images, target = _rho_images_r3(ctx), "OhatC2q"
    else:
        images, target = _rho_images_s2(ctx), "OSUq2"
    pres = get_presentation(ctx, target)
    return normal_form(_apply_letter_map(x, images, ctx), pres)


def psi_embed(x: NCPoly, ctx) -> NCPoly:
    """Radius factorization: z_i through b,d times a central R; x_i
    through y_i times a central Q."""
    family = _source_family(x, {"c2": ("z1", "z1s", "z2", "z2s"),
                                "r3": ("x1", "x2", "x3")})
    one = ctx.one()
    gen = NCPoly.from_word
    if family == "c2":
        images = {
            "z1": gen(("b", "R"), one),
            "z2": gen(("d", "R"), one),
            "z1s": gen(("c", "R"), -ctx.q_pow(1)),
            "z2s": gen(("a", "R"), one),
        }
        target = "OSUq2_R"
    else:
        images = {
            "x1": gen(("y1", "Q"), one),
            "x2": gen(("y2", "Q"), one),
            "x3": gen(("y3", "Q"), one),
        }
        target = "OS2q_Q"
    pres = get_presentation(ctx, target)
    return normal_form(_apply_letter_map(x, images, ctx), pres)
