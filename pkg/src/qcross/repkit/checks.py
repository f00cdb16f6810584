"""Residual checks on truncated representations.

relation_residual evaluates a polynomial in the generator matrices and
measures it on interior basis vectors only, at a margin equal to the total
index-shift span of the relation, so the truncation cut cannot leak into
the verdict.  Float reps report a scale-normalized residual (several
series have coefficients growing without bound in the box size, so an
absolute figure would drown genuine transcription errors in roundoff);
exact-mode reps re-evaluate the relation in exact arithmetic, column by
column, and certify a hard zero.
"""

import math
from fractions import Fraction

import numpy as np
import scipy.sparse as sp

from ..exact import conj_scalar, scalar_is_zero, scalar_to_complex
from ..ncalg import NCPoly, get_presentation
from ..qscalars import casimir_eigenvalue


def poly_matrix(rep, poly: NCPoly) -> sp.csr_matrix:
    """Matrix of a noncommutative polynomial in the rep's generators."""
    dim = rep.dim
    out = sp.csr_matrix((dim, dim), dtype=complex)
    for word, co in poly.terms.items():
        m = sp.identity(dim, dtype=complex, format="csr")
        for g in word:
            m = m @ rep.matrix(g)
        out = out + scalar_to_complex(co) * m
    return out


def poly_margins(rep, poly: NCPoly):
    """Per-index margin: the worst total shift any monomial performs."""
    margins = {name: 0 for name in rep.box.names}
    for word in poly.terms:
        acc = {name: 0 for name in rep.box.names}
        for g in word:
            span = rep.spans.get(g)
            if span is None:
                raise KeyError(f"generator {g} not in series {rep.series}")
            for name, d in span.items():
                acc[name] += d
        for name in margins:
            margins[name] = max(margins[name], acc[name])
    return margins


def _interior(rep, margins):
    cols = rep.box.interior_columns(margins, g_dim=rep.g_dim)
    if cols.size == 0:
        raise ValueError(
            f"box too small: margin {margins} leaves no interior")
    return cols


def max_column_norm(mat, cols) -> float:
    sub = sp.csc_matrix(mat)[:, cols]
    sq = np.asarray(sub.multiply(sub.conj()).sum(axis=0)).real
    return float(np.sqrt(sq.max())) if sq.size else 0.0


def _col_norms(mat, cols):
    sub = sp.csc_matrix(mat)[:, cols]
    return np.sqrt(np.asarray(sub.multiply(sub.conj()).sum(axis=0)).real
                   ).reshape(-1)


def relation_residual(rep, relation: NCPoly) -> float:
    """Interior residual of a relation polynomial.

    Exact-mode reps: the relation is applied to every interior basis
    vector in exact arithmetic and the result is 0.0 iff every component
    cancels identically.  Float reps: per interior column i the residual
    norm ||R e_i|| is divided by max(scale_i, 1), where scale_i is the
    largest single-monomial contribution ||co . M_word e_i||; the max over
    columns is returned.
    """
    if rep.exact_terms is not None:
        return exact_relation_residual(rep, relation)
    margins = poly_margins(rep, relation)
    cols = _interior(rep, margins)
    dim = rep.dim
    total = sp.csr_matrix((dim, dim), dtype=complex)
    scale = np.ones(cols.shape[0])
    for word, co in relation.terms.items():
        m = sp.identity(dim, dtype=complex, format="csr")
        for g in word:
            m = m @ rep.matrix(g)
        m = scalar_to_complex(co) * m
        total = total + m
        scale = np.maximum(scale, _col_norms(m, cols))
    resid = _col_norms(total, cols)
    return float((resid / scale).max()) if resid.size else 0.0


def _in_box(box, tgt):
    for v, lo, hi in zip(tgt, box.los, box.his):
        if v < lo or v > hi:
            return False
    return True


def exact_apply_gen(rep, gen, vec) -> dict:
    """Apply one generator to a sparse exact vector {point tuple: scalar};
    image components leaving the box are dropped (truncation)."""
    if rep.exact_terms is None:
        raise ValueError("rep was not built with exact coefficients")
    terms = rep.exact_terms.get(gen)
    if terms is None:
        raise KeyError(f"generator {gen} not in series {rep.series}")
    box = rep.box
    names = box.names
    cache = rep._exact_app_cache
    new = {}
    for src, cval in vec.items():
        hits = cache.get((gen, src))
        if hits is None:
            sd = dict(zip(names, src))
            hits = []
            for shift, fn in terms:
                tgt = tuple(sd[n] + shift.get(n, 0) for n in names)
                if _in_box(box, tgt):
                    hits.append((tgt, fn(**sd)))
            cache[(gen, src)] = hits
        for tgt, base in hits:
            add = cval * base
            prev = new.get(tgt)
            new[tgt] = add if prev is None else prev + add
    return new


def exact_vector_norm(vec) -> float:
    """l2 norm of a sparse exact vector, via exact |component|^2 sums
    whenever the squares are rational."""
    total = Fraction(0)
    extra = 0.0
    for c in vec.values():
        sq = c * conj_scalar(c)
        try:
            total += sq.as_fraction()
        except (AttributeError, ValueError):
            extra += abs(scalar_to_complex(c)) ** 2
    return math.sqrt(float(total) + extra)


def exact_relation_residual(rep, relation: NCPoly) -> float:
    """Apply the relation to each interior basis vector in exact
    arithmetic; returns 0.0 when every component is an exact zero, else
    the largest absolute leftover."""
    if rep.exact_terms is None:
        raise ValueError("rep was not built with exact coefficients")
    box = rep.box
    names = box.names
    margins = poly_margins(rep, relation)
    ranks = np.nonzero(box.interior_mask(margins))[0]
    if ranks.size == 0:
        raise ValueError(
            f"box too small: margin {margins} leaves no interior")
    worst = 0.0
    for rank in ranks:
        pt = box.point_of(int(rank))
        start = tuple(pt[n] for n in names)
        acc = {}
        for word, co in relation.terms.items():
            vec = {start: co}
            for g in reversed(word):
                vec = exact_apply_gen(rep, g, vec)
            for tgt, cval in vec.items():
                prev = acc.get(tgt)
                acc[tgt] = cval if prev is None else prev + cval
        for v in acc.values():
            if not scalar_is_zero(v):
                worst = max(worst, abs(scalar_to_complex(v)))
    return worst


def all_relation_residuals(rep) -> dict:
    """Residuals of every defining and cross relation of the matching
    presentation, keyed by a readable relation label."""
    pres = get_presentation(rep.ctx, rep.algebra)
    ctx = rep.ctx
    out = {}
    for (u, v), rhs in pres.rules2.items():
        poly = NCPoly.from_word((u, v), ctx.one())
        for word, s in rhs:
            poly = poly + NCPoly.from_word(word, -s)
        out[f"{u}*{v}"] = relation_residual(rep, poly)
    for g, rhs in pres.rules1.items():
        poly = NCPoly.from_word((g,), ctx.one())
        for word, s in rhs:
            poly = poly + NCPoly.from_word(word, -s)
        out[g] = relation_residual(rep, poly)
    return out


def casimir_matrix(rep, check=True, tol=1e-12) -> sp.csr_matrix:
    """EF + lambda^{-2}(q^{-1}K^2 + qK^{-2} - 2); cross-checked against the
    FE form on the interior."""
    for g in ("E", "F", "K", "Kinv"):
        if g not in rep.matrices:
            raise KeyError(f"series {rep.series} has no generator {g}")
    q = float(rep.ctx.q)
    lam2 = (q - 1.0 / q) ** 2
    E, F = rep.matrix("E"), rep.matrix("F")
    K, Ki = rep.matrix("K"), rep.matrix("Kinv")
    I = rep.identity()
    K2, Ki2 = K @ K, Ki @ Ki
    form1 = E @ F + (K2 / q + q * Ki2 - 2 * I) / lam2
    if check:
        form2 = F @ E + (q * K2 + Ki2 / q - 2 * I) / lam2
        margins = {name: rep.spans["E"].get(name, 0)
                   + rep.spans["F"].get(name, 0) for name in rep.box.names}
        cols = _interior(rep, margins)
        scale = np.maximum(1.0, np.maximum(_col_norms(form1, cols),
                                           _col_norms(form2, cols)))
        diff = (_col_norms(form1 - form2, cols) / scale).max()
        if diff > tol:
            raise ValueError(
                f"casimir closed forms disagree on interior: {diff:.3e}")
    return form1


def spin_casimir_exact(ctx, l):
    """Rational-arithmetic proof that the casimir acts as the scalar
    [l+1/2]^2 on the spin-l representation.

    Works with the squared step coefficients [l+j][l-j+1], which are
    rational for every half-integer l, so no square roots enter.  Returns
    (worst deviation, eigenvalue) as Fractions; a worst of 0 means both
    closed forms agree with the scalar on every weight vector.
    """
    two_l = int(round(2 * float(l)))
    if abs(2 * Fraction(l) - two_l) != 0 or two_l < 0:
        raise ValueError("l must be a nonnegative half-integer")
    q = Fraction(ctx.q)
    lam2 = (q - 1 / q) ** 2

    def qn(m):
        return (q ** m - q ** -m) / (q - 1 / q)

    # ([l+1/2])^2 = (q^{2l+1} + q^{-2l-1} - 2)/lambda^2, rational
    expect = (q ** (two_l + 1) + q ** (-two_l - 1) - 2) / lam2
    worst = Fraction(0)
    for n in range(two_l + 1):
        k2 = q ** (2 * n - two_l)          # q^{2j} with j = n - l
        ef = qn(n) * qn(two_l - n + 1)     # (alpha_{j,l})^2 = E F weight
        fe = qn(n + 1) * qn(two_l - n)     # (alpha_{j+1,l})^2 = F E weight
        v1 = ef + (k2 / q + q / k2 - 2) / lam2
        v2 = fe + (q * k2 + 1 / (q * k2) - 2) / lam2
        worst = max(worst, abs(v1 - expect), abs(v2 - expect))
    return worst, expect


def spin_casimir_residual(rep) -> float:
    """SpinL only: distance of the casimir matrix from its scalar value."""
    if rep.series != "SpinL":
        raise ValueError("spin_casimir_residual needs a SpinL rep")
    c = casimir_matrix(rep)
    ev = float(casimir_eigenvalue(rep.ctx, rep.params.spin))
    d = c - ev * rep.identity()
    return float(np.abs(d.toarray()).max())


def star_residuals(rep, tol_margin=None) -> dict:
    """For each generator g with g* = co g', compare conj-transpose of g
    against co g' on the interior. Returns max entry deviations."""
    pres = get_presentation(rep.ctx, rep.algebra)
    out = {}
    for g in rep.matrices:
        st = pres.star_table.get(g)
        if st is None:
            continue
        gp, co = st
        if gp not in rep.matrices:
            continue
        margins = {}
        for name in rep.box.names:
            margins[name] = max(rep.spans[g].get(name, 0),
                                rep.spans[gp].get(name, 0))
        cols = _interior(rep, margins)
        diff = (rep.matrix(g).conj().T.tocsr()
                - scalar_to_complex(co) * rep.matrix(gp))
        sub = sp.csc_matrix(diff)[:, cols][cols, :]
        out[g] = float(np.abs(sub.data).max()) if sub.nnz else 0.0
    return out


def charge_residual(rep, charge_fns, shifts) -> dict:
    """Verify sparsity patterns conserve lattice charges.

    charge_fns: list of fn(point dict) -> int; shifts: generator ->
    tuple of expected charge increments. Returns per-generator count of
    violating entries (0 everywhere means the pattern holds)."""
    box = rep.box
    fd, g_dim = box.fiber_dim, rep.g_dim
    out = {}
    for gen, expect in shifts.items():
        coo = sp.coo_matrix(rep.matrix(gen))
        bad = 0
        for r, c, val in zip(coo.row, coo.col, coo.data):
            if abs(val) < 1e-15:
                continue
            if r < g_dim or c < g_dim:
                continue
            pin = box.point_of((c - g_dim) // fd)
            pout = box.point_of((r - g_dim) // fd)
            got = tuple(f(pout) - f(pin) for f in charge_fns)
            if got != tuple(expect):
                bad += 1
        out[gen] = bad
    return out


SU2SU2_CHARGES = (lambda pt: pt["n"] + pt["l"],
                  lambda pt: -pt["n"] + 2 * pt["k"] + pt["l"])

# (delta s, delta wgt) with s = n+l and wgt = -n+2k+l: E and F preserve s
# and move the weight by +-2; coordinate letters move both by one.
SU2SU2_CHARGE_SHIFTS = {
    "E": (0, 2), "F": (0, -2), "K": (0, 0), "Kinv": (0, 0),
    "a": (-1, 1), "b": (1, 1), "c": (-1, -1), "d": (1, -1),
}
