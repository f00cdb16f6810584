"""Invariant functionals on the quantum coordinate algebras.

Four independent routes to the bi-invariant state h:

* the closed formula on the monomial basis (haar_monomial, haar_eval),
* a spectrally regularized trace against the casimir operator
  (quantum_trace_haar, with the normalizing series zeta),
* a partial trace along a single lattice chain (partial_trace_haar),
* vacuum expectation in a distinguished vector (StateFunctional kind
  GnsVacuum; the representation-level machinery lives in gnskit).

The closed formula is exact rational arithmetic; the trace routes are
numerical with reported truncation diagnostics, and agreement across
routes is what the test suite leans on.  jackson_state integrates a
radius-function weight over the scaling lattice t0*p^n, n in Z.
"""

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import scipy.sparse as sp

from .exact import scalar_to_complex
from .ncalg import (NCPoly, counit_U, get_presentation, normal_form,
                    rho_embed, right_action)
from .qscalars import QContext, q_number
from .repkit import casimir_matrix, max_column_norm, poly_margins, poly_matrix

_COORD_LETTERS = frozenset("abcd")
_SPHERE_LETTERS = frozenset(("y1", "y2", "y3"))


# ---------------------------------------------------------------------------
# closed formula


def haar_monomial(ctx: QContext, r: int, k: int, l: int, head: str = "a"):
    """Value of h on b^k c^l a^r (or b^k c^l d^r): nonzero only for r=0,
    k=l, where it is (-1)^k / [k+1]_q."""
    if head not in ("a", "d"):
        raise ValueError("head must be 'a' or 'd'")
    if min(r, k, l) < 0 or (r, k, l) != (int(r), int(k), int(l)):
        raise ValueError("exponents must be non-negative integers")
    if ctx.mode == "exact":
        if r != 0 or k != l:
            return Fraction(0)
        return Fraction(-1 if k % 2 else 1) / q_number(ctx, k + 1)
    if r != 0 or k != l:
        return 0.0
    return (-1.0 if k % 2 else 1.0) / q_number(ctx, k + 1)


def _basis_exponents(word):
    """Split a normal-form coordinate word into (r, k, l, head)."""
    k = l = r = 0
    head = "a"
    i = 0
    while i < len(word) and word[i] == "b":
        k += 1
        i += 1
    while i < len(word) and word[i] == "c":
        l += 1
        i += 1
    if i < len(word):
        head = word[i]
        if head not in ("a", "d"):
            raise RuntimeError(f"word {word} is not in the monomial basis")
        while i < len(word) and word[i] == head:
            r += 1
            i += 1
    if i != len(word):
        raise RuntimeError(f"word {word} is not in the monomial basis")
    return r, k, l, head


def haar_eval(ctx: QContext, x: NCPoly):
    """h(x) for x in the coordinate algebra; sphere polynomials are routed
    through the quadratic embedding first.  Exact mode returns an exact
    scalar (rational whenever the input coefficients are)."""
    letters = {g for word in x.terms for g in word}
    if letters <= _SPHERE_LETTERS:
        if letters:
            x = rho_embed(x, ctx)
    elif not letters <= _COORD_LETTERS:
        raise ValueError(
            f"haar_eval expects letters in {sorted(_COORD_LETTERS)} or "
            f"{sorted(_SPHERE_LETTERS)}, got {sorted(letters)}")
    pres = get_presentation(ctx, "OSUq2")
    nf = normal_form(x, pres)
    acc = ctx.zero()
    for word, co in nf.terms.items():
        r, k, l, head = _basis_exponents(word)
        acc = acc + co * ctx.scalar(haar_monomial(ctx, r, k, l, head))
    return acc


def invariance_check(ctx: QContext, x: NCPoly, f: NCPoly, state=None) -> float:
    """|state(x <| f) - eps(f) state(x)|.  Zero identically for the closed
    formula in exact mode; small for the truncated-trace routes."""
    cross = get_presentation(ctx, "Uqsu2xOSUq2")
    if state is None:
        state = lambda poly: haar_eval(ctx, poly)
    acted = right_action(x, f, cross)
    eps = counit_U(f, ctx)
    gap = scalar_to_complex(state(acted)) \
        - scalar_to_complex(eps) * scalar_to_complex(state(x))
    return abs(gap)


# ---------------------------------------------------------------------------
# spectrally regularized trace


def zeta(ctx: QContext, z, tol: float = 1e-16, max_terms: int = 200000):
    """The normalizing series sum_{n>=1} n [n/2]_q^{-2z} [n]_q, Re z > 1.

    Evaluated in log space so large n cannot overflow; terms decay like
    n q^{n(Re z - 1)}."""
    zc = complex(z)
    if zc.real <= 1.0:
        raise ValueError("zeta needs Re z > 1")
    q = float(ctx.q)
    lnq = math.log(q)
    acc = 0.0 + 0.0j
    for n in range(1, max_terms + 1):
        qn = q ** n
        ln_base = -(n / 2.0) * lnq + math.log1p(-qn)     # q^{-n/2} - q^{n/2}
        ln_last = -n * lnq + math.log1p(-(qn * qn))      # q^{-n} - q^{n}
        term = n * cmath.exp(-2.0 * zc * ln_base + ln_last)
        acc += term
        if n >= 16 and abs(term) < tol * abs(acc):
            break
    else:
        raise ValueError("zeta did not converge within max_terms")
    value = acc * cmath.exp((2.0 * zc - 1.0) * math.log(1.0 / q - q))
    if isinstance(z, (int, float, Fraction)):
        return value.real
    return value


def _heisenberg_guard(rep):
    if rep.series != "SU2SU2_I":
        raise ValueError("quantum trace route needs the SU2SU2_I series")
    pr = rep.params
    if pr.H is not None and not np.allclose(np.asarray(pr.H, float), 1.0):
        raise ValueError("quantum trace route needs H = 1")
    if pr.epsilon != 1:
        raise ValueError("quantum trace route needs epsilon = 1")
    if rep.box.fiber_dim != 1 or rep.g_dim:
        raise ValueError("quantum trace route needs a 1-dim fiber")


def _interior_ranks(rep, margin_by_name):
    box = rep.box
    cols = box.cols()
    mask = np.ones(box.npoints, dtype=bool)
    for i, name in enumerate(box.names):
        locut, hicut = box.cuts[i]
        m = margin_by_name[name]
        if locut:
            mask &= cols[name] >= box.los[i] + m
        if hicut:
            mask &= cols[name] <= box.his[i] - m
    return np.flatnonzero(mask)


def _sector_layout(rep, ints):
    """Charge sectors (s, wgt) = (n + l, -n + 2k + l); each is a chain
    ordered by n.  Returns global lookup arrays sec_of, pos_of and the
    per-sector chain lengths."""
    cols = rep.box.cols_at(ints)
    n, k, l = cols["n"], cols["k"], cols["l"]
    s_lab = n + l
    w_lab = -n + 2 * k + l
    span = int(w_lab.max() - w_lab.min() + 1) if ints.size else 1
    key = (s_lab - s_lab.min()) * span + (w_lab - w_lab.min())
    order = np.lexsort((n, key))
    key_sorted = key[order]
    new = np.r_[True, key_sorted[1:] != key_sorted[:-1]]
    starts = np.flatnonzero(new)
    counts = np.diff(np.r_[starts, key_sorted.size])
    sec_of = np.full(rep.dim, -1, dtype=np.int64)
    pos_of = np.zeros(rep.dim, dtype=np.int64)
    ranks_sorted = ints[order]
    sec_of[ranks_sorted] = np.repeat(np.arange(starts.size), counts)
    pos_of[ranks_sorted] = np.arange(key_sorted.size) \
        - np.repeat(starts, counts)
    return sec_of, pos_of, counts


def _bucket_entries(mat, sec_of, pos_of, nsec):
    """Same-sector interior entries of a sparse matrix, grouped by sector.

    Returns (sec_sorted, pos_rows, pos_cols, vals, off_sector_max) where
    off_sector_max is the largest magnitude of an entry coupling two
    different interior sectors (must vanish for sector-preserving
    operators)."""
    coo = sp.coo_matrix(mat)
    ri, ci, vi = coo.row, coo.col, coo.data
    both = (sec_of[ri] >= 0) & (sec_of[ci] >= 0)
    same = both & (sec_of[ri] == sec_of[ci])
    off = both & ~same
    off_max = float(np.abs(vi[off]).max()) if off.any() else 0.0
    ri, ci, vi = ri[same], ci[same], vi[same]
    sec = sec_of[ri]
    o = np.argsort(sec, kind="stable")
    return sec[o], pos_of[ri[o]], pos_of[ci[o]], vi[o], off_max


def quantum_trace_haar(x: NCPoly, z, rep, margin=None, dense: bool = False):
    """h(x) as zeta(z)^{-1} Tr C^{-z} K^{-2} x on the interior of a charge
    sector decomposition.

    Within the interior every kept matrix entry agrees with the infinite
    lattice, so the per-sector casimir blocks are principal submatrices of
    a positive operator and C^{-z} is computed by Hermitian
    eigendecomposition chain by chain.  dense=True bypasses the sector
    split (small boxes only) as a cross-check.
    """
    zc = complex(z)
    if zc.real <= 1.0:
        raise ValueError("quantum trace needs Re z > 1")
    _heisenberg_guard(rep)
    mx = poly_margins(rep, x)
    need = {name: max(2, mx.get(name, 0) + 2) for name in rep.box.names}
    if margin is not None:
        need = {name: max(margin, v) for name, v in need.items()}
    ints = _interior_ranks(rep, need)
    if ints.size == 0:
        raise ValueError("box too small: no interior at the casimir margin")

    zt = zeta(rep.ctx, z)
    C = casimir_matrix(rep, check=False)
    M = rep.matrix("Kinv") @ rep.matrix("Kinv") @ poly_matrix(rep, x)

    if dense:
        if ints.size > 6000:
            raise ValueError("dense cross-check path is for small boxes")
        Cd = C[np.ix_(ints, ints)].toarray()
        ev, U = np.linalg.eigh(Cd)
        if ev.min() <= 0.0:
            raise ValueError("casimir not positive definite on the "
                             "interior; box too small")
        A = (U * ev ** (-zc)) @ U.conj().T
        Md = M[np.ix_(ints, ints)].toarray()
        raw = complex((A * Md.T).sum())
        diag = {"raw_trace": raw, "zeta": zt, "interior_points": ints.size,
                "min_casimir_eig": float(ev.min()), "sectors": 1,
                "margin": need}
        return raw / zt, diag

    sec_of, pos_of, counts = _sector_layout(rep, ints)
    nsec = counts.size
    csec, crow, ccol, cval, c_off = _bucket_entries(C, sec_of, pos_of, nsec)
    if c_off > 1e-10:
        raise ValueError(f"casimir couples different charge sectors "
                         f"(max {c_off:.2e}); sector decomposition invalid")
    msec, mrow, mcol, mval, _ = _bucket_entries(M, sec_of, pos_of, nsec)

    cb = np.searchsorted(csec, np.arange(nsec + 1))
    mb = np.searchsorted(msec, np.arange(nsec + 1))
    raw = 0.0 + 0.0j
    min_eig = math.inf
    touched = 0
    for s in range(nsec):
        if mb[s] == mb[s + 1]:
            continue
        touched += 1
        m = int(counts[s])
        Cs = np.zeros((m, m))
        sl = slice(cb[s], cb[s + 1])
        Cs[crow[sl], ccol[sl]] = cval[sl].real
        ev, U = np.linalg.eigh(Cs)
        if ev.min() <= 0.0:
            raise ValueError("casimir not positive definite on the "
                             "interior; box too small")
        min_eig = min(min_eig, float(ev.min()))
        A = (U * ev ** (-zc)) @ U.conj().T
        Ms = np.zeros((m, m), dtype=complex)
        sl = slice(mb[s], mb[s + 1])
        Ms[mrow[sl], mcol[sl]] = mval[sl]
        raw += (A * Ms.T).sum()
    diag = {"raw_trace": complex(raw), "zeta": zt,
            "interior_points": int(ints.size), "sectors": int(nsec),
            "sectors_touched": int(touched),
            "min_casimir_eig": None if touched == 0 else min_eig,
            "margin": need}
    return complex(raw) / zt, diag


# ---------------------------------------------------------------------------
# partial trace along one chain


def _chain_point_guard(box, margins, pt):
    for i, name in enumerate(box.names):
        v = int(pt[name])
        lo, hi = box.los[i], box.his[i]
        locut, hicut = box.cuts[i]
        if v < lo or v > hi:
            raise ValueError(f"sequence exits the box: {name}={v}")
        m = margins.get(name, 0)
        if (hicut and v + m > hi) or (locut and v - m < lo):
            raise ValueError(
                f"sequence too close to the cut: {name}={v} needs margin {m}")


def partial_trace_haar(x: NCPoly, rep, seq_k=None, seq_l=None, N=None):
    """h(x) as (1-q^2) sum_n q^{2n} <x eta_{n,k_n,l_n}, eta_{n,k_n,l_n}>.

    Default chain k_n = 0, l_n = -n; any integer sequences staying inside
    the box (at the word's margin from the cuts) give the same value."""
    if rep.series != "SU2SU2_I":
        raise ValueError("partial trace route needs the SU2SU2_I series")
    if rep.box.fiber_dim != 1 or rep.g_dim:
        raise ValueError("partial trace route needs a 1-dim fiber")
    box = rep.box
    q = float(rep.ctx.q)
    margins = poly_margins(rep, x)
    if N is None:
        N = box.his[0] - max(margins.values(), default=0)
    if N < 0:
        raise ValueError("box too small for this polynomial")
    ks = [0] * (N + 1) if seq_k is None else list(seq_k[:N + 1])
    ls = [-n for n in range(N + 1)] if seq_l is None else list(seq_l[:N + 1])
    if len(ks) != N + 1 or len(ls) != N + 1:
        raise ValueError(f"need sequence values for n = 0..{N}")
    X = poly_matrix(rep, x).tocsr()
    acc = 0.0 + 0.0j
    for n in range(N + 1):
        pt = {"n": n, "k": ks[n], "l": ls[n]}
        _chain_point_guard(box, margins, pt)
        r = box.rank_of(**pt)
        acc += q ** (2 * n) * X[r, r]
    value = (1.0 - q * q) * complex(acc)
    tail = q ** (2 * (N + 1)) * max_column_norm(X, np.arange(rep.dim))
    return value, {"N": N, "tail_bound": float(tail)}


def lemma_trace_swap(x: NCPoly, f_name: str, rep, N=None):
    """Partial traces of f x and x f over the default chain, and their gap.

    f ranges over the three combinations that leave the chain's diagonal
    reachable; the gap vanishing (as N grows) is what makes the partial
    trace invariant."""
    mats = {
        "EKinv": lambda: rep.matrix("E") @ rep.matrix("Kinv"),
        "FKinv": lambda: rep.matrix("F") @ rep.matrix("Kinv"),
        "Kinv": lambda: rep.matrix("Kinv"),
    }
    if f_name not in mats:
        raise ValueError(f"f must be one of {sorted(mats)}")
    if rep.series != "SU2SU2_I":
        raise ValueError("partial trace route needs the SU2SU2_I series")
    box = rep.box
    margins = {name: m + 2 for name, m in poly_margins(rep, x).items()}
    if N is None:
        N = box.his[0] - max(margins.values(), default=0)
    F = mats[f_name]().tocsr()
    X = poly_matrix(rep, x).tocsr()
    T1 = (F @ X).tocsr()
    T2 = (X @ F).tocsr()
    t1 = 0.0 + 0.0j
    t2 = 0.0 + 0.0j
    for n in range(N + 1):
        pt = {"n": n, "k": 0, "l": -n}
        _chain_point_guard(box, margins, pt)
        r = box.rank_of(**pt)
        t1 += T1[r, r]
        t2 += T2[r, r]
    return complex(t1), complex(t2), abs(complex(t1) - complex(t2))


# ---------------------------------------------------------------------------
# scaling-lattice integral


def jackson_lattice_sum(ctx: QContext, phi, t0, support):
    """sum over n in Z of phi(t0 p^n) p^n for phi supported in
    [lo, hi] with 0 < lo <= hi < infinity."""
    p = float(ctx.p)
    t0 = float(t0)
    win_lo = min(p, 1.0 / p)
    if not win_lo < t0 <= 1.0:
        raise ValueError(f"t0 must lie in ({win_lo}, 1]")
    lo, hi = float(support[0]), float(support[1])
    if not (0.0 < lo <= hi) or math.isinf(hi):
        raise ValueError("support must be a compact interval in (0, inf)")
    lnp = math.log(p)
    bounds = sorted((math.log(lo / t0) / lnp, math.log(hi / t0) / lnp))
    n_lo = math.floor(bounds[0]) - 1
    n_hi = math.ceil(bounds[1]) + 1
    acc = 0.0
    for n in range(n_lo, n_hi + 1):
        t = t0 * p ** n
        if lo <= t <= hi:
            acc += phi(t) * p ** n
    return acc


def jackson_state(ctx: QContext, x: NCPoly, phi, t0, support):
    """h(x) times the scaling-lattice integral of phi.

    The weight factorizes over the radius function, so the value is the
    closed-formula state scaled by a finite lattice sum."""
    s = jackson_lattice_sum(ctx, phi, t0, support)
    return scalar_to_complex(haar_eval(ctx, x)) * s


# ---------------------------------------------------------------------------
# uniform wrapper


@dataclass(frozen=True)
class StateFunctional:
    """One of the invariant-state routes behind a single evaluate().

    kinds: HaarFormula; QuantumTrace (options z, rep); PartialTrace
    (options rep, seq_k, seq_l, N); Jackson (options phi, t0, support --
    normalized by the weight's lattice mass so that evaluate(1) = 1);
    GnsVacuum (options rep, v).
    """
    kind: str
    ctx: QContext
    options: dict = field(default_factory=dict)

    def evaluate(self, x: NCPoly):
        o = self.options
        if self.kind == "HaarFormula":
            return haar_eval(self.ctx, x)
        if self.kind == "QuantumTrace":
            val, _ = quantum_trace_haar(x, o["z"], o["rep"],
                                        margin=o.get("margin"),
                                        dense=o.get("dense", False))
            return val
        if self.kind == "PartialTrace":
            val, _ = partial_trace_haar(x, o["rep"], o.get("seq_k"),
                                        o.get("seq_l"), o.get("N"))
            return val
        if self.kind == "Jackson":
            mass = jackson_lattice_sum(self.ctx, o["phi"], o["t0"],
                                       o["support"])
            return jackson_state(self.ctx, x, o["phi"], o["t0"],
                                 o["support"]) / mass
        if self.kind == "GnsVacuum":
            rep, v = o["rep"], np.asarray(o["v"], dtype=complex)
            num = complex(np.vdot(v, poly_matrix(rep, x) @ v))
            return num / float(np.vdot(v, v).real)
        raise KeyError(f"unknown state kind {self.kind!r}")
