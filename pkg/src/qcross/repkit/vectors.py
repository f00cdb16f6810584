"""Distinguished vectors of the cross product series and the
lowest-weight descent probe.

The partial-sum vectors are aligned with the box cut: choosing N_cut equal
to the box size makes every out-of-range image component of E, F fall
outside the box, where truncation drops it, so the annihilation identities
hold exactly on the truncated space instead of up to a boundary leak.
"""

import math

import numpy as np

from ..exact import Exact
from ..qscalars import q_number


def _fnum(x):
    return float(x)


def _vec(rep):
    return np.zeros(rep.dim, dtype=complex)


def _put(rep, vec, coeff_fiber, **pt):
    rank = rep.box.rank_of(**pt)
    fd = rep.box.fiber_dim
    base = rep.g_dim + rank * fd
    vec[base:base + fd] += coeff_fiber


def _norm(v):
    return float(np.linalg.norm(v))


def _apply(rep, gen, v):
    return rep.matrix(gen) @ v


def _fiber_diag(rep, name):
    val = getattr(rep.params, name)
    fd = rep.box.fiber_dim
    if val is None:
        return np.ones(fd)
    if isinstance(val, Exact):
        val = val.to_complex().real
    arr = np.asarray(val, dtype=float)
    if arr.ndim == 0:
        return np.full(fd, float(arr))
    if arr.ndim == 1:
        return arr
    return np.diag(arr)


def _fiber_matrix(rep, name):
    val = getattr(rep.params, name)
    fd = rep.box.fiber_dim
    if val is None:
        return np.eye(fd, dtype=complex)
    if isinstance(val, Exact):
        val = val.to_complex()
    arr = np.asarray(val, dtype=complex)
    if arr.ndim == 0:
        return complex(arr) * np.eye(fd)
    if arr.ndim == 1:
        return np.diag(arr)
    return arr


def special_vector(kind, rep, N_cut=None, seed=None):
    """Truncated partial sum of a distinguished vector, with diagnostics.

    kinds: v0_I_H1 (the cyclic vector sum (-q)^n H^{2n} eta_{n,n,-n}),
    v_half (sum w^n q^n alpha_{n+1} eta_{n,n}), v0_S2 (the normalized
    (1-q^2)^{1/2} sum q^n w^n zeta at eta_{n,n}).
    """
    q = float(rep.ctx.q)
    fd = rep.box.fiber_dim
    if seed is None:
        seed = np.ones(fd, dtype=complex) / math.sqrt(fd)
    else:
        seed = np.asarray(seed, dtype=complex)
        if seed.shape != (fd,):
            raise ValueError(f"seed must have fiber dimension {fd}")
    v = _vec(rep)
    diag = {}

    if kind == "v0_I_H1":
        if rep.series != "SU2SU2_I":
            raise ValueError("v0_I_H1 lives in series SU2SU2_I")
        box = rep.box
        nmax = min(box.his[box.names.index("n")],
                   box.his[box.names.index("k")],
                   -box.los[box.names.index("l")])
        N = nmax if N_cut is None else min(N_cut, nmax)
        hd = _fiber_diag(rep, "H")
        for n in range(N + 1):
            _put(rep, v, ((-q) ** n) * hd ** (2 * n) * seed, n=n, k=n, l=-n)
        hvec = np.tile(hd, rep.box.npoints).astype(complex)
        if rep.g_dim:
            hvec = np.concatenate([np.ones(rep.g_dim), hvec])
        diag["norm"] = _norm(v)
        diag["E_residual"] = _norm(_apply(rep, "E", v))
        diag["F_residual"] = _norm(_apply(rep, "F", v))
        diag["K_minus_H_residual"] = _norm(_apply(rep, "K", v) - hvec * v)

    elif kind == "v_half":
        if rep.series not in ("SU2R3_I", "SU2S2_I"):
            raise ValueError("v_half lives in the R3/S2 cross series")
        # the two E-image terms cancel through alpha_{m+1} lambda_{m+1}
        # = lambda_{2m+2}, which needs H^2 = q and w^2 = 1
        hd = _fiber_diag(rep, "H")
        if np.abs(hd - math.sqrt(q)).max() > 1e-9:
            raise ValueError("v_half needs H = q^(1/2)")
        box = rep.box
        nmax = min(box.his[box.names.index("n")],
                   box.his[box.names.index("k")])
        N = nmax if N_cut is None else min(N_cut, nmax)
        wm = _fiber_matrix(rep, "w")
        acc = seed.copy()
        for n in range(N + 1):
            alpha = math.sqrt(1.0 + q ** (2 * (n + 1)))
            _put(rep, v, (q ** n) * alpha * acc, n=n, k=n)
            acc = wm @ acc
        qh = math.sqrt(q)
        diag["norm"] = _norm(v)
        diag["E_residual"] = _norm(_apply(rep, "E", v))
        diag["K_weight_residual"] = _norm(_apply(rep, "K", v) - qh * v)
        fv = _apply(rep, "F", v)
        diag["F_image_norm"] = _norm(fv)
        diag["F_image_K_weight_residual"] = _norm(
            _apply(rep, "K", fv) - fv / qh)
        diag["F_squared_residual"] = _norm(_apply(rep, "F", fv))

    elif kind == "v0_S2":
        if rep.series != "SU2S2_I":
            raise ValueError("v0_S2 lives in series SU2S2_I")
        box = rep.box
        nmax = min(box.his[box.names.index("n")],
                   box.his[box.names.index("k")])
        N = nmax if N_cut is None else min(N_cut, nmax)
        wm = _fiber_matrix(rep, "w")
        c = math.sqrt(1.0 - q ** 2)
        acc = seed.copy()
        for n in range(N + 1):
            _put(rep, v, c * (q ** n) * acc, n=n, k=n)
            acc = wm @ acc
        diag["norm"] = _norm(v)
        diag["E_residual"] = _norm(_apply(rep, "E", v))
        diag["F_residual"] = _norm(_apply(rep, "F", v))
        diag["K_residual"] = _norm(_apply(rep, "K", v) - v)

    else:
        raise KeyError(f"unknown special vector kind {kind!r}")

    return v, diag


def exact_special_vector(kind, rep, N_cut=None):
    """Exact-arithmetic twin of special_vector; annihilation norms are
    computed in exact scalars, so a zero really is zero at every
    truncation size (float evaluation of the same norms drowns in
    q^{-N}-amplified cancellation noise).

    kinds: v0_I_H1 (needs rational H), v_half (needs H = q^{1/2} passed
    as an exact scalar and w = +-1).  Returns (sparse vector {point:
    scalar}, diagnostics).
    """
    from fractions import Fraction

    from .checks import exact_apply_gen, exact_vector_norm

    if rep.exact_terms is None:
        raise ValueError("rep was not built with exact coefficients")
    ctx = rep.ctx
    q = Fraction(ctx.q)
    box = rep.box

    def scaled_diff(applied, scale, vec):
        return {pt: c - scale * vec.get(pt, ctx.zero())
                for pt, c in applied.items()}

    if kind == "v0_I_H1":
        if rep.series != "SU2SU2_I":
            raise ValueError("v0_I_H1 lives in series SU2SU2_I")
        nmax = min(box.his[box.names.index("n")],
                   box.his[box.names.index("k")],
                   -box.los[box.names.index("l")])
        N = nmax if N_cut is None else min(N_cut, nmax)
        h = rep.params.H
        h = Fraction(h) if h is not None else Fraction(1)
        vec = {}
        for n in range(N + 1):
            vec[(n, n, -n)] = ctx.scalar((-q) ** n * h ** (2 * n))
        kres = scaled_diff(exact_apply_gen(rep, "K", vec), ctx.scalar(h),
                           vec)
        diag = {
            "norm": exact_vector_norm(vec),
            "E_residual": exact_vector_norm(exact_apply_gen(rep, "E", vec)),
            "F_residual": exact_vector_norm(exact_apply_gen(rep, "F", vec)),
            "K_minus_H_residual": exact_vector_norm(kres),
        }
        return vec, diag

    if kind == "v_half":
        if rep.series not in ("SU2R3_I", "SU2S2_I"):
            raise ValueError("v_half lives in the R3/S2 cross series")
        qh = ctx.qh_pow(1)
        h = rep.params.H
        if not (isinstance(h, Exact) and (h - qh).is_zero()):
            raise ValueError("exact v_half needs H = ctx.qh_pow(1)")
        w = rep.params.w
        w = Fraction(w) if w is not None else Fraction(1)
        if w * w != 1:
            raise ValueError("exact v_half needs w = +-1")
        nmax = min(box.his[box.names.index("n")],
                   box.his[box.names.index("k")])
        N = nmax if N_cut is None else min(N_cut, nmax)
        vec = {}
        for n in range(N + 1):
            alpha = ctx.sqrt_scalar(1 + q ** (2 * (n + 1)))
            vec[(n, n)] = ctx.scalar(w ** n * q ** n) * alpha
        fv = exact_apply_gen(rep, "F", vec)
        kres = scaled_diff(exact_apply_gen(rep, "K", vec), qh, vec)
        fkres = scaled_diff(exact_apply_gen(rep, "K", fv),
                            ctx.qh_pow(-1), fv)
        diag = {
            "norm": exact_vector_norm(vec),
            "E_residual": exact_vector_norm(exact_apply_gen(rep, "E", vec)),
            "K_weight_residual": exact_vector_norm(kres),
            "F_image_norm": exact_vector_norm(fv),
            "F_image_K_weight_residual": exact_vector_norm(fkres),
            "F_squared_residual": exact_vector_norm(
                exact_apply_gen(rep, "F", fv)),
        }
        return vec, diag

    raise KeyError(f"no exact construction for kind {kind!r}")


def _dense_probe_ops(rep):
    one = 1.0 + 0j

    def apply(gen, vec):
        return rep.matrix(gen) @ vec

    def axpy(a, x, b, y):
        return a * x + b * y

    q = float(rep.ctx.q)

    def qh(k):
        return q ** (k / 2.0)

    return apply, _norm, axpy, qh, one


def _exact_probe_ops(rep):
    from .checks import exact_apply_gen, exact_vector_norm

    if rep.exact_terms is None:
        raise ValueError("sparse exact input needs an exact-mode rep")
    ctx = rep.ctx

    def apply(gen, vec):
        return exact_apply_gen(rep, gen, vec)

    def axpy(a, x, b, y):
        out = {}
        for pt, c in x.items():
            s = a * c
            if not s.is_zero():
                out[pt] = s
        for pt, c in y.items():
            s = b * c
            cur = out.get(pt)
            ns = s if cur is None else cur + s
            if ns.is_zero():
                out.pop(pt, None)
            else:
                out[pt] = ns
        return out

    return apply, exact_vector_norm, axpy, ctx.qh_pow, ctx.one()


def lowest_weight_probe(rep, v, l, tol=1e-8):
    """Descend from a numerical lowest-weight vector of weight q^{-l}.

    With the coordinate letters a,b,c,d available, builds the pair
    w = c E v + q^{-l-3/2} [2l]_q a v and w' = d E v + q^{-l-3/2} [2l]_q b v
    whose span contains the lowest-weight vectors of weight q^{-(l-1/2)}.
    Without them (pure enveloping series), takes a highest-weight input
    (Ev ~ 0, Kv = q^l v) and descends to w = F^{2l} v.

    v may be a dense complex vector or a sparse exact vector ({point:
    scalar}, as built by exact_special_vector); in the sparse case the
    descent runs in exact arithmetic, where the residual norms are exact
    zeros whenever the identities hold on the truncation.
    Returns (w, w_prime_or_None, diagnostics).
    """
    two_l = int(round(2 * float(l)))
    if abs(2 * float(l) - two_l) > 1e-12:
        raise ValueError("l must be a half-integer")
    if two_l < 1:
        raise ValueError("descent requires l >= 1/2")
    sparse = isinstance(v, dict)
    if sparse:
        apply, norm, axpy, qh, one = _exact_probe_ops(rep)
    else:
        apply, norm, axpy, qh, one = _dense_probe_ops(rep)
        v = np.asarray(v, dtype=complex)
    nv = norm(v)
    if nv <= tol:
        raise ValueError("zero input vector")
    have_coords = all(g in rep.matrices for g in ("a", "b", "c", "d"))
    diag = {}

    if have_coords:
        fres = norm(apply("F", v)) / nv
        kres = norm(axpy(one, apply("K", v), -qh(-two_l), v)) / nv
        if fres > tol or kres > tol:
            raise ValueError(
                f"not a lowest-weight vector: |Fv|/|v|={fres:.2e}, "
                f"|Kv - q^-l v|/|v|={kres:.2e}")
        ev = apply("E", v)
        coeff = qh(-two_l - 3) * q_number(rep.ctx, two_l)
        if not sparse:
            coeff = complex(coeff) if isinstance(coeff, complex) \
                else float(coeff)
        w = axpy(one, apply("c", ev), coeff, apply("a", v))
        wp = axpy(one, apply("d", ev), coeff, apply("b", v))
        wt = qh(-(two_l - 1))
        diag["w_norm"] = norm(w)
        diag["w_prime_norm"] = norm(wp)
        diag["F_w_residual"] = norm(apply("F", w))
        diag["F_w_prime_residual"] = norm(apply("F", wp))
        diag["K_w_residual"] = norm(axpy(one, apply("K", w), -wt, w))
        diag["K_w_prime_residual"] = norm(axpy(one, apply("K", wp), -wt, wp))
        diag["E_v_norm"] = norm(ev)
        diag["nonzero"] = max(diag["w_norm"], diag["w_prime_norm"]) > tol
        return w, wp, diag

    eres = norm(apply("E", v)) / nv
    kres = norm(axpy(one, apply("K", v), -qh(two_l), v)) / nv
    if eres > tol or kres > tol:
        raise ValueError(
            f"not a highest-weight vector: |Ev|/|v|={eres:.2e}, "
            f"|Kv - q^l v|/|v|={kres:.2e}")
    w = v.copy() if not sparse else dict(v)
    for _ in range(two_l):
        w = apply("F", w)
    diag["w_norm"] = norm(w)
    diag["F_w_residual"] = norm(apply("F", w))
    diag["K_w_residual"] = norm(axpy(one, apply("K", w), -qh(-two_l), w))
    diag["nonzero"] = diag["w_norm"] > tol
    return w, None, diag
