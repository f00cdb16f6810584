"""Truncated matrix realizations of every representation series.

Each builder transcribes its series display once, as coefficient functions
over a scalar kit; the float kit evaluates them vectorized over the whole
lattice to assemble sparse matrices, and the exact kit re-evaluates the
same functions in exact arithmetic for interior residual certification.

Fiber parameters (H, A, B, w, v, N) are commuting matrices over a
finite-dimensional multiplicity space in diagonal/unitary canonical form.
H, A, B must be diagonal (scalars or vectors); w, v, N may be full
matrices.  Exact evaluation is available when the fiber is trivial
(fiber_dim 1 with rational parameter values).
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce

import numpy as np
import scipy.sparse as sp

from ..exact import Exact
from .lattice import LatticeBox, Term, assemble, term_spans

_COMMUTE_TOL = 1e-10


@dataclass
class SeriesParams:
    H: object = None            # scalar or diagonal vector
    epsilon: int = 1
    A: object = None
    B: object = None
    w: object = None            # unitary fiber matrix
    v: object = None            # unitary fiber matrix (or kernel-block unitary)
    N_normal: object = None     # normal fiber matrix (or kernel-block normal)
    spin: object = None         # half-integer l for the finite spin rep


@dataclass
class TruncatedRep:
    algebra: str
    series: str
    box: LatticeBox
    params: SeriesParams
    matrices: dict
    spans: dict                 # generator -> {index: max |shift|}
    ctx: object
    g_dim: int = 0
    exact_terms: object = None  # generator -> [(shift, fn(**pt) -> scalar)]
    # (generator, point) -> evaluated image terms; filled by exact checks
    _exact_app_cache: dict = field(default_factory=dict, repr=False,
                                   compare=False)

    @property
    def dim(self):
        return self.g_dim + self.box.dim

    def matrix(self, gen):
        try:
            return self.matrices[gen]
        except KeyError:
            raise KeyError(f"series {self.series} has no generator {gen}")

    def identity(self):
        return sp.identity(self.dim, dtype=complex, format="csr")


# ---------------------------------------------------------------------------
# scalar kits


class FloatKit:
    def __init__(self, ctx):
        self.q = float(ctx.q)
        self.p = float(ctx.p)
        self.qh = math.sqrt(self.q)
        lam = self.q - 1.0 / self.q
        self.lami = 1.0 / lam
        self.cx1 = 1.0 / (1.0 - self.q ** -2)
        self.s2 = 1.0 / math.sqrt(1.0 + self.q ** 2)

    def qp(self, e):
        return self.q ** np.asarray(e, dtype=float)

    def qhp(self, e):
        return self.qh ** np.asarray(e, dtype=float)

    def pp(self, e):
        return self.p ** np.asarray(e, dtype=float)

    def lam(self, n):
        x = 1.0 - self.q ** (2.0 * np.asarray(n, dtype=float))
        return np.sqrt(np.maximum(0.0, x))

    def qnum(self, m):
        return (self.q ** m - self.q ** (-m)) / (self.q - 1.0 / self.q)

    def sqrt(self, x):
        return np.sqrt(x)

    def num(self, x):
        return float(x)

    def mul(self, *xs):
        return reduce(lambda a, b: a * b, xs)


class ExactKit:
    def __init__(self, ctx):
        self.ctx = ctx
        self.lami = ctx.lam_inv()
        q = Fraction(ctx.q)
        self.cx1 = ctx.scalar(Fraction(1, 1) / (1 - 1 / q ** 2))
        self.s2 = ctx.one_plus_q2_invsqrt()
        self._lam_cache = {}

    def qp(self, e):
        return self.ctx.q_pow(int(e))

    def qhp(self, e):
        return self.ctx.qh_pow(int(e))

    def pp(self, e):
        return self.ctx.p_pow(int(e))

    def lam(self, n):
        n = int(n)
        hit = self._lam_cache.get(n)
        if hit is None:
            hit = self.ctx.sqrt_scalar(1 - Fraction(self.ctx.q) ** (2 * n))
            self._lam_cache[n] = hit
        return hit

    def qnum(self, m):
        q = Fraction(self.ctx.q)
        m = int(m)
        return self.ctx.scalar((q ** m - q ** -m) / (q - 1 / q))

    def sqrt(self, x):
        if isinstance(x, Exact):
            x = x.as_fraction()
        return self.ctx.sqrt_scalar(x)

    def num(self, x):
        return self.ctx.scalar(Fraction(x))

    def mul(self, *xs):
        out = xs[0]
        for x in xs[1:]:
            out = out * x
        return out


def _is_rational(x):
    return isinstance(x, (int, Fraction)) or (
        isinstance(x, float) and x == int(x))


def _to_float_array(val):
    """Parameter value to a float array; exact scalars pass through their
    complex value (used e.g. for H = q^{1/2} given as an exact surd)."""
    if isinstance(val, Exact):
        return np.asarray(val.to_complex().real, dtype=float)
    if isinstance(val, (list, tuple, np.ndarray)):
        vals = [v.to_complex().real if isinstance(v, Exact) else v
                for v in np.ravel(np.asarray(val, dtype=object))]
        return np.asarray(vals, dtype=float).reshape(np.shape(val))
    return np.asarray(val, dtype=float)


# ---------------------------------------------------------------------------
# build kit: per-mode fiber preparation around one transcription


class _BuildKit:
    """Holds the context, params and canonical fiber forms for one build.

    fdiag/fmat return the float-side fiber factor for a Term; the exact
    twin (an exact scalar, or None when exact evaluation is unavailable)
    is tracked alongside so the same Term list serves both modes.
    """

    def __init__(self, ctx, params, fd):
        self.ctx = ctx
        self.pr = params
        self.fd = fd
        self.fk = FloatKit(ctx)
        self.exact_ok = (fd == 1 and getattr(ctx, "mode", "exact") == "exact")
        self.ek = ExactKit(ctx) if self.exact_ok else None

    # ----- float-side canonicalization

    def diag(self, name, default=1.0):
        val = getattr(self.pr, name)
        if val is None:
            val = default
        arr = _to_float_array(val)
        if arr.ndim == 0:
            return np.full(self.fd, float(arr))
        if arr.ndim == 1:
            if arr.shape[0] != self.fd:
                raise ValueError(f"{name}: expected {self.fd} diagonal entries")
            return arr.copy()
        if arr.ndim == 2:
            off = arr - np.diag(np.diag(arr))
            if np.abs(off).max() > _COMMUTE_TOL:
                raise ValueError(f"{name} must be diagonal (canonical form)")
            return np.diag(arr).astype(float)
        raise ValueError(f"{name}: bad shape")

    def mat(self, name, default=None):
        val = getattr(self.pr, name)
        if val is None:
            if default is None:
                return np.eye(self.fd, dtype=complex)
            val = default
        if isinstance(val, Exact):
            val = val.to_complex()
        arr = np.asarray(val, dtype=complex)
        if arr.ndim == 0:
            return complex(arr) * np.eye(self.fd)
        if arr.ndim == 1:
            if arr.shape[0] != self.fd:
                raise ValueError(f"{name}: expected {self.fd} diagonal entries")
            return np.diag(arr)
        if arr.shape != (self.fd, self.fd):
            raise ValueError(f"{name}: expected shape ({self.fd},{self.fd})")
        return arr.copy()

    def eps(self):
        e = int(self.pr.epsilon)
        if e not in (-1, 1):
            raise ValueError("epsilon must be +-1")
        return e

    # ----- exact-side scalar twins; any failure disables exact mode

    def exact_scalar(self, name, default=1, invert=False, power=1):
        if not self.exact_ok:
            return None
        val = getattr(self.pr, name)
        if val is None:
            val = default
        if isinstance(val, Exact):
            try:
                out = val ** power
                if invert:
                    out = out.inverse()
            except ValueError:
                self.exact_ok = False
                return None
            return out
        if not _is_rational(val):
            self.exact_ok = False
            return None
        f = Fraction(val) ** power
        if invert:
            if f == 0:
                self.exact_ok = False
                return None
            f = 1 / f
        return self.ctx.scalar(f)

    def exact_off(self):
        self.exact_ok = False
        return None


def _check_unitary(m, name, selfadjoint=False):
    fd = m.shape[0]
    if np.abs(m @ m.conj().T - np.eye(fd)).max() > _COMMUTE_TOL:
        raise ValueError(f"{name} must be unitary")
    if selfadjoint and np.abs(m - m.conj().T).max() > _COMMUTE_TOL:
        raise ValueError(f"{name} must be self-adjoint")


def _check_normal(m, name):
    if np.abs(m @ m.conj().T - m.conj().T @ m).max() > _COMMUTE_TOL:
        raise ValueError(f"{name} must be normal")


def _check_window(vals, lo, hi, name, lo_open=True, hi_closed=True):
    vals = np.asarray(vals, dtype=float)
    tol = 1e-12
    lo_ok = (vals > lo + tol) if lo_open else (vals >= lo - tol)
    hi_ok = (vals <= hi + tol) if hi_closed else (vals < hi - tol)
    if not (lo_ok & hi_ok).all():
        b1 = "(" if lo_open else "["
        b2 = "]" if hi_closed else ")"
        raise ValueError(
            f"spectral window violation: sigma({name}) must lie in "
            f"{b1}{lo},{hi}{b2}, got {vals}")


def _check_commuting(mats):
    items = [(n, np.asarray(m, dtype=complex)) for n, m in mats.items()]
    for i, (n1, m1) in enumerate(items):
        for n2, m2 in items[i + 1:]:
            if np.abs(m1 @ m2 - m2 @ m1).max() > _COMMUTE_TOL:
                raise ValueError(f"fiber parameters {n1}, {n2} must commute")


# ---------------------------------------------------------------------------
# series registry

_NONNEG = "nonneg"      # [0, S], genuine lower boundary, cut above
_SYM = "sym"            # [-S, S], cut on both sides
_EXACT = "exact"        # finite by itself, no cuts

_TEMPLATES = {
    "CoordSU2": ("OSUq2", (("n", _NONNEG),)),
    "CoordC2q": ("OhatC2q", (("n", _NONNEG),)),
    "CoordS2q": ("OS2q", (("n", _NONNEG),)),
    "CoordR3q": ("OR3q", (("n", _NONNEG),)),
    "SpinL": ("Uqsu2", (("n", _EXACT),)),
    "U0_I1w": ("U0xOSUq2", (("n", _NONNEG),)),
    "U0_I2N": ("U0xOSUq2", (("n", _NONNEG), ("k", _SYM))),
    "U0_II1": ("U0xOSUq2", (("n", _NONNEG), ("k", _NONNEG), ("l", _SYM))),
    "U0_II2": ("U0xOSUq2", (("n", _NONNEG), ("k", _SYM), ("l", _SYM))),
    "U0_II3": ("U0xOSUq2", (("n", _NONNEG), ("k", _SYM))),
    "U0_III": ("U0xOSUq2", (("n", _NONNEG), ("k", _NONNEG), ("l", _SYM))),
    "SU2SU2_I": ("Uqsu2xOSUq2", (("n", _NONNEG), ("k", _NONNEG), ("l", _SYM))),
    "GL2C2_I": ("Uqgl2xOhatC2q",
                (("n", _NONNEG), ("k", _NONNEG), ("l", _SYM), ("j", _SYM))),
    "GL2R3_I": ("Uqgl2xOR3q", (("n", _NONNEG), ("k", _NONNEG), ("l", _SYM))),
    "SU2R3_I": ("Uqsu2xOR3q", (("n", _NONNEG), ("k", _NONNEG))),
    "SU2S2_I": ("Uqsu2xOS2q", (("n", _NONNEG), ("k", _NONNEG))),
    "ModelI": ("QHyp", (("n", _NONNEG),)),
    "ModelIIA": ("QHyp", (("n", _SYM),)),
    "ModelIIIu": ("QHyp", (("n", _EXACT),)),
}

SERIES_IDS = tuple(_TEMPLATES)


def series_algebra(series):
    try:
        return _TEMPLATES[series][0]
    except KeyError:
        raise KeyError(f"unknown series {series!r}")


def box_for_series(series, N=12, K=None, L=None, J=None, fiber_dim=1,
                   spin=None):
    """Default box for a series: size N per index unless overridden."""
    if series not in _TEMPLATES:
        raise KeyError(f"unknown series {series!r}")
    idx = _TEMPLATES[series][1]
    K = N if K is None else K
    L = N if L is None else L
    J = N if J is None else J
    size = {"n": N, "k": K, "l": L, "j": J}
    names, los, his, cuts = [], [], [], []
    for name, kind in idx:
        s = size[name]
        names.append(name)
        if kind == _NONNEG:
            los.append(0)
            his.append(s)
            cuts.append((False, True))
        elif kind == _SYM:
            los.append(-s)
            his.append(s)
            cuts.append((True, True))
        else:
            if series == "SpinL":
                if spin is None:
                    raise ValueError("SpinL needs spin")
                two_l = int(round(2 * float(spin)))
                los.append(0)
                his.append(two_l)
            else:
                los.append(0)
                his.append(0)
            cuts.append((False, False))
    return LatticeBox(tuple(names), tuple(los), tuple(his), tuple(cuts),
                      fiber_dim)


# ---------------------------------------------------------------------------
# builders; each returns (Term lists per generator, exact fiber twins per
# generator term, optional kernel blocks)
#
# Terms hold coefficient functions f(kit, **indices); the fiber slot is the
# float-side factor.  efibs mirrors the Term lists with exact fiber
# scalars/callables (None entries mean the identity).


def _mk(gens_terms):
    """Split [(shift, co, ffiber, efiber)] rows into Term lists + twins."""
    gens, efibs = {}, {}
    for g, rows in gens_terms.items():
        gens[g] = [Term(sh, co, fb) for sh, co, fb, _ in rows]
        efibs[g] = [ef for _, _, _, ef in rows]
    return gens, efibs


def _coord_su2(bk):
    w = bk.mat("w")
    _check_unitary(w, "w")
    ew = bk.exact_scalar("w")
    ews = ew  # rational scalar, self-conjugate
    rows = {
        "a": [({"n": -1}, lambda K, n: K.lam(n), None, None)],
        "d": [({"n": +1}, lambda K, n: K.lam(n + 1), None, None)],
        "b": [({}, lambda K, n: K.qp(n + 1), w, ew)],
        "c": [({}, lambda K, n: K.mul(-1, K.qp(n)), w.conj().T, ews)],
    }
    gblocks = None
    if bk.pr.v is not None:
        v = np.asarray(bk.pr.v, dtype=complex)
        _check_unitary(v, "v")
        z = np.zeros_like(v)
        gblocks = {"a": v, "d": v.conj().T, "b": z, "c": z}
        bk.exact_off()
    return (*_mk(rows), gblocks)


def _coord_c2q(bk):
    w = bk.mat("w")
    _check_unitary(w, "w")
    ad = bk.diag("A")
    if (ad <= 0).any():
        raise ValueError("A must be strictly positive")
    _check_commuting({"w": w, "A": np.diag(ad)})
    Am = np.diag(ad).astype(complex)
    ea = bk.exact_scalar("A")
    ew = bk.exact_scalar("w")
    ewa = None if (ea is None or ew is None) else ea * ew
    rows = {
        "z1": [({}, lambda K, n: K.qp(n + 1), w @ Am, ewa)],
        "z1s": [({}, lambda K, n: K.qp(n + 1), w.conj().T @ Am, ewa)],
        "z2": [({"n": +1}, lambda K, n: K.lam(n + 1), Am, ea)],
        "z2s": [({"n": -1}, lambda K, n: K.lam(n), Am, ea)],
    }
    gblocks = None
    if bk.pr.N_normal is not None:
        m = np.asarray(bk.pr.N_normal, dtype=complex)
        _check_normal(m, "N_normal")
        z = np.zeros_like(m)
        gblocks = {"z1": z, "z1s": z, "z2": m, "z2s": m.conj().T}
        bk.exact_off()
    return (*_mk(rows), gblocks)


def _coord_s2q(bk):
    w = bk.mat("w")
    _check_unitary(w, "w", selfadjoint=True)
    ew = bk.exact_scalar("w")
    rows = {
        "y1": [({"n": -1}, lambda K, n: K.mul(K.s2, K.lam(2 * n)),
                None, None)],
        "y2": [({}, lambda K, n: K.qp(2 * n + 1), w, ew)],
        "y3": [({"n": +1}, lambda K, n: K.mul(K.qp(1), K.s2,
                                              K.lam(2 * (n + 1))),
                None, None)],
    }
    gblocks = None
    if bk.pr.v is not None:
        u = np.asarray(bk.pr.v, dtype=complex)
        _check_unitary(u, "v")
        z = np.zeros_like(u)
        q = bk.fk.q
        gblocks = {"y1": u.conj().T / math.sqrt(1.0 + q ** 2), "y2": z,
                   "y3": u / math.sqrt(1.0 + q ** -2)}
        bk.exact_off()
    return (*_mk(rows), gblocks)


def _coord_r3q(bk):
    w = bk.mat("w")
    _check_unitary(w, "w", selfadjoint=True)
    ad = bk.diag("A")
    if (ad <= 0).any():
        raise ValueError("A must be strictly positive")
    _check_commuting({"w": w, "A": np.diag(ad)})
    Am = np.diag(ad).astype(complex)
    ea = bk.exact_scalar("A")
    ew = bk.exact_scalar("w")
    eaw = None if (ea is None or ew is None) else ea * ew
    rows = {
        "x1": [({"n": -1}, lambda K, n: K.mul(K.s2, K.lam(2 * n)), Am, ea)],
        "x2": [({}, lambda K, n: K.qp(2 * n + 1), Am @ w, eaw)],
        "x3": [({"n": +1}, lambda K, n: K.mul(K.qp(1), K.s2,
                                              K.lam(2 * (n + 1))), Am, ea)],
    }
    gblocks = None
    if bk.pr.N_normal is not None:
        m = np.asarray(bk.pr.N_normal, dtype=complex)
        _check_normal(m, "N_normal")
        z = np.zeros_like(m)
        gblocks = {"x1": m.conj().T / bk.fk.q, "x2": z, "x3": m}
        bk.exact_off()
    return (*_mk(rows), gblocks)


def _spin_l(bk):
    if bk.pr.spin is None:
        raise ValueError("SpinL needs params.spin")
    l = float(bk.pr.spin)
    two_l = int(round(2 * l))
    if abs(2 * l - two_l) > 1e-12 or l < 0:
        raise ValueError("spin must be a nonnegative half-integer")
    # with j = n - l both [l+j] = [n] and [l-j+1] = [2l-n+1] are integer
    rows = {
        "E": [({"n": +1}, lambda K, n: K.sqrt(K.mul(
            K.qnum(n + 1), K.qnum(two_l - n))), None, None)],
        "F": [({"n": -1}, lambda K, n: K.sqrt(K.mul(
            K.qnum(n), K.qnum(two_l - n + 1))), None, None)],
        "K": [({}, lambda K, n: K.qhp(2 * n - two_l), None, None)],
        "Kinv": [({}, lambda K, n: K.qhp(two_l - 2 * n), None, None)],
    }
    return (*_mk(rows), None)


def _repu1_rows(lshift):
    """a,b,c,d on the cross product lattices; b,c shift the last index
    (k for two-index series, l for three-index ones)."""
    tgt = "l" if lshift else "k"
    return {
        "a": [({"n": -1}, lambda K, **c: K.lam(c["n"]), None, None)],
        "d": [({"n": +1}, lambda K, **c: K.lam(c["n"] + 1), None, None)],
        "b": [({tgt: +1}, lambda K, **c: K.qp(c["n"] + 1), None, None)],
        "c": [({tgt: -1}, lambda K, **c: K.mul(-1, K.qp(c["n"])),
               None, None)],
    }


def _x1_rows(y1_rows):
    """X1 = (1 - q^{-2})^{-1} (1 - Y1), Y1 diagonal."""
    out = [({}, lambda K, **c: K.cx1, None, None)]
    for sh, co, fb, ef in y1_rows:
        out.append((dict(sh),
                    lambda K, _co=co, **c: K.mul(-1, K.cx1, _co(K, **c)),
                    fb, ef))
    return out


def _u0_i1w(bk):
    w = bk.mat("w")
    _check_unitary(w, "w")
    ew = bk.exact_scalar("w")
    y1 = []
    rows = {
        "X2": [({"n": -1}, lambda K, n: K.mul(K.lami, K.qp(-n), K.lam(n)),
                w, ew)],
        "X0": [({"n": +1}, lambda K, n: K.mul(K.lami, K.qp(-n - 1),
                                              K.lam(n + 1)),
                w.conj().T, ew)],
        "Y1": y1,
        "X1": _x1_rows(y1),
        "a": [({"n": -1}, lambda K, n: K.lam(n), None, None)],
        "d": [({"n": +1}, lambda K, n: K.lam(n + 1), None, None)],
        "b": [({}, lambda K, n: K.qp(n + 1), w, ew)],
        "c": [({}, lambda K, n: K.mul(-1, K.qp(n)), w.conj().T, ew)],
    }
    return (*_mk(rows), None)


def _u0_i2n(bk):
    Nm = bk.mat("N_normal")
    _check_normal(Nm, "N_normal")
    sv = np.sqrt(np.linalg.eigvalsh(Nm.conj().T @ Nm))
    _check_window(sv, bk.fk.q, 1.0, "|N|")
    en = bk.exact_scalar("N_normal")
    y1 = []
    rows = {
        "X2": [({"k": +1}, lambda K, n, k: K.qp(k - n), Nm, en),
               ({"n": -1, "k": +1},
                lambda K, n, k: K.mul(K.lami, K.qp(-n), K.lam(n)),
                None, None)],
        "X0": [({"k": -1}, lambda K, n, k: K.qp(k - n - 1),
                Nm.conj().T, en),
               ({"n": +1, "k": -1},
                lambda K, n, k: K.mul(K.lami, K.qp(-n - 1), K.lam(n + 1)),
                None, None)],
        "Y1": y1,
        "X1": _x1_rows(y1),
    }
    rows.update(_repu1_rows(lshift=False))
    return (*_mk(rows), None)


def _u0_ii1(bk):
    hd = bk.diag("H")
    _check_window(hd, bk.fk.q, 1.0, "H")
    eps = bk.eps()
    Hm = np.diag(hd).astype(complex)
    H2 = np.diag(hd ** 2).astype(complex)
    eh = bk.exact_scalar("H")
    eh2 = bk.exact_scalar("H", power=2)
    y1 = [({}, lambda K, n, k, l: K.mul(-1, K.qp(-2 * n - 4 * k + 2 * l)),
           H2, eh2)]
    rows = {
        "X2": [({"k": -1}, lambda K, n, k, l: K.mul(
            eps, K.lami, K.qp(-n - 2 * k + l + 1), K.lam(k)), Hm, eh),
               ({"n": -1, "l": +1}, lambda K, n, k, l: K.mul(
                   K.lami, K.qp(-n), K.lam(n)), None, None)],
        "X0": [({"k": +1}, lambda K, n, k, l: K.mul(
            eps, K.lami, K.qp(-n - 2 * k + l - 1), K.lam(k + 1)), Hm, eh),
               ({"n": +1, "l": -1}, lambda K, n, k, l: K.mul(
                   K.lami, K.qp(-n - 1), K.lam(n + 1)), None, None)],
        "Y1": y1,
        "X1": _x1_rows(y1),
    }
    rows.update(_repu1_rows(lshift=True))
    return (*_mk(rows), None)


def _u0_ii2(bk):
    hd = bk.diag("H")
    _check_window(hd, bk.fk.q, 1.0, "H")
    ad = bk.diag("A")
    _check_window(ad, bk.fk.q ** 2, 1.0, "A")
    eps = bk.eps()
    H2 = np.diag(hd ** 2).astype(complex)
    eh = bk.exact_scalar("H")
    eh2 = bk.exact_scalar("H", power=2)
    ea = Fraction(bk.pr.A) if (bk.exact_ok and bk.pr.A is not None
                               and _is_rational(bk.pr.A)) else None
    if bk.pr.A is None:
        ea = Fraction(1)
    q = bk.fk.q

    def h_alpha(shift):
        # fiber H alpha_{k+shift}(A), diagonal and k-dependent
        def f(n, k, l):
            return np.sqrt(1.0 + q ** (2.0 * (k[:, None] + shift))
                           * ad[None, :]) * hd[None, :]
        return ("diag", f)

    def e_alpha(shift):
        if ea is None or eh is None:
            return None
        def f(K, n, k, l):
            return K.mul(eh, K.sqrt(K.num(1) + K.qp(2 * (k + shift))
                                    * K.num(ea)))
        return f

    y1 = [({}, lambda K, n, k, l: K.mul(-1, K.qp(-2 * n - 4 * k + 2 * l)),
           H2, eh2)]
    rows = {
        "X2": [({"k": -1}, lambda K, n, k, l: K.mul(
            eps, K.lami, K.qp(-n - 2 * k + l + 1)), h_alpha(0), e_alpha(0)),
               ({"n": -1, "l": +1}, lambda K, n, k, l: K.mul(
                   K.lami, K.qp(-n), K.lam(n)), None, None)],
        "X0": [({"k": +1}, lambda K, n, k, l: K.mul(
            eps, K.lami, K.qp(-n - 2 * k + l - 1)), h_alpha(1), e_alpha(1)),
               ({"n": +1, "l": -1}, lambda K, n, k, l: K.mul(
                   K.lami, K.qp(-n - 1), K.lam(n + 1)), None, None)],
        "Y1": y1,
        "X1": _x1_rows(y1),
    }
    rows.update(_repu1_rows(lshift=True))
    if ea is None and bk.exact_ok:
        bk.exact_off()
    return (*_mk(rows), None)


def _u0_ii3(bk):
    hd = bk.diag("H")
    _check_window(hd, bk.fk.q, 1.0, "H")
    vm = bk.mat("v")
    _check_unitary(vm, "v")
    _check_commuting({"H": np.diag(hd), "v": vm})
    eps = bk.eps()
    Hm = np.diag(hd).astype(complex)
    H2 = np.diag(hd ** 2).astype(complex)
    eh = bk.exact_scalar("H")
    eh2 = bk.exact_scalar("H", power=2)
    ev = bk.exact_scalar("v")
    ehv = None if (eh is None or ev is None) else eh * ev
    y1 = [({}, lambda K, n, k: K.mul(-1, K.qp(-2 * n + 2 * k)), H2, eh2)]
    rows = {
        "X2": [({"k": +2}, lambda K, n, k: K.mul(
            eps, K.lami, K.qp(-n + k + 1)), Hm @ vm, ehv),
               ({"n": -1, "k": +1}, lambda K, n, k: K.mul(
                   K.lami, K.qp(-n), K.lam(n)), None, None)],
        "X0": [({"k": -2}, lambda K, n, k: K.mul(
            eps, K.lami, K.qp(-n + k - 1)), Hm @ vm.conj().T, ehv),
               ({"n": +1, "k": -1}, lambda K, n, k: K.mul(
                   K.lami, K.qp(-n - 1), K.lam(n + 1)), None, None)],
        "Y1": y1,
        "X1": _x1_rows(y1),
    }
    rows.update(_repu1_rows(lshift=False))
    return (*_mk(rows), None)


def _u0_iii(bk):
    hd = bk.diag("H")
    _check_window(hd, bk.fk.q, 1.0, "H")
    eps = bk.eps()
    Hm = np.diag(hd).astype(complex)
    H2 = np.diag(hd ** 2).astype(complex)
    eh = bk.exact_scalar("H")
    eh2 = bk.exact_scalar("H", power=2)
    y1 = [({}, lambda K, n, k, l: K.qp(-2 * n + 4 * k + 2 * l), H2, eh2)]
    rows = {
        "X2": [({"k": +1}, lambda K, n, k, l: K.mul(
            eps, K.lami, K.qp(-n + k + l), K.lam(k + 1)), Hm, eh),
               ({"n": -1, "l": +1}, lambda K, n, k, l: K.mul(
                   K.lami, K.qp(-n), K.lam(n)), None, None)],
        "X0": [({"k": -1}, lambda K, n, k, l: K.mul(
            eps, K.lami, K.qp(-n + k + l - 1), K.lam(k)), Hm, eh),
               ({"n": +1, "l": -1}, lambda K, n, k, l: K.mul(
                   K.lami, K.qp(-n - 1), K.lam(n + 1)), None, None)],
        "Y1": y1,
        "X1": _x1_rows(y1),
    }
    rows.update(_repu1_rows(lshift=True))
    return (*_mk(rows), None)


def _su2su2_i(bk):
    hd = bk.diag("H")
    _check_window(hd, bk.fk.qh, 1.0, "H")
    eps = bk.eps()
    Hm = np.diag(hd).astype(complex)
    Hi = np.diag(1.0 / hd).astype(complex)
    eh = bk.exact_scalar("H")
    ehi = bk.exact_scalar("H", invert=True)
    rows = {
        "E": [({"k": +1}, lambda K, n, k, l: K.mul(
            eps, K.lami, K.qhp(-(n - l + 1)), K.lam(k + 1)), Hm, eh),
              ({"n": -1, "l": +1}, lambda K, n, k, l: K.mul(
                  eps, K.lami, K.qhp(-(n + 2 * k + l + 1)), K.lam(n)),
               Hi, ehi)],
        "F": [({"k": -1}, lambda K, n, k, l: K.mul(
            eps, K.lami, K.qhp(-(n - l + 1)), K.lam(k)), Hm, eh),
              ({"n": +1, "l": -1}, lambda K, n, k, l: K.mul(
                  eps, K.lami, K.qhp(-(n + 2 * k + l + 1)), K.lam(n + 1)),
               Hi, ehi)],
        "K": [({}, lambda K, n, k, l: K.mul(eps, K.qhp(-n + 2 * k + l)),
               Hm, eh)],
        "Kinv": [({}, lambda K, n, k, l: K.mul(eps, K.qhp(n - 2 * k - l)),
                  Hi, ehi)],
    }
    rows.update(_repu1_rows(lshift=True))
    return (*_mk(rows), None)


def _gl2c2_i(bk):
    hd = bk.diag("H")
    _check_window(hd, bk.fk.qh, 1.0, "H")
    bd = bk.diag("B")
    p = bk.fk.p
    if p < 1.0:
        _check_window(bd, p, 1.0, "B")
    elif p > 1.0:
        _check_window(bd, 1.0, p, "B", lo_open=False, hi_closed=False)
    eps = bk.eps()
    Hm = np.diag(hd).astype(complex)
    Hi = np.diag(1.0 / hd).astype(complex)
    Bm = np.diag(bd).astype(complex)
    eh = bk.exact_scalar("H")
    ehi = bk.exact_scalar("H", invert=True)
    eb = bk.exact_scalar("B")
    rows = {
        "E": [({"k": +1}, lambda K, n, k, l, j: K.mul(
            -eps, K.lami, K.qhp(-(n - l + 1)), K.lam(k + 1)), Hm, eh),
              ({"n": -1, "l": +1}, lambda K, n, k, l, j: K.mul(
                  eps, K.lami, K.qhp(-(n + 2 * k + l + 1)), K.lam(n)),
               Hi, ehi)],
        "F": [({"k": -1}, lambda K, n, k, l, j: K.mul(
            -eps, K.lami, K.qhp(-(n - l + 1)), K.lam(k)), Hm, eh),
              ({"n": +1, "l": -1}, lambda K, n, k, l, j: K.mul(
                  eps, K.lami, K.qhp(-(n + 2 * k + l + 1)), K.lam(n + 1)),
               Hi, ehi)],
        "K": [({}, lambda K, n, k, l, j: K.mul(
            eps, K.qhp(-(n - 2 * k - l))), Hm, eh)],
        "Kinv": [({}, lambda K, n, k, l, j: K.mul(
            eps, K.qhp(n - 2 * k - l)), Hi, ehi)],
        "L": [({"j": +1}, lambda K, **c: K.num(1), None, None)],
        "Linv": [({"j": -1}, lambda K, **c: K.num(1), None, None)],
        "z1": [({"l": +1}, lambda K, n, k, l, j: K.mul(
            K.qp(n + 1), K.pp(j)), Bm, eb)],
        "z1s": [({"l": -1}, lambda K, n, k, l, j: K.mul(
            K.qp(n + 1), K.pp(j)), Bm, eb)],
        "z2": [({"n": +1}, lambda K, n, k, l, j: K.mul(
            K.lam(n + 1), K.pp(j)), Bm, eb)],
        "z2s": [({"n": -1}, lambda K, n, k, l, j: K.mul(
            K.lam(n), K.pp(j)), Bm, eb)],
    }
    return (*_mk(rows), None)


def _r3_like(bk, with_l, sphere):
    hd = bk.diag("H")
    if (hd <= 0).any():
        raise ValueError("H must be strictly positive")
    wm = bk.mat("w")
    _check_unitary(wm, "w", selfadjoint=True)
    p = bk.fk.p
    if sphere:
        ad = np.ones(bk.fd)
        if bk.pr.A is not None:
            ad = bk.diag("A")
            if np.abs(ad - 1.0).max() > 1e-12:
                raise ValueError("sphere series fixes A = 1")
    else:
        ad = bk.diag("A")
        if with_l:
            if p < 1.0:
                _check_window(ad, p ** 2, 1.0, "A")
            elif p > 1.0:
                _check_window(ad, p ** -2, 1.0, "A")
        if (ad <= 0).any():
            raise ValueError("A must be strictly positive")
    _check_commuting({"H": np.diag(hd), "w": wm, "A": np.diag(ad)})
    Hm = np.diag(hd).astype(complex)
    Hiw = np.diag(1.0 / hd).astype(complex) @ wm
    Am = np.diag(ad).astype(complex)
    Aw = Am @ wm
    eh = bk.exact_scalar("H")
    ehi = bk.exact_scalar("H", invert=True)
    eh2 = bk.exact_scalar("H", power=2)
    ehi2 = bk.exact_scalar("H", power=2, invert=True)
    ew = bk.exact_scalar("w")
    ea = bk.exact_scalar("A")
    ehiw = None if (ehi is None or ew is None) else ehi * ew
    eaw = None if (ea is None or ew is None) else ea * ew
    q = bk.fk.q

    def root(shift):
        # fiber (H^2 + q^{-2(k+shift)} H^{-2})^{1/2}, diagonal, k-dependent
        def f(**c):
            k = c["k"]
            return np.sqrt(hd[None, :] ** 2 + q ** (-2.0 * (k[:, None]
                           + shift)) * hd[None, :] ** -2)
        return ("diag", f)

    def e_root(shift):
        if eh2 is None or ehi2 is None:
            return None
        def f(K, **c):
            k = c["k"]
            return K.sqrt(eh2 + K.qp(-2 * (k + shift)) * ehi2)
        return f

    def pl(K, c):
        return K.pp(2 * c["l"]) if with_l else K.num(1)

    x1, x2, x3 = ("y1", "y2", "y3") if sphere else ("x1", "x2", "x3")
    rows = {
        "E": [({"k": +1}, lambda K, **c: K.mul(
            -1, K.lami, K.qhp(-2 * c["n"] - 1), K.lam(c["k"] + 1)),
            root(1), e_root(1)),
              ({"n": -1}, lambda K, **c: K.mul(
                  K.lami, K.qhp(-2 * (c["n"] + c["k"]) - 1),
                  K.lam(2 * c["n"])), Hiw, ehiw)],
        "F": [({"k": -1}, lambda K, **c: K.mul(
            -1, K.lami, K.qhp(-2 * c["n"] - 1), K.lam(c["k"])),
            root(0), e_root(0)),
              ({"n": +1}, lambda K, **c: K.mul(
                  K.lami, K.qhp(-2 * (c["n"] + c["k"]) - 3),
                  K.lam(2 * (c["n"] + 1))), Hiw, ehiw)],
        "K": [({}, lambda K, **c: K.qp(-c["n"] + c["k"]), Hm, eh)],
        "Kinv": [({}, lambda K, **c: K.qp(c["n"] - c["k"]),
                  np.diag(1.0 / hd).astype(complex), ehi)],
        x1: [({"n": -1}, lambda K, **c: K.mul(
            K.s2, K.lam(2 * c["n"]), pl(K, c)), Am, ea)],
        x2: [({}, lambda K, **c: K.mul(
            K.qp(2 * c["n"] + 1), pl(K, c)), Aw, eaw)],
        x3: [({"n": +1}, lambda K, **c: K.mul(
            K.qp(1), K.s2, K.lam(2 * (c["n"] + 1)), pl(K, c)), Am, ea)],
    }
    if with_l:
        rows["L"] = [({"l": +1}, lambda K, **c: K.num(1), None, None)]
        rows["Linv"] = [({"l": -1}, lambda K, **c: K.num(1), None, None)]
    return (*_mk(rows), None)


def _model_i(bk):
    rows = {
        "x": [({"n": -1}, lambda K, n: K.mul(
            K.lam(n), K.sqrt(K.num(1) / (K.num(1) - K.qp(2)))), None, None)],
        "xs": [({"n": +1}, lambda K, n: K.mul(
            K.lam(n + 1), K.sqrt(K.num(1) / (K.num(1) - K.qp(2)))),
            None, None)],
    }
    return (*_mk(rows), None)


def _model_iia(bk):
    ad = bk.diag("A")
    _check_window(ad, bk.fk.q ** 2, 1.0, "A")
    ea = Fraction(bk.pr.A) if (bk.exact_ok and bk.pr.A is not None
                               and _is_rational(bk.pr.A)) else \
        (Fraction(1) if bk.pr.A is None else None)
    q = bk.fk.q

    def alpha(shift):
        def f(n):
            return np.sqrt(1.0 + q ** (2.0 * (n[:, None] + shift))
                           * ad[None, :])
        return ("diag", f)

    def e_alpha(shift):
        if ea is None:
            return None
        def f(K, n):
            return K.sqrt(K.num(1) + K.qp(2 * (n + shift)) * K.num(ea))
        return f

    rows = {
        "x": [({"n": -1}, lambda K, n: K.sqrt(
            K.num(1) / (K.num(1) - K.qp(2))), alpha(0), e_alpha(0))],
        "xs": [({"n": +1}, lambda K, n: K.sqrt(
            K.num(1) / (K.num(1) - K.qp(2))), alpha(1), e_alpha(1))],
    }
    if ea is None and bk.exact_ok:
        bk.exact_off()
    return (*_mk(rows), None)


def _model_iiiu(bk):
    u = bk.mat("w")
    _check_unitary(u, "w")
    ew = bk.exact_scalar("w")
    rows = {
        "x": [({}, lambda K, n: K.sqrt(K.num(1) / (K.num(1) - K.qp(2))),
               u, ew)],
        "xs": [({}, lambda K, n: K.sqrt(K.num(1) / (K.num(1) - K.qp(2))),
                u.conj().T, ew)],
    }
    return (*_mk(rows), None)


_BUILDERS = {
    "CoordSU2": _coord_su2,
    "CoordC2q": _coord_c2q,
    "CoordS2q": _coord_s2q,
    "CoordR3q": _coord_r3q,
    "SpinL": _spin_l,
    "U0_I1w": _u0_i1w,
    "U0_I2N": _u0_i2n,
    "U0_II1": _u0_ii1,
    "U0_II2": _u0_ii2,
    "U0_II3": _u0_ii3,
    "U0_III": _u0_iii,
    "SU2SU2_I": _su2su2_i,
    "GL2C2_I": _gl2c2_i,
    "GL2R3_I": lambda bk: _r3_like(bk, True, False),
    "SU2R3_I": lambda bk: _r3_like(bk, False, False),
    "SU2S2_I": lambda bk: _r3_like(bk, False, True),
    "ModelI": _model_i,
    "ModelIIA": _model_iia,
    "ModelIIIu": _model_iiiu,
}


def build_rep(series, params, box, ctx) -> TruncatedRep:
    if series not in _BUILDERS:
        raise KeyError(f"unknown series {series!r}")
    algebra, idx = _TEMPLATES[series]
    expect = tuple(name for name, _ in idx)
    if box.names != expect:
        raise ValueError(
            f"series {series} needs indices {expect}, box has {box.names}")
    if params is None:
        params = SeriesParams()
    bk = _BuildKit(ctx, params, box.fiber_dim)
    if not (0.0 < bk.fk.q < 1.0):
        raise ValueError("series builders assume 0 < q < 1")
    gens, efibs, gblocks = _BUILDERS[series](bk)
    g_dim = 0
    if gblocks:
        g_dim = next(iter(gblocks.values())).shape[0]
    fk = bk.fk
    matrices, spans = {}, {}
    for gen, terms in gens.items():
        gb = gblocks.get(gen) if gblocks else None
        if gblocks and gb is None:
            gb = np.zeros((g_dim, g_dim), dtype=complex)
        float_terms = [Term(t.shift, (lambda f=t.scalar, **c: f(fk, **c)),
                            t.fiber) for t in terms]
        matrices[gen] = assemble(box, float_terms, g_block=gb)
        spans[gen] = term_spans(terms)
    exact_terms = None
    if bk.exact_ok:
        ek = bk.ek
        exact_terms = {}
        for gen, terms in gens.items():
            rows = []
            for t, ef in zip(terms, efibs[gen]):
                if ef is None:
                    fn = (lambda f=t.scalar, **c: f(ek, **c))
                elif callable(ef):
                    fn = (lambda f=t.scalar, g=ef, **c:
                          f(ek, **c) * g(ek, **c))
                else:
                    fn = (lambda f=t.scalar, s=ef, **c: f(ek, **c) * s)
                rows.append((dict(t.shift), fn))
            exact_terms[gen] = rows
    return TruncatedRep(algebra=algebra, series=series, box=box,
                        params=params, matrices=matrices, spans=spans,
                        ctx=ctx, g_dim=g_dim, exact_terms=exact_terms)
