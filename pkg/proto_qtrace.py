"""Prototype of the factored per-sector trace route."""
import time
from fractions import Fraction

import numpy as np
import scipy.linalg as sla

from qcross.qscalars import QContext, casimir_eigenvalue
from qcross.states import zeta
from qcross.repkit import build_rep, box_for_series, SeriesParams
from qcross.repkit.checks import poly_matrix
from qcross.ncalg import parse


def ladder_values(ctx, two_l_lo, count):
    return np.array([float(casimir_eigenvalue(ctx, Fraction(two_l_lo + 2 * j, 2)))
                     for j in range(count)])


def qtrace(x_str, z, N, ctx=None, verbose=False):
    t0 = time.time()
    fctx = ctx or QContext(q=0.5, p=0.75, mode='float')
    rep = build_rep('SU2SU2_I', SeriesParams(), box_for_series('SU2SU2_I', N=N), fctx)
    q = float(fctx.q)
    F = rep.matrix('F').tocsr()
    K = rep.matrix('K')
    kdiag = K.diagonal().real
    lam2 = (q - 1.0 / q) ** 2
    kd_state = (kdiag ** 2 / q + q / kdiag ** 2 - 2.0) / lam2

    cols = rep.box.cols()
    n, k, l = cols['n'], cols['k'], cols['l']
    s_lab = n + l
    w_lab = -n + 2 * k + l
    wmin, wmax = int(w_lab.min()), int(w_lab.max())
    span = wmax - wmin + 1
    key = (s_lab - int(s_lab.min())) * span + (w_lab - wmin)

    # F must map each sector (s,w) into (s,w-2) only
    Fc = F.tocoo()
    if Fc.nnz:
        ok = (s_lab[Fc.row] == s_lab[Fc.col]) & (w_lab[Fc.row] == w_lab[Fc.col] - 2)
        assert ok.all(), 'F breaks the charge grading'

    order = np.lexsort((n, key))
    ks = key[order]
    starts = np.flatnonzero(np.r_[True, ks[1:] != ks[:-1]])
    counts = np.diff(np.r_[starts, ks.size])
    buckets = {int(ks[i0]): order[i0:i0 + cnt] for i0, cnt in zip(starts, counts)}

    if x_str == '1':
        M = None
        Kinv = rep.matrix('Kinv')
        mdiag = (Kinv.diagonal().real) ** 2
    else:
        poly = parse(x_str, fctx) if isinstance(x_str, str) else x_str
        Kinv = rep.matrix('Kinv')
        M = (Kinv @ Kinv) @ poly_matrix(rep, poly)
        M = M.tocsr()

    zc = complex(z)
    rez = zc.real
    total = 0.0 + 0.0j
    phantoms = 0
    worst_drift = 0.0
    max_need = 0
    uncal = 0.0
    for kk, sel in buckets.items():
        m = sel.size
        s = int(s_lab[sel[0]]); w = int(w_lab[sel[0]])
        two_lmin = max(abs(s), abs(w))
        floor = float(casimir_eigenvalue(fctx, Fraction(two_lmin, 2)))
        if M is None:
            Ms = None
            mbound = m * mdiag[sel[0]]
        else:
            Ms = M[sel][:, sel].toarray()
            mbound = np.sqrt(m) * np.linalg.norm(Ms)
        # snapped spectrum >= floor, so |sector trace| <= floor^{-Re z} * mbound
        bound = mbound * floor ** (-rez)
        pk = kk - 2
        rsel = buckets.get(pk, np.empty(0, dtype=np.int64)) if w - 2 >= wmin else np.empty(0, dtype=np.int64)
        kd = kd_state[sel[0]]
        if rsel.size:
            B = F[rsel][:, sel].toarray()
            if np.iscomplexobj(B):
                B = B.real
            _, sv, Vt = sla.svd(B, full_matrices=True, lapack_driver='gesvd')
            ev = np.concatenate([sv ** 2, np.zeros(m - sv.size)]) + kd
        else:
            ev = np.full(m, kd)
            Vt = np.eye(m)
        o = np.argsort(ev)
        ev = ev[o]; Vt = Vt[o]
        lad = ladder_values(fctx, two_lmin, m)
        keep = ev >= 0.9 * floor
        phantoms += int(m - keep.sum())
        ev = ev[keep]; Vt = Vt[keep]
        nkeep = ev.size
        if nkeep == 0:
            continue
        snap = lad[:nkeep]
        guard = snap <= 1e6
        if guard.any():
            drift = np.abs(np.log(ev[guard] / snap[guard])).max()
            if drift > np.log(2.0):
                # level assignment ambiguous here; cost of a wrong slot is
                # bounded by twice the whole-sector bound
                uncal += 2.0 * bound
            elif bound > 1e-12:
                worst_drift = max(worst_drift, drift)
        powz = np.exp(-zc * np.log(snap))
        if M is None:
            wts = mdiag[sel[0]] * np.ones(nkeep)
        else:
            V = Vt.T.conj()
            wts = np.einsum('ij,ij->j', V.conj(), Ms @ V)
        total += (powz * wts).sum()
        max_need = max(max_need, nkeep)
    if uncal > 1e-10:
        raise ValueError(f'calibration uncertainty {uncal:.3e} too large; box too small')
    zv = zeta(fctx, z)
    val = total / zv
    dt = time.time() - t0
    if verbose:
        print(f'  N={N} x={x_str!r}: raw={total:.10g} zeta={zv:.10g} h={val:.12g} '
              f'phantoms={phantoms} uncal={uncal:.2e} '
              f'drift={worst_drift:.3g} maxlev={max_need} {dt:.1f}s')
    return val


if __name__ == '__main__':
    for N in (20, 30, 40, 60):
        v = qtrace('1', 2.0, N, verbose=True)
        print(f'N={N}: h(1) = {v.real:.15f}  gap = {abs(v - 1.0):.3e}')
