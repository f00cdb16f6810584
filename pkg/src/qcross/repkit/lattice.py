"""Finite lattice boxes and the sparse assembly engine for series builders.

A representation series acts on l2(lattice) (x) C^fiber_dim by finitely
many shift terms per generator.  Truncation drops image components that
leave the box; relation checks must therefore stay on the interior, at a
margin given by the total index shift of the relation.

Boundaries come in two kinds.  A genuine boundary (n = 0 for the Fock-type
indices) carries vanishing coefficients in the series formulas, so no
margin is needed there; an artificial cut (the upper end of every range,
both ends of the two-sided ranges) does need one.  LatticeBox records a
cut flag per side.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp


@dataclass(frozen=True)
class LatticeBox:
    names: tuple
    los: tuple
    his: tuple
    cuts: tuple          # per index: (lower_is_cut, upper_is_cut)
    fiber_dim: int = 1
    _cols: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if len(self.names) != len(self.los) or len(self.names) != len(self.his):
            raise ValueError("index metadata lengths differ")
        for lo, hi in zip(self.los, self.his):
            if hi < lo:
                raise ValueError(f"empty index range [{lo},{hi}]")
        if self.fiber_dim < 1:
            raise ValueError("fiber_dim must be >= 1")
        sizes = [hi - lo + 1 for lo, hi in zip(self.los, self.his)]
        grids = np.meshgrid(*[np.arange(lo, hi + 1)
                              for lo, hi in zip(self.los, self.his)],
                            indexing="ij")
        for name, g in zip(self.names, grids):
            self._cols[name] = g.reshape(-1)
        self._cols["_sizes"] = tuple(sizes)

    @property
    def sizes(self):
        return self._cols["_sizes"]

    @property
    def npoints(self):
        out = 1
        for s in self.sizes:
            out *= s
        return out

    @property
    def dim(self):
        return self.npoints * self.fiber_dim

    def cols(self):
        return {n: self._cols[n] for n in self.names}

    def cols_at(self, ranks):
        return {n: self._cols[n][ranks] for n in self.names}

    def rank_of(self, **pt):
        rank = 0
        for name, lo, size in zip(self.names, self.los, self.sizes):
            v = pt[name]
            if not (lo <= v <= lo + size - 1):
                raise ValueError(f"{name}={v} outside box")
            rank = rank * size + (v - lo)
        return rank

    def point_of(self, rank):
        out = {}
        for name, lo, size in zip(reversed(self.names), reversed(self.los),
                                  reversed(self.sizes)):
            out[name] = lo + rank % size
            rank //= size
        return out

    def shift_ranks(self, shift):
        """Vectorized target ranks for a lattice shift.

        Returns (valid mask over source points, target ranks; garbage where
        invalid)."""
        npts = self.npoints
        valid = np.ones(npts, dtype=bool)
        rank = np.zeros(npts, dtype=np.int64)
        for name, lo, size in zip(self.names, self.los, self.sizes):
            tc = self._cols[name] + shift.get(name, 0)
            valid &= (tc >= lo) & (tc <= lo + size - 1)
            rank = rank * size + np.clip(tc - lo, 0, size - 1)
        return valid, rank

    def interior_mask(self, margins):
        """Points at distance >= margin from every artificial cut."""
        npts = self.npoints
        ok = np.ones(npts, dtype=bool)
        for name, lo, size, (locut, hicut) in zip(self.names, self.los,
                                                  self.sizes, self.cuts):
            m = margins.get(name, 0)
            col = self._cols[name]
            if locut:
                ok &= col >= lo + m
            if hicut:
                ok &= col <= lo + size - 1 - m
        return ok

    def interior_columns(self, margins, g_dim=0):
        mask = self.interior_mask(margins)
        ranks = np.nonzero(mask)[0]
        fd = self.fiber_dim
        lattice_cols = (g_dim + ranks[:, None] * fd
                        + np.arange(fd)[None, :]).reshape(-1)
        if g_dim:
            return np.concatenate([np.arange(g_dim), lattice_cols])
        return lattice_cols


class Term:
    """One shift term of a generator: shift offsets, a vectorized scalar
    coefficient over the source indices, and an optional fiber factor.

    fiber is None (identity), a constant (fd, fd) matrix, or
    ("diag", fn) with fn(**index arrays) -> (npts, fd) diagonal values for
    index-dependent diagonal fiber factors.
    """

    __slots__ = ("shift", "scalar", "fiber")

    def __init__(self, shift, scalar, fiber=None):
        self.shift = dict(shift)
        self.scalar = scalar
        self.fiber = fiber


def term_spans(terms):
    spans = {}
    for t in terms:
        for name, d in t.shift.items():
            spans[name] = max(spans.get(name, 0), abs(d))
    return spans


def assemble(box: LatticeBox, terms, g_block=None) -> sp.csr_matrix:
    """Sparse matrix of sum(terms) on C^g (+) (l2(box) (x) C^fd).

    Image components leaving the box are dropped (truncation); the g_block
    (exactly known invariant summand) is copied verbatim.
    """
    fd = box.fiber_dim
    g = 0 if g_block is None else g_block.shape[0]
    dim = g + box.dim
    rows, cols, vals = [], [], []
    if g:
        gi, gj = np.nonzero(g_block)
        rows.append(gi)
        cols.append(gj)
        vals.append(np.asarray(g_block[gi, gj], dtype=complex).reshape(-1))
    src = np.arange(box.npoints)
    for t in terms:
        valid, tgt = box.shift_ranks(t.shift)
        s, d = src[valid], tgt[valid]
        if s.size == 0:
            continue
        c = np.asarray(t.scalar(**box.cols_at(s)), dtype=complex)
        c = np.broadcast_to(c, s.shape)
        fiber = t.fiber
        if fiber is None:
            slot = np.arange(fd)
            rows.append(((g + d * fd)[:, None] + slot).reshape(-1))
            cols.append(((g + s * fd)[:, None] + slot).reshape(-1))
            vals.append(np.repeat(c, fd))
        elif isinstance(fiber, tuple) and fiber[0] == "diag":
            dv = np.asarray(fiber[1](**box.cols_at(s)), dtype=complex)
            slot = np.arange(fd)
            rows.append(((g + d * fd)[:, None] + slot).reshape(-1))
            cols.append(((g + s * fd)[:, None] + slot).reshape(-1))
            vals.append((c[:, None] * dv).reshape(-1))
        else:
            w = np.asarray(fiber, dtype=complex)
            fi, fj = np.nonzero(w)
            for i, j in zip(fi, fj):
                rows.append(g + d * fd + i)
                cols.append(g + s * fd + j)
                vals.append(c * w[i, j])
    if not rows:
        return sp.csr_matrix((dim, dim), dtype=complex)
    mat = sp.coo_matrix(
        (np.concatenate(vals),
         (np.concatenate(rows), np.concatenate(cols))),
        shape=(dim, dim), dtype=complex)
    return mat.tocsr()


def export_matrix(mat, fh):
    """Coordinate-list text dump: row col re im per line."""
    coo = sp.coo_matrix(mat)
    for r, c, v in zip(coo.row, coo.col, coo.data):
        fh.write(f"{r} {c} {v.real:.17g} {v.imag:.17g}\n")
