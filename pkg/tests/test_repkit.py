"""Truncated matrix realizations: relation residuals for every series,
casimir scalars, charge conservation, distinguished vectors, descent probe.

Exact-mode bounds below are literal zeros: the coefficients are evaluated
in radical-extended rational arithmetic, so any nonzero residual is a
transcription error, not roundoff.  Float-mode relation residuals are
scale-normalized per interior column (the raw entries grow like q^{-N}).
"""

import math
from fractions import Fraction

import numpy as np
import pytest
import scipy.sparse as sp

from qcross.qscalars import QContext, casimir_eigenvalue
from qcross.repkit import (
    SERIES_IDS,
    SU2SU2_CHARGES,
    SU2SU2_CHARGE_SHIFTS,
    SeriesParams,
    all_relation_residuals,
    box_for_series,
    build_model_operator,
    build_rep,
    casimir_matrix,
    charge_residual,
    exact_apply_gen,
    exact_special_vector,
    exact_vector_norm,
    lowest_weight_probe,
    model_box,
    series_algebra,
    special_vector,
    spin_casimir_exact,
    spin_casimir_residual,
    star_residuals,
)

ECTX = QContext(q=Fraction(1, 2), p=Fraction(3, 4))
FCTX = QContext(q=0.5, p=0.75, mode="float")
Q = 0.5

SPIN = Fraction(3, 2)

# smaller boxes for the many-index series keep the exact sweep quick;
# exactness does not depend on the box size, only interior coverage does
_EXACT_N = {"GL2C2_I": 4, "SU2SU2_I": 5, "U0_II1": 5, "U0_II2": 5,
            "U0_III": 5, "GL2R3_I": 5}


def _rep(sid, ctx, N=6, **pkw):
    spin = SPIN if sid == "SpinL" else None
    box = box_for_series(sid, N=N, spin=spin)
    return build_rep(sid, SeriesParams(spin=spin, **pkw), box, ctx)


class TestRegistry:
    def test_algebra_map(self):
        assert series_algebra("SU2SU2_I") == "Uqsu2xOSUq2"
        assert series_algebra("GL2C2_I") == "Uqgl2xOhatC2q"
        assert series_algebra("CoordS2q") == "OS2q"
        with pytest.raises(KeyError):
            series_algebra("nope")

    def test_box_validation(self):
        with pytest.raises(KeyError):
            box_for_series("nope")
        with pytest.raises(ValueError):
            box_for_series("SpinL")           # needs spin
        box = box_for_series("SU2SU2_I", N=4)
        assert box.names == ("n", "k", "l")
        assert box.los == (0, 0, -4) and box.his == (4, 4, 4)

    def test_build_rejects_wrong_box(self):
        box = box_for_series("SU2R3_I", N=4)
        with pytest.raises(ValueError):
            build_rep("SU2SU2_I", SeriesParams(), box, ECTX)
        with pytest.raises(KeyError):
            build_rep("nope", SeriesParams(), box, ECTX)


class TestRelationResiduals:
    @pytest.mark.parametrize("sid", SERIES_IDS)
    def test_exact_mode_certifies_zero(self, sid):
        rep = _rep(sid, ECTX, N=_EXACT_N.get(sid, 8))
        assert rep.exact_terms is not None
        res = all_relation_residuals(rep)
        assert res, "no relations swept"
        assert max(res.values()) == 0.0

    @pytest.mark.parametrize("sid", SERIES_IDS)
    def test_float_mode_normalized(self, sid):
        rep = _rep(sid, FCTX, N=8)
        assert rep.exact_terms is None
        assert max(all_relation_residuals(rep).values()) <= 1e-12

    def test_nondefault_rational_params_stay_exact(self):
        rep = _rep("SU2SU2_I", ECTX, N=5, H=Fraction(9, 10))
        assert rep.exact_terms is not None
        assert max(all_relation_residuals(rep).values()) == 0.0
        rep = _rep("U0_II2", ECTX, N=5, A=Fraction(3, 5))
        assert max(all_relation_residuals(rep).values()) == 0.0
        rep = _rep("GL2C2_I", ECTX, N=4, B=Fraction(7, 8))
        assert max(all_relation_residuals(rep).values()) == 0.0

    def test_half_weight_H_stays_exact(self):
        # H = q^{1/2} enters the fibers as a single radical
        rep = _rep("SU2R3_I", ECTX, N=6, H=ECTX.qh_pow(1))
        assert rep.exact_terms is not None
        assert max(all_relation_residuals(rep).values()) == 0.0

    def test_fiber_windows_enforced(self):
        with pytest.raises(ValueError):
            _rep("SU2SU2_I", FCTX, N=4, H=1.2)
        with pytest.raises(ValueError):
            _rep("SU2SU2_I", FCTX, N=4, H=0.4)      # below q^{1/2}
        with pytest.raises(ValueError):
            _rep("U0_I2N", FCTX, N=4, N_normal=0.3)
        with pytest.raises(ValueError):
            _rep("GL2C2_I", FCTX, N=3, B=0.5)       # outside (p, 1]
        with pytest.raises(ValueError):
            _rep("SU2S2_I", FCTX, N=4, A=0.9)       # sphere fixes A = 1
        with pytest.raises(ValueError):
            _rep("SU2SU2_I", FCTX, N=4, epsilon=2)

    def test_fiber_dimension_two(self):
        box = box_for_series("SU2SU2_I", N=5, fiber_dim=2)
        rep = build_rep("SU2SU2_I", SeriesParams(H=np.array([0.8, 1.0])),
                        box, FCTX)
        assert rep.exact_terms is None   # exact path needs fiber_dim 1
        assert max(all_relation_residuals(rep).values()) <= 1e-12
        # the theorem-6.6 fiber: 2-dim, w = diag(1, -1)
        box = box_for_series("SU2S2_I", N=5, fiber_dim=2)
        rep = build_rep("SU2S2_I", SeriesParams(w=np.diag([1.0, -1.0])),
                        box, FCTX)
        assert max(all_relation_residuals(rep).values()) <= 1e-12

    def test_noncommuting_fibers_rejected(self):
        box = box_for_series("U0_II3", N=4, fiber_dim=2)
        v = np.array([[0.0, 1.0], [1.0, 0.0]])
        with pytest.raises(ValueError):
            build_rep("U0_II3",
                      SeriesParams(H=np.array([0.6, 1.0]), v=v), box, FCTX)


class TestSpinCasimir:
    @pytest.mark.parametrize("l", [0, Fraction(1, 2), 1, Fraction(5, 2), 4])
    def test_rational_scalar(self, l):
        worst, ev = spin_casimir_exact(ECTX, l)
        assert worst == 0
        assert ev == casimir_eigenvalue(ECTX, l)

    def test_matrix_is_scalar(self):
        for l in (Fraction(1, 2), SPIN, 3):
            rep = build_rep("SpinL", SeriesParams(spin=l),
                            box_for_series("SpinL", spin=l), FCTX)
            assert spin_casimir_residual(rep) <= 1e-11

    def test_spin_ladder_adjoint(self):
        rep = build_rep("SpinL", SeriesParams(spin=SPIN),
                        box_for_series("SpinL", spin=SPIN), FCTX)
        E, F = rep.matrix("E").toarray(), rep.matrix("F").toarray()
        assert np.abs(E.conj().T - F).max() <= 1e-13

    def test_closed_forms_cross_checked(self):
        # raises if EF-form and FE-form disagree on the interior
        casimir_matrix(_rep("SU2SU2_I", FCTX, N=6))
        casimir_matrix(_rep("SU2S2_I", FCTX, N=8))
        with pytest.raises(KeyError):
            casimir_matrix(_rep("CoordSU2", FCTX, N=6))

    def test_spin_validation(self):
        with pytest.raises(ValueError):
            spin_casimir_exact(ECTX, Fraction(1, 3))
        with pytest.raises(ValueError):
            spin_casimir_residual(_rep("SU2SU2_I", FCTX, N=4))


class TestStarsAndCharges:
    @pytest.mark.parametrize("sid", SERIES_IDS)
    def test_star_pairs_adjoint(self, sid):
        rep = _rep(sid, ECTX, N=_EXACT_N.get(sid, 6))
        sr = star_residuals(rep)
        assert sr, "no star pairs checked"
        assert max(sr.values()) <= 1e-12

    def test_charges_conserved(self):
        rep = _rep("SU2SU2_I", ECTX, N=5)
        bad = charge_residual(rep, SU2SU2_CHARGES, SU2SU2_CHARGE_SHIFTS)
        assert set(bad) == set(SU2SU2_CHARGE_SHIFTS)
        assert all(v == 0 for v in bad.values())


class TestSeriesConsistency:
    def test_enveloping_restriction_drops_l(self):
        # the central letter only shifts l; freezing l = 0 must reproduce
        # the series without it, matrix for matrix
        big = build_rep("GL2R3_I", SeriesParams(),
                        box_for_series("GL2R3_I", N=6, L=0), FCTX)
        small = _rep("SU2R3_I", FCTX, N=6)
        for g in ("E", "F", "K", "Kinv", "x1", "x2", "x3"):
            d = (big.matrix(g) - small.matrix(g)).toarray()
            assert np.abs(d).max() <= 1e-14, g

    def test_sphere_is_unit_radius_slice(self):
        s2 = _rep("SU2S2_I", FCTX, N=6)
        r3 = _rep("SU2R3_I", FCTX, N=6)
        for ys, xs in (("y1", "x1"), ("y2", "x2"), ("y3", "x3"),
                       ("E", "E"), ("K", "K")):
            d = (s2.matrix(ys) - r3.matrix(xs)).toarray()
            assert np.abs(d).max() == 0.0, ys


class TestModels:
    def test_fock_ladder_normalization(self):
        x = build_model_operator("FockI", None, model_box("FockI", N=8), FCTX)
        e1 = np.zeros(x.shape[0], dtype=complex)
        e1[1] = 1.0
        out = x @ e1
        assert abs(out[0] - 1.0) <= 1e-15          # lambda_1/sqrt(1-q^2) = 1
        assert np.abs(out[1:]).max() == 0.0
        assert np.abs((x @ np.eye(x.shape[0])[:, 0])).max() == 0.0

    @pytest.mark.parametrize("kind", ["FockI", "ShiftedII_A"])
    def test_defining_relation_interior(self, kind):
        x = build_model_operator(kind, None, model_box(kind, N=10), FCTX)
        xs = x.conj().T.tocsr()
        R = (x @ xs - Q ** 2 * xs @ x
             - sp.identity(x.shape[0], format="csr")).toarray()
        scale = max(1.0, float(np.abs(x.toarray()).max()) ** 2)
        assert np.abs(R[1:-1, 1:-1]).max() / scale <= 1e-12
        # the cut leaves an O(1) defect on the boundary row
        assert np.abs(R).max() > 0.1

    def test_unitary_solution_has_no_boundary(self):
        w = np.array([[0.0, 1j], [1j, 0.0]])
        box = model_box("UnitaryIII", fiber_dim=2)
        x = build_model_operator("UnitaryIII", SeriesParams(w=w), box, FCTX)
        xs = x.conj().T.tocsr()
        R = (x @ xs - Q ** 2 * xs @ x
             - sp.identity(x.shape[0], format="csr")).toarray()
        assert np.abs(R).max() <= 1e-15

    def test_validation(self):
        with pytest.raises(KeyError):
            build_model_operator("nope", None, model_box("FockI"), FCTX)
        with pytest.raises(ValueError):
            build_model_operator("ShiftedII_A", SeriesParams(A=0.1),
                                 model_box("ShiftedII_A"), FCTX)


class TestSpecialVectors:
    def test_v0_cut_aligned_annihilation(self):
        rep = _rep("SU2SU2_I", FCTX, N=12)
        v, d = special_vector("v0_I_H1", rep)
        assert abs(d["norm"] - math.sqrt((1 - Q ** 26) / (1 - Q ** 2))) < 1e-12
        assert d["E_residual"] <= 1e-10
        assert d["F_residual"] <= 1e-10
        assert d["K_minus_H_residual"] == 0.0

    def test_v0_F_blocked_away_from_H1(self):
        rep = _rep("SU2SU2_I", FCTX, N=12, H=0.9)
        v, d = special_vector("v0_I_H1", rep)
        assert d["E_residual"] <= 1e-10
        assert d["K_minus_H_residual"] <= 1e-12
        assert d["F_residual"] >= 0.3

    def test_v0_sphere_vacuum(self):
        rep = _rep("SU2S2_I", FCTX, N=12)
        v, d = special_vector("v0_S2", rep)
        assert abs(d["norm"] - math.sqrt(1 - Q ** 26)) < 1e-12
        assert d["E_residual"] <= 1e-9
        assert d["F_residual"] <= 1e-9
        assert d["K_residual"] == 0.0

    def test_v_half_weight_structure(self):
        with pytest.raises(ValueError):
            special_vector("v_half", _rep("SU2S2_I", FCTX, N=8))  # H = 1
        rep = _rep("SU2S2_I", FCTX, N=12, H=math.sqrt(Q))
        v, d = special_vector("v_half", rep)
        assert d["E_residual"] <= 1e-8
        assert d["K_weight_residual"] <= 1e-12
        assert abs(d["F_image_norm"] - math.sqrt(4.0 / 15.0)) < 1e-6
        assert d["F_image_K_weight_residual"] <= 1e-12

    def test_kind_and_series_validation(self):
        rep = _rep("SU2S2_I", FCTX, N=6)
        with pytest.raises(KeyError):
            special_vector("nope", rep)
        with pytest.raises(ValueError):
            special_vector("v0_I_H1", rep)
        with pytest.raises(ValueError):
            special_vector("v0_S2", rep, seed=np.ones(3))


class TestExactVectors:
    def test_v0_truncations_all_exact_zero(self):
        # float evaluation of these norms drowns in q^{-N} cancellation
        # noise; exact arithmetic shows they vanish identically
        for N in (6, 10, 14):
            rep = _rep("SU2SU2_I", ECTX, N=N)
            vec, d = exact_special_vector("v0_I_H1", rep)
            assert d["E_residual"] == 0.0
            assert d["F_residual"] == 0.0
            assert d["K_minus_H_residual"] == 0.0
            assert abs(d["norm"] ** 2 - (1 - Q ** (2 * N + 2))
                       / (1 - Q ** 2)) < 1e-12

    def test_v0_rational_H_keeps_E_kills_F(self):
        rep = _rep("SU2SU2_I", ECTX, N=10, H=Fraction(9, 10))
        vec, d = exact_special_vector("v0_I_H1", rep)
        assert d["E_residual"] == 0.0
        assert d["K_minus_H_residual"] == 0.0
        assert d["F_residual"] >= 0.5

    def test_v_half_doublet_exact(self):
        for w in (1, -1):
            rep = _rep("SU2S2_I", ECTX, N=14, H=ECTX.qh_pow(1), w=w)
            vec, d = exact_special_vector("v_half", rep)
            assert d["E_residual"] == 0.0
            assert d["K_weight_residual"] == 0.0
            assert d["F_image_norm"] > 0.5
            assert d["F_image_K_weight_residual"] == 0.0
            assert d["F_squared_residual"] == 0.0

    def test_v_half_requires_exact_half_weight(self):
        rep = _rep("SU2S2_I", ECTX, N=8)
        with pytest.raises(ValueError):
            exact_special_vector("v_half", rep)
        rep = _rep("SU2S2_I", FCTX, N=8, H=math.sqrt(Q))
        with pytest.raises(ValueError):
            exact_special_vector("v_half", rep)   # float rep, no exact terms


def _chain_lowest_weight(rep):
    """Solve F v = 0 exactly on the chain (m+1, m, -m); the cut-aligned
    recurrence gives the lowest-weight vector of one T_{1/2} component."""
    ctx = rep.ctx
    N = rep.box.his[0]
    vec = {(1, 0, 0): ctx.one()}
    for m in range(N - 1):
        fv = exact_apply_gen(rep, "F", vec)
        tgt = (m + 2, m, -m - 1)
        src = (m + 2, m + 1, -m - 1)
        co = exact_apply_gen(rep, "F", {src: ctx.one()})[tgt]
        vec[src] = -fv[tgt] * co.inverse()
    return vec


class TestProbe:
    def test_spin_highest_weight_descends(self):
        l = Fraction(2)
        rep = build_rep("SpinL", SeriesParams(spin=l),
                        box_for_series("SpinL", spin=l), FCTX)
        v = np.zeros(rep.dim, dtype=complex)
        v[rep.dim - 1] = 1.0
        w, wp, d = lowest_weight_probe(rep, v, l)
        assert wp is None
        assert d["nonzero"]
        assert d["F_w_residual"] == 0.0
        assert d["K_w_residual"] <= 1e-12

    def test_v_half_exact_descent(self):
        rep = _rep("SU2R3_I", ECTX, N=16, H=ECTX.qh_pow(1))
        vec, _ = exact_special_vector("v_half", rep)
        w, wp, d = lowest_weight_probe(rep, vec, Fraction(1, 2))
        assert wp is None
        assert d["nonzero"]
        assert d["F_w_residual"] == 0.0       # exact F^2 annihilation
        assert d["K_w_residual"] == 0.0

    def test_coordinate_descent_identities(self):
        rep = _rep("SU2SU2_I", ECTX, N=12)
        vec = _chain_lowest_weight(rep)
        assert exact_vector_norm(exact_apply_gen(rep, "F", vec)) == 0.0
        w, wp, d = lowest_weight_probe(rep, vec, Fraction(1, 2))
        # for this component the pair degenerates: w' vanishes identically
        # and w carries the weight-0 descent
        assert d["w_prime_norm"] == 0.0
        assert d["w_norm"] > 1.0
        assert d["nonzero"]
        assert d["K_w_residual"] == 0.0
        assert d["E_v_norm"] > 1.0
        # a w' - q b w = E v away from the cut (words of degree two leak
        # only within their span of the boundary)
        N = rep.box.his[0]
        ctx = rep.ctx
        q = ctx.scalar(Fraction(1, 2))
        resid = dict(exact_apply_gen(rep, "a", wp))
        for pt, c in exact_apply_gen(rep, "b", w).items():
            resid[pt] = resid.get(pt, ctx.zero()) - q * c
        for pt, c in exact_apply_gen(rep, "E", vec).items():
            resid[pt] = resid.get(pt, ctx.zero()) - c
        for pt, c in resid.items():
            if not c.is_zero():
                assert max(pt[0], pt[1], -pt[2]) >= N - 1, pt
        # same for F w: the infinite-lattice identity F w = 0 truncates to
        # an exact zero on every interior component
        for pt, c in exact_apply_gen(rep, "F", w).items():
            if not c.is_zero():
                assert max(pt[0], pt[1], -pt[2]) >= N - 1, pt

    def test_validation(self):
        rep = _rep("SU2SU2_I", FCTX, N=8)
        v0, _ = special_vector("v0_I_H1", rep)
        with pytest.raises(ValueError):
            lowest_weight_probe(rep, v0, 0)       # descent needs l >= 1/2
        with pytest.raises(ValueError):
            lowest_weight_probe(rep, np.zeros(rep.dim), Fraction(1, 2))
        with pytest.raises(ValueError):
            lowest_weight_probe(rep, v0, 0.3)
        rng = np.random.default_rng(7)
        with pytest.raises(ValueError):
            lowest_weight_probe(rep, rng.normal(size=rep.dim), Fraction(1, 2))
        srep = build_rep("SpinL", SeriesParams(spin=1),
                         box_for_series("SpinL", spin=1), FCTX)
        low = np.zeros(srep.dim, dtype=complex)
        low[0] = 1.0                               # lowest, not highest
        with pytest.raises(ValueError):
            lowest_weight_probe(srep, low, 1)
