"""The three canonical solutions of x x* - q^2 x* x = 1 as matrices."""

from .series import SeriesParams, box_for_series, build_rep

_KIND_TO_SERIES = {
    "FockI": "ModelI",
    "ShiftedII_A": "ModelIIA",
    "UnitaryIII": "ModelIIIu",
}


def build_model_operator(kind, params, box, ctx):
    """Matrix of x for one of the canonical model operators."""
    try:
        series = _KIND_TO_SERIES[kind]
    except KeyError:
        raise KeyError(f"unknown model kind {kind!r}; "
                       f"one of {sorted(_KIND_TO_SERIES)}")
    if params is None:
        params = SeriesParams()
    rep = build_rep(series, params, box, ctx)
    return rep.matrix("x")


def model_box(kind, N=12, fiber_dim=1):
    return box_for_series(_KIND_TO_SERIES[kind], N=N, fiber_dim=fiber_dim)
